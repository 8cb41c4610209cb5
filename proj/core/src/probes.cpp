#include "rsd/probes.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rsd/format.hpp"
#include "rsd/svg.hpp"

namespace rsd {

namespace {

Point lerp(PointView a, PointView b, double t) {
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

void check_segment(PointView x_in, PointView x_out) {
  if (x_in.size() != x_out.size() || x_in.empty()) {
    throw std::invalid_argument("binary search: endpoints must share a nonzero dimension");
  }
}

// Bisection on a monotone-in-sign predicate along [0, 1]; returns the crossing
// parameter. `side(t)` is true on the x_in side.
template <typename Side>
double bisect_crossing(Side side) {
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
    const double mid = 0.5 * (lo + hi);
    (side(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BoundarySearch binary_search_boundary(const LabelQuery& query, PointView x_in, PointView x_out,
                                      double tol, std::size_t max_steps) {
  check_segment(x_in, x_out);
  if (!(tol > 0.0)) throw std::invalid_argument("binary search: tol must be positive");
  if (max_steps == 0) throw std::invalid_argument("binary search: max_steps must be >= 1");

  const Label y_in = query(x_in);
  const Label y_out = query(x_out);
  if (y_in == y_out) {
    throw SearchPreconditionError("binary search: both endpoints returned label " +
                                  std::to_string(to_int(y_in)));
  }

  BoundarySearch result;
  result.inside_label = y_in;
  do {
    const double mid = 0.5 * (result.t_lo + result.t_hi);
    const Point x = lerp(x_in, x_out, mid);
    (query(x) == y_in ? result.t_lo : result.t_hi) = mid;
    ++result.steps;
  } while (result.steps < max_steps && result.t_hi - result.t_lo > tol);

  result.inside = lerp(x_in, x_out, result.t_lo);
  result.outside = lerp(x_in, x_out, result.t_hi);
  result.boundary = lerp(x_in, x_out, 0.5 * (result.t_lo + result.t_hi));
  return result;
}

BoundarySearch binary_search_boundary(DecisionOracle& oracle, PointView x_in, PointView x_out,
                                      double tol, std::size_t max_steps) {
  return binary_search_boundary([&oracle](PointView x) { return oracle.query(x); }, x_in, x_out,
                                tol, max_steps);
}

OffsetStatistics binary_search_distribution(std::shared_ptr<const Classifier> base,
                                            const SmoothingConfig& cfg, PointView x_in,
                                            PointView x_out, std::size_t trials, double tol,
                                            std::uint64_t seed, std::size_t bins) {
  check_segment(x_in, x_out);
  if (trials == 0) throw std::invalid_argument("binary_search_distribution: trials must be >= 1");
  if (bins == 0) throw std::invalid_argument("binary_search_distribution: bins must be >= 1");

  OffsetStatistics stats;
  stats.segment_length = l2_distance(x_in, x_out);

  if (cfg.sigma > 0.0) {
    auto p1 = [&](double t) {
      const auto pi = exact_pi(*base, lerp(x_in, x_out, t), cfg.sigma);
      if (!pi) {
        throw std::invalid_argument(
            "binary_search_distribution: exact class probabilities unavailable for " +
            std::string(base->kind()));
      }
      return pi->p1.value();
    };
    const double p_in = p1(0.0), p_out = p1(1.0);
    if ((p_in - 0.5) * (p_out - 0.5) >= 0.0) {
      throw std::invalid_argument(
          "binary_search_distribution: smoothed class probability does not cross 1/2 on the "
          "segment");
    }
    const bool in_high = p_in > 0.5;
    stats.crossing_t = bisect_crossing([&](double t) { return (p1(t) > 0.5) == in_high; });
  } else {
    const Label y_in = base->decide(x_in);
    if (y_in == base->decide(x_out)) {
      throw std::invalid_argument(
          "binary_search_distribution: base classifier does not change label on the segment");
    }
    stats.crossing_t =
        bisect_crossing([&](double t) { return base->decide(lerp(x_in, x_out, t)) == y_in; });
  }

  constexpr std::size_t kRetries = 3;
  constexpr std::size_t kMaxSteps = 64;
  SmoothingConfig trial_cfg = cfg;
  trial_cfg.seed = seed;
  for (std::size_t i = 0; i < trials; ++i) {
    bool done = false;
    for (std::size_t attempt = 0; attempt <= kRetries && !done; ++attempt) {
      const std::uint64_t stream = derive_key(i, attempt);
      try {
        std::optional<BoundarySearch> found;
        if (cfg.sigma > 0.0) {
          DecisionOracle oracle(base, trial_cfg, stream);
          found = binary_search_boundary(oracle, x_in, x_out, tol, kMaxSteps);
        } else {
          DecisionOracle oracle(base);
          found = binary_search_boundary(oracle, x_in, x_out, tol, kMaxSteps);
        }
        const double t_found = 0.5 * (found->t_lo + found->t_hi);
        stats.offsets.push_back((t_found - stats.crossing_t) * stats.segment_length);
        done = true;
      } catch (const SearchPreconditionError&) {
      }
    }
    if (!done) ++stats.failures;
  }

  if (!stats.offsets.empty()) {
    double sum = 0.0;
    for (double o : stats.offsets) sum += o;
    stats.mean = sum / static_cast<double>(stats.offsets.size());
    double ss = 0.0;
    for (double o : stats.offsets) ss += (o - stats.mean) * (o - stats.mean);
    stats.stddev = stats.offsets.size() > 1
                       ? std::sqrt(ss / static_cast<double>(stats.offsets.size() - 1))
                       : 0.0;
  }

  double span = 0.0;
  for (double o : stats.offsets) span = std::max(span, std::abs(o));
  if (span == 0.0) span = std::max(tol * stats.segment_length, 1e-12);
  stats.bin_edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    stats.bin_edges[b] = -span + 2.0 * span * static_cast<double>(b) / static_cast<double>(bins);
  }
  stats.counts.assign(bins, 0);
  for (double o : stats.offsets) {
    auto b = static_cast<std::size_t>((o + span) / (2.0 * span) * static_cast<double>(bins));
    ++stats.counts[std::min(b, bins - 1)];
  }
  return stats;
}

double smoothed_flip_probability(const ClassProbabilities& pi, std::uint64_t n, Label label_o) {
  // g_{sigma,n} says 1 iff class-1 votes reach floor(n/2) + 1; a tie goes to 0.
  if (label_o == Label::kZero) return binomial_tail_geq(n, n / 2 + 1, pi.p1).value();
  return binomial_tail_geq(n, n - n / 2, pi.p0).value();
}

std::vector<ProfilePoint> direction_profile(const Classifier& base, const SmoothingConfig& cfg,
                                            PointView x_o, PointView direction,
                                            std::span<const double> t_grid,
                                            std::size_t probes_per_point, std::uint64_t seed) {
  if (x_o.size() != base.dimension() || direction.size() != base.dimension()) {
    throw std::invalid_argument("direction_profile: dimension mismatch");
  }
  if (std::abs(l2_norm(direction) - 1.0) > 1e-9) {
    throw std::invalid_argument("direction_profile: direction must be a unit vector");
  }
  if (probes_per_point == 0) {
    throw std::invalid_argument("direction_profile: probes_per_point must be >= 1");
  }

  const bool smoothed = cfg.sigma > 0.0;
  std::optional<ClassProbabilities> pi_o;
  if (smoothed) pi_o = exact_pi(base, x_o, cfg.sigma);
  const Label label_o = pi_o ? pi_o->winner() : base.decide(x_o);

  std::vector<ProfilePoint> profile;
  profile.reserve(t_grid.size());
  Point x(x_o.size());
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double t = t_grid[k];
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = x_o[i] + t * direction[i];

    ProfilePoint point;
    point.t = t;
    const RandomStream stream(seed, k);
    std::size_t flips = 0;
    for (std::size_t p = 0; p < probes_per_point; ++p) {
      if (smoothed_decide(base, cfg, x, stream.decision(p)).label != label_o) ++flips;
    }
    point.flip_probability = static_cast<double>(flips) / static_cast<double>(probes_per_point);
    if (smoothed) {
      if (const auto pi = exact_pi(base, x, cfg.sigma)) {
        point.exact_flip = smoothed_flip_probability(*pi, cfg.n, label_o);
      }
    } else {
      point.exact_flip = base.decide(x) != label_o ? 1.0 : 0.0;
    }
    profile.push_back(point);
  }
  return profile;
}

double SliceMap::coord(std::size_t i) const {
  return -extent + 2.0 * extent * static_cast<double>(i) / static_cast<double>(resolution - 1);
}

Point SliceMap::point(std::size_t i, std::size_t j) const {
  const double u = coord(i), v = coord(j);
  Point x(center.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = center[k] + u * dir1[k] + v * dir2[k];
  return x;
}

double SliceMap::fraction_one() const {
  if (grid.empty()) return 0.0;
  const auto ones = std::count(grid.begin(), grid.end(), Label::kOne);
  return static_cast<double>(ones) / static_cast<double>(grid.size());
}

SliceMap slice_map(DecisionOracle& oracle, PointView center, PointView dir1, PointView dir2,
                   double extent, std::size_t resolution) {
  const std::size_t d = oracle.dimension();
  if (center.size() != d || dir1.size() != d || dir2.size() != d) {
    throw std::invalid_argument("slice_map: dimension mismatch");
  }
  if (resolution < 2) throw std::invalid_argument("slice_map: resolution must be >= 2");
  if (!(extent >= 0.0) || !std::isfinite(extent)) {
    throw std::invalid_argument("slice_map: extent must be finite and nonnegative");
  }

  SliceMap map;
  map.center.assign(center.begin(), center.end());
  map.extent = extent;
  map.resolution = resolution;

  const double n1 = l2_norm(dir1);
  if (!(n1 > 0.0)) throw std::invalid_argument("slice_map: dir1 is zero");
  map.dir1.resize(d);
  for (std::size_t k = 0; k < d; ++k) map.dir1[k] = dir1[k] / n1;
  const double proj = dot(dir2, map.dir1);
  map.dir2.resize(d);
  for (std::size_t k = 0; k < d; ++k) map.dir2[k] = dir2[k] - proj * map.dir1[k];
  const double n2 = l2_norm(map.dir2);
  if (!(n2 > 1e-12 * l2_norm(dir2))) {
    throw std::invalid_argument("slice_map: directions are parallel");
  }
  for (double& v : map.dir2) v /= n2;

  map.grid.resize(resolution * resolution);
  for (std::size_t j = 0; j < resolution; ++j) {
    for (std::size_t i = 0; i < resolution; ++i) {
      map.grid[j * resolution + i] = oracle.query(map.point(i, j));
    }
  }
  return map;
}

void write_slice_csv(const SliceMap& map, std::ostream& out) {
  out << "u,v,label\n";
  for (std::size_t j = 0; j < map.resolution; ++j) {
    for (std::size_t i = 0; i < map.resolution; ++i) {
      out << fmt_num(map.coord(i)) << ',' << fmt_num(map.coord(j)) << ',' << to_int(map.at(i, j))
          << '\n';
    }
  }
}

std::string slice_svg(const SliceMap& map, const std::string& title) {
  SvgPlot plot(560, 480, title.empty() ? "decision slice" : title);
  const double half = map.extent > 0.0
                          ? map.extent / static_cast<double>(map.resolution - 1)
                          : 0.5 / static_cast<double>(map.resolution);
  const double lo = map.extent > 0.0 ? -map.extent - half : -0.5;
  plot.set_x_range(lo, -lo);
  plot.set_y_range(lo, -lo);
  plot.set_labels("u (dir1)", "v (dir2)");
  for (std::size_t j = 0; j < map.resolution; ++j) {
    for (std::size_t i = 0; i < map.resolution; ++i) {
      const double u = map.extent > 0.0 ? map.coord(i) : lo + (2.0 * static_cast<double>(i) + 1.0) * half;
      const double v = map.extent > 0.0 ? map.coord(j) : lo + (2.0 * static_cast<double>(j) + 1.0) * half;
      plot.cell(u - half, v - half, u + half, v + half,
                map.at(i, j) == Label::kOne ? "#f4a582" : "#92c5de");
    }
  }
  return plot.render();
}

NormalEstimate estimate_normal(DecisionOracle& oracle, PointView x_b, std::size_t num_probes,
                               double probe_sigma, std::uint64_t seed) {
  const std::size_t d = oracle.dimension();
  if (x_b.size() != d) throw std::invalid_argument("estimate_normal: dimension mismatch");
  if (num_probes < 2) throw std::invalid_argument("estimate_normal: num_probes must be >= 2");
  if (!(probe_sigma > 0.0)) throw std::invalid_argument("estimate_normal: probe_sigma must be > 0");

  CounterRng rng(seed);
  NormalEstimate est;
  est.probes = num_probes;
  Point sum(d, 0.0), u(d), x(d);
  std::size_t ones = 0;
  for (std::size_t p = 0; p < num_probes; ++p) {
    for (std::size_t k = 0; k < d; ++k) {
      u[k] = probe_sigma * rng.normal();
      x[k] = x_b[k] + u[k];
    }
    const bool one = oracle.query(x) == Label::kOne;
    if (one) ++ones;
    const double s = one ? 1.0 : -1.0;
    for (std::size_t k = 0; k < d; ++k) sum[k] += s * u[k];
  }
  est.positive_fraction = static_cast<double>(ones) / static_cast<double>(num_probes);
  est.flip_fraction = std::min(est.positive_fraction, 1.0 - est.positive_fraction);
  est.degenerate = ones == 0 || ones == num_probes;
  est.normal.assign(d, 0.0);
  const double norm = l2_norm(sum);
  if (!est.degenerate && norm > 0.0) {
    for (std::size_t k = 0; k < d; ++k) est.normal[k] = sum[k] / norm;
  } else {
    est.degenerate = true;
  }
  return est;
}

void write_profile_csv(const std::vector<ProfilePoint>& profile, std::ostream& out) {
  out << "t,flip_probability,exact_flip\n";
  for (const auto& p : profile) {
    out << fmt_num(p.t) << ',' << fmt_num(p.flip_probability) << ','
        << (p.exact_flip ? fmt_num(*p.exact_flip) : std::string()) << '\n';
  }
}

void write_offsets_csv(const OffsetStatistics& stats, std::ostream& out) {
  // Positive offsets lie beyond the reference boundary as seen from x_in.
  out << "trial,offset_beyond_boundary\n";
  for (std::size_t i = 0; i < stats.offsets.size(); ++i) {
    out << i << ',' << fmt_num(stats.offsets[i]) << '\n';
  }
}

void write_histogram_csv(const OffsetStatistics& stats, std::ostream& out) {
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b < stats.counts.size(); ++b) {
    out << fmt_num(stats.bin_edges[b]) << ',' << fmt_num(stats.bin_edges[b + 1]) << ','
        << stats.counts[b] << '\n';
  }
}

}  // namespace rsd

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "rsd/attacks.hpp"
#include "rsd/format.hpp"
#include "rsd/harness.hpp"
#include "rsd/probes.hpp"
#include "rsd/smoothing.hpp"

namespace rsd {

namespace {

// Stream tags; each consumer of the master seed gets its own family.
constexpr std::uint64_t kTagData = 0xD1;
constexpr std::uint64_t kTagTrain = 0xD2;
constexpr std::uint64_t kTagCalibrate = 0xD3;
constexpr std::uint64_t kTagCertify = 0xD4;
constexpr std::uint64_t kTagClean = 0xD5;
constexpr std::uint64_t kTagAttack = 0xD6;
constexpr std::uint64_t kTagVerify = 0xD7;
constexpr std::uint64_t kTagProbe = 0xD8;
constexpr std::uint64_t kTagSlice = 0xD9;

std::uint64_t run_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t k = 0x5EEDULL;
  for (std::uint64_t p : parts) k = derive_key(k, p);
  return k;
}

std::string cell(double v) { return fmt_num(v); }
std::string cell(std::uint64_t v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "1" : "0"; }
std::string cell(Label y) { return std::to_string(to_int(y)); }

std::string sanitize(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return text;
}

struct Config {
  std::size_t sigma_index;
  std::size_t n_index;
  double sigma;
  std::uint64_t n;
};

// sigma = 0 means no smoothing; the n grid collapses to the single config n = 1.
std::vector<Config> smoothing_configs(const std::vector<double>& sigmas,
                                      const std::vector<std::uint64_t>& ns) {
  std::vector<Config> out;
  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    if (sigmas[si] == 0.0) {
      out.push_back({si, 0, 0.0, 1});
      continue;
    }
    for (std::size_t ni = 0; ni < ns.size(); ++ni) out.push_back({si, ni, sigmas[si], ns[ni]});
  }
  return out;
}

std::pair<Point, Point> probe_segment(const ExperimentSpec& spec, const Fixture& fx) {
  if (!spec.probe.x_in.empty()) return {spec.probe.x_in, spec.probe.x_out};
  std::optional<Point> in, out;
  for (const Point& x : fx.test.points) {
    const Label y = fx.classifier->decide(x);
    if (y == Label::kZero && !in) in = x;
    if (y == Label::kOne && !out) out = x;
    if (in && out) return {*in, *out};
  }
  throw std::runtime_error("probe segment: the base classifier does not label both classes on "
                           "the test split; set probe.x_in and probe.x_out");
}

Point unit(const Point& v) {
  const double n = l2_norm(v);
  if (!(n > 0.0)) throw std::runtime_error("zero-length direction");
  Point out(v);
  for (double& x : out) x /= n;
  return out;
}

Point difference(const Point& a, const Point& b) {
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

struct Context {
  const ExperimentSpec& spec;
  const Fixture& fx;
  std::vector<double> sigmas;
  ResultSet& results;
};

std::size_t test_count(const Context& ctx) {
  return std::min(ctx.spec.test_points, ctx.fx.test.size());
}

void run_certify(Context& ctx) {
  const auto& spec = ctx.spec;
  const Classifier& base = *ctx.fx.classifier;
  const std::size_t points = test_count(ctx);
  ctx.results.columns = {"point_id", "sigma",  "n",       "true_label",   "pred_label",
                         "votes",    "pi_hat", "pi_lower", "radius_lower", "correct",
                         "tie",      "radius_exact", "correct_exact"};
  const std::size_t tasks = ctx.sigmas.size() * points;
  std::vector<std::vector<std::string>> rows(tasks);
  parallel_for(tasks, spec.jobs, [&](std::size_t task) {
    const std::size_t si = task / points, i = task % points;
    const double sigma = ctx.sigmas[si];
    const SmoothingConfig cfg(sigma, spec.smoothing.certify_n, spec.smoothing.alpha);
    const Point& x = ctx.fx.test.points[i];
    const Label truth = ctx.fx.test.labels[i];
    const auto d = smoothed_decide(base, cfg, x,
                                   RandomStream(derive_key(spec.seed, kTagCertify),
                                                run_key({i, si}))
                                       .decision(0));
    const bool correct = d.label == truth;
    std::string radius_exact, correct_exact;
    if (sigma > 0.0) {
      if (const auto pi = exact_pi(base, x, sigma)) {
        const Label w = pi->winner();
        radius_exact = cell(certified_radius(clamp_pi(pi->of(w)), sigma));
        correct_exact = cell(w == truth);
      }
    }
    rows[task] = {cell(std::uint64_t{i}), cell(sigma), cell(cfg.n), cell(truth), cell(d.label),
                  cell(d.votes), cell(d.pi_hat.value()), cell(d.pi_lower.value()),
                  cell(correct ? d.certified_radius_lower : 0.0), cell(correct), cell(d.tie),
                  radius_exact, correct_exact};
  });
  // sigma-major task order; records are keyed (point_id, sigma)
  for (std::size_t i = 0; i < points; ++i) {
    for (std::size_t si = 0; si < ctx.sigmas.size(); ++si) {
      ctx.results.rows.push_back(std::move(rows[si * points + i]));
    }
  }
}

struct VerifiedDistortion {
  bool verified = false;
  double distortion = 0.0;
};

// Walks the milestones from the best one backward until one passes the P_a
// check, trying at most max_verify candidates that are at least 1% apart.
VerifiedDistortion verify_trace(const ExperimentSpec& spec, const Classifier& base,
                                const Config& c, const AttackTrace& trace, Label label_o,
                                double pa, std::uint64_t key) {
  if (trace.milestones.empty()) return {};
  if (c.sigma == 0.0) return {true, trace.milestones.back().best_distortion};
  const SmoothingConfig cfg(c.sigma, c.n, spec.smoothing.alpha);
  const VerifyMode mode = spec.attack.verify == "exact-count" ? VerifyMode::kExactCount
                                                              : VerifyMode::kRepeatedQuery;
  const RandomStream root(derive_key(spec.seed, kTagVerify), key);
  std::size_t tried = 0;
  double last = -1.0;
  for (auto it = trace.milestones.rbegin(); it != trace.milestones.rend(); ++it) {
    if (tried >= spec.attack.max_verify) break;
    if (last >= 0.0 && it->best_distortion < 1.01 * last) continue;
    last = it->best_distortion;
    const auto verdict = verify_adversarial(base, cfg, it->x, label_o, Probability(pa), mode,
                                            root.substream(tried), spec.attack.repeat_constant);
    ++tried;
    if (verdict.adversarial) return {true, it->best_distortion};
  }
  return {};
}

void write_trace_files(const ExperimentSpec& spec, const std::string& name,
                       const AttackTrace& trace, const AttackConfig& cfg) {
  const auto dir = std::filesystem::path(spec.out) / "traces";
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / (name + ".csv"));
  write_trace_csv(trace, csv);
  std::ofstream json(dir / (name + ".json"));
  json << trace_sidecar_json(trace, cfg);
}

void run_attack_sweep(Context& ctx) {
  const auto& spec = ctx.spec;
  const auto& base_ptr = ctx.fx.classifier;
  const Classifier& base = *base_ptr;
  ctx.results.columns = {"point_id",     "sigma",   "n",          "attack",   "pa",
                         "true_label",   "clean_correct", "radius_lower", "queries_used",
                         "reason",       "distortion_raw", "verified", "distortion_verified",
                         "status"};

  // Attacked points: the first test_points test points the base classifies correctly.
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < ctx.fx.test.size() && ids.size() < spec.test_points; ++i) {
    if (base.decide(ctx.fx.test.points[i]) == ctx.fx.test.labels[i]) ids.push_back(i);
  }
  ctx.results.metadata.emplace_back("attacked_points", std::to_string(ids.size()));

  const auto configs = smoothing_configs(ctx.sigmas, spec.smoothing.ns);
  std::vector<AttackKind> attacks;
  for (const auto& name : spec.attack.names) attacks.push_back(attack_kind_from_string(name));
  const std::size_t per_point = configs.size() * attacks.size();
  const std::size_t tasks = ids.size() * per_point;
  std::vector<std::vector<std::vector<std::string>>> rows(tasks);

  parallel_for(tasks, spec.jobs, [&](std::size_t task) {
    const std::size_t pi = task / per_point;
    const Config& c = configs[(task % per_point) / attacks.size()];
    const std::size_t ai = task % attacks.size();
    const std::size_t id = ids[pi];
    const Point& x = ctx.fx.test.points[id];
    const Label truth = ctx.fx.test.labels[id];
    const std::uint64_t key = run_key({id, c.sigma_index, c.n_index, ai});
    auto& out = rows[task];
    auto prefix = [&](double pa) {
      return std::vector<std::string>{cell(std::uint64_t{id}), cell(c.sigma), cell(c.n),
                                      std::string(to_string(attacks[ai])), cell(pa), cell(truth)};
    };
    try {
      bool clean_correct;
      std::string radius_lower;
      if (c.sigma > 0.0) {
        const SmoothingConfig cert(c.sigma, spec.smoothing.certify_n, spec.smoothing.alpha);
        const auto d = smoothed_decide(base, cert, x,
                                       RandomStream(derive_key(spec.seed, kTagCertify),
                                                    run_key({id, c.sigma_index}))
                                           .decision(0));
        radius_lower = cell(d.label == truth ? d.certified_radius_lower : 0.0);
        const SmoothingConfig clean(c.sigma, c.n, spec.smoothing.alpha);
        clean_correct = smoothed_decide(base, clean, x,
                                        RandomStream(derive_key(spec.seed, kTagClean),
                                                     run_key({id, c.sigma_index, c.n_index}))
                                            .decision(0))
                            .label == truth;
      } else {
        clean_correct = base.decide(x) == truth;
      }

      AttackConfig acfg;
      acfg.budget = spec.attack.budget;
      acfg.seed = key;
      std::unique_ptr<DecisionOracle> oracle;
      if (c.sigma > 0.0) {
        const SmoothingConfig ocfg(c.sigma, c.n, spec.smoothing.alpha,
                                   derive_key(spec.seed, kTagAttack));
        oracle = std::make_unique<DecisionOracle>(base_ptr, ocfg, key);
      } else {
        oracle = std::make_unique<DecisionOracle>(base_ptr);
      }
      const AttackTrace trace = run_attack(attacks[ai], *oracle, x, truth, acfg);
      if (spec.attack.traces && !spec.out.empty()) {
        std::ostringstream name;
        name << "p" << id << "_s" << c.sigma_index << "_n" << c.n << "_" << to_string(attacks[ai]);
        write_trace_files(spec, name.str(), trace, acfg);
      }
      const auto raw = trace.final_distortion();
      for (std::size_t k = 0; k < spec.attack.pa.size(); ++k) {
        const double pa = spec.attack.pa[k];
        const auto v = verify_trace(spec, base, c, trace, truth, pa, derive_key(key, k));
        auto row = prefix(pa);
        row.insert(row.end(),
                   {cell(clean_correct), radius_lower, cell(trace.queries_used),
                    std::string(to_string(trace.reason)), raw ? cell(*raw) : std::string(),
                    cell(v.verified), v.verified ? cell(v.distortion) : std::string(), "ok"});
        out.push_back(std::move(row));
      }
    } catch (const std::exception& e) {
      out.clear();
      for (double pa : spec.attack.pa) {
        auto row = prefix(pa);
        row.insert(row.end(), {"", "", "", "", "", "0", "", "error: " + sanitize(e.what())});
        out.push_back(std::move(row));
      }
    }
  });
  for (auto& group : rows) {
    for (auto& row : group) ctx.results.rows.push_back(std::move(row));
  }
}

void run_binary_search_dist(Context& ctx) {
  const auto& spec = ctx.spec;
  const auto [x_in, x_out] = probe_segment(spec, ctx.fx);
  ctx.results.columns = {"sigma", "n", "trial", "status", "offset"};
  const auto configs = smoothing_configs(ctx.sigmas, spec.smoothing.ns);
  std::vector<std::vector<std::vector<std::string>>> rows(configs.size());
  std::vector<std::string> crossings(configs.size());
  parallel_for(configs.size(), spec.jobs, [&](std::size_t k) {
    const Config& c = configs[k];
    try {
      const SmoothingConfig cfg(c.sigma, c.n, spec.smoothing.alpha);
      const auto stats = binary_search_distribution(
          ctx.fx.classifier, cfg, x_in, x_out, spec.probe.trials, spec.probe.tol,
          derive_key(derive_key(spec.seed, kTagProbe), run_key({c.sigma_index, c.n_index})),
          spec.probe.bins);
      std::uint64_t trial = 0;
      for (double o : stats.offsets) rows[k].push_back({cell(c.sigma), cell(c.n), cell(trial++), "ok", cell(o)});
      for (std::size_t f = 0; f < stats.failures; ++f) {
        rows[k].push_back({cell(c.sigma), cell(c.n), cell(trial++), "precondition_failed", ""});
      }
      crossings[k] = cell(stats.crossing_t);
    } catch (const std::exception& e) {
      rows[k].push_back({cell(c.sigma), cell(c.n), "", "error: " + sanitize(e.what()), ""});
    }
  });
  ctx.results.metadata.emplace_back("segment_length", cell(l2_distance(x_in, x_out)));
  ctx.results.metadata.emplace_back("histogram_bins", std::to_string(ctx.spec.probe.bins));
  for (std::size_t k = 0; k < configs.size(); ++k) {
    ctx.results.metadata.emplace_back(
        "crossing_t[sigma=" + cell(configs[k].sigma) + ",n=" + cell(configs[k].n) + "]",
        crossings[k]);
    for (auto& row : rows[k]) ctx.results.rows.push_back(std::move(row));
  }
}

void run_slice(Context& ctx) {
  const auto& spec = ctx.spec;
  const auto& base_ptr = ctx.fx.classifier;
  const auto [x_in, x_out] = probe_segment(spec, ctx.fx);
  const auto center = binary_search_boundary(
      [&](PointView x) { return base_ptr->decide(x); }, x_in, x_out, 1e-12, 64);
  const Point dir1 = unit(difference(x_out, x_in));
  CounterRng rng(spec.seed, kTagSlice);
  Point dir2(dir1.size());
  for (double& v : dir2) v = rng.normal();

  ctx.results.columns = {"sigma", "n", "u", "v", "label", "exact_p1"};
  const auto configs = smoothing_configs(ctx.sigmas, spec.smoothing.ns);
  std::vector<std::vector<std::vector<std::string>>> rows(configs.size());
  parallel_for(configs.size(), spec.jobs, [&](std::size_t k) {
    const Config& c = configs[k];
    std::unique_ptr<DecisionOracle> oracle;
    if (c.sigma > 0.0) {
      const SmoothingConfig cfg(c.sigma, c.n, spec.smoothing.alpha,
                                derive_key(spec.seed, kTagSlice));
      oracle = std::make_unique<DecisionOracle>(base_ptr, cfg, run_key({c.sigma_index, c.n_index}));
    } else {
      oracle = std::make_unique<DecisionOracle>(base_ptr);
    }
    const SliceMap map = slice_map(*oracle, center.boundary, dir1, dir2, spec.probe.extent,
                                   spec.probe.resolution);
    for (std::size_t j = 0; j < map.resolution; ++j) {
      for (std::size_t i = 0; i < map.resolution; ++i) {
        std::string p1;
        if (c.sigma > 0.0) {
          if (const auto pi = exact_pi(*base_ptr, map.point(i, j), c.sigma)) p1 = cell(pi->p1.value());
        }
        rows[k].push_back({cell(c.sigma), cell(c.n), cell(map.coord(i)), cell(map.coord(j)),
                           cell(map.at(i, j)), p1});
      }
    }
  });
  for (auto& group : rows) {
    for (auto& row : group) ctx.results.rows.push_back(std::move(row));
  }
}

void run_direction_profile(Context& ctx) {
  const auto& spec = ctx.spec;
  const auto [x_in, x_out] = probe_segment(spec, ctx.fx);
  const Point direction = unit(difference(x_out, x_in));
  const double span = spec.probe.profile_span * l2_distance(x_in, x_out);
  std::vector<double> grid(spec.probe.profile_points);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid[k] = span * static_cast<double>(k) / static_cast<double>(grid.size() - 1);
  }
  ctx.results.columns = {"sigma", "n", "t", "flip_probability", "exact_flip"};
  const auto configs = smoothing_configs(ctx.sigmas, spec.smoothing.ns);
  std::vector<std::vector<std::vector<std::string>>> rows(configs.size());
  parallel_for(configs.size(), spec.jobs, [&](std::size_t k) {
    const Config& c = configs[k];
    const SmoothingConfig cfg(c.sigma, c.n, spec.smoothing.alpha);
    const auto profile = direction_profile(
        *ctx.fx.classifier, cfg, x_in, direction, grid, spec.probe.probes_per_point,
        derive_key(derive_key(spec.seed, kTagProbe), run_key({c.sigma_index, c.n_index})));
    for (const auto& p : profile) {
      rows[k].push_back({cell(c.sigma), cell(c.n), cell(p.t), cell(p.flip_probability),
                         p.exact_flip ? cell(*p.exact_flip) : std::string()});
    }
  });
  ctx.results.metadata.emplace_back("segment_length", cell(l2_distance(x_in, x_out)));
  for (auto& group : rows) {
    for (auto& row : group) ctx.results.rows.push_back(std::move(row));
  }
}

void run_sorm_check(Context& ctx) {
  const auto& s = ctx.spec.sorm;
  ctx.results.columns = {"beta", "beta_kappa", "side", "sorm", "exact", "rel_error", "clamped"};
  const std::size_t tasks = s.betas.size() * s.beta_kappas.size();
  std::vector<std::vector<std::string>> rows(tasks);
  parallel_for(tasks, ctx.spec.jobs, [&](std::size_t task) {
    const double beta = s.betas[task / s.beta_kappas.size()];
    const double bk = s.beta_kappas[task % s.beta_kappas.size()];
    const std::size_t d = s.dimension;
    const Point center(d, 0.5);
    std::unique_ptr<Classifier> base;
    Point x(center);
    std::string side;
    if (bk == 0.0) {
      Point w(d, 0.0);
      w[0] = 1.0;
      base = std::make_unique<LinearClassifier>(w, -0.5);
      x[0] = 0.5 - beta * s.sigma;
      side = "flat";
    } else {
      // kappa * sigma = -1/rho' inside the ball, +1/rho' outside (rho' = rho / sigma).
      const double rho = s.sigma * beta / std::abs(bk);
      base = std::make_unique<SphereClassifier>(center, rho);
      x[0] = 0.5 + (bk < 0.0 ? rho - beta * s.sigma : rho + beta * s.sigma);
      side = bk < 0.0 ? "inside" : "outside";
    }
    const auto profile = curvature_profile(*base, x, s.sigma);
    const auto est = sorm_pi0(*profile);
    const auto pi = exact_pi(*base, x, s.sigma);
    const double exact = pi->of(other(base->decide(x))).value();
    rows[task] = {cell(beta), cell(bk), side, cell(est.flip.value()), cell(exact),
                  cell((est.flip.value() - exact) / exact), cell(est.clamped)};
  });
  ctx.results.rows = std::move(rows);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

Fixture build_fixture(const ExperimentSpec& spec) {
  spec.validate();
  Fixture fx;
  const Dataset all = generate_dataset(spec.dataset, derive_key(spec.seed, kTagData));
  std::tie(fx.train, fx.test) = split_dataset(all, spec.train_size);
  const std::size_t d = spec.dataset.dimension;
  const auto& c = spec.classifier;
  if (c.type == "mlp") {
    MlpTrainConfig tc;
    tc.hidden = c.hidden;
    tc.epochs = c.epochs;
    tc.learning_rate = c.learning_rate;
    tc.noise_augment_sigma = c.noise_augment;
    tc.seed = derive_key(spec.seed, kTagTrain);
    fx.classifier = std::make_shared<MlpClassifier>(train_mlp(fx.train, tc).model);
  } else if (c.type == "linear") {
    Point w = c.weights;
    double b = c.bias;
    if (w.empty()) {
      w.assign(d, 1.0 / std::sqrt(static_cast<double>(d)));
      b = -dot(w, Point(d, 0.5));
    }
    fx.classifier = std::make_shared<LinearClassifier>(std::move(w), b);
  } else if (c.type == "sphere") {
    Point center = c.center.empty() ? Point(d, 0.5) : c.center;
    fx.classifier = std::make_shared<SphereClassifier>(std::move(center), c.radius);
  } else {
    std::ifstream in(c.path);
    if (!in) throw SpecError("cannot open classifier file " + c.path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::shared_ptr<const Classifier> loaded = parse_classifier(buf.str());
    if (loaded->dimension() != d) {
      throw SpecError("classifier file dimension " + std::to_string(loaded->dimension()) +
                      " does not match dataset.dimension " + std::to_string(d));
    }
    fx.classifier = std::move(loaded);
  }
  fx.base_accuracy = accuracy(*fx.classifier, fx.test);
  return fx;
}

SigmaCalibration calibrate_sigma(const Classifier& base, const Dataset& data, double target_drop,
                                 std::uint64_t n, std::uint64_t seed) {
  if (!(target_drop > 0.0 && target_drop < 1.0)) {
    throw std::invalid_argument("calibrate_sigma: target_drop must be in (0, 1)");
  }
  const double base_acc = accuracy(base, data);
  auto smoothed_accuracy = [&](double sigma) {
    const SmoothingConfig cfg(sigma, n);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto d = smoothed_decide(base, cfg, data.points[i], RandomStream(seed, i).decision(0));
      if (d.label == data.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
  };
  auto reached = [&](double sigma) { return base_acc - smoothed_accuracy(sigma) >= target_drop - 1e-12; };

  double lo = 0.0, hi = 0.005;
  while (!reached(hi)) {
    lo = hi;
    hi *= 1.25;
    if (hi > 10.0) {
      throw std::runtime_error("calibrate_sigma: accuracy never drops by " + fmt_num(target_drop));
    }
  }
  for (int k = 0; k < 24; ++k) {
    const double mid = 0.5 * (lo + hi);
    (reached(mid) ? hi : lo) = mid;
  }
  return {target_drop, hi, smoothed_accuracy(hi)};
}

ResultSet run_experiment(const ExperimentSpec& spec_in) {
  spec_in.validate();
  ExperimentSpec spec = spec_in;
  ResultSet results;
  results.kind = spec.kind;
  // the SORM check builds its own analytic surfaces
  Fixture fx;
  if (spec.kind != ExperimentKind::kSormCheck) {
    fx = build_fixture(spec);
    results.metadata.emplace_back("classifier", std::string(fx.classifier->kind()));
    results.metadata.emplace_back("base_accuracy", fmt_num(fx.base_accuracy));
    results.metadata.emplace_back("test_split_size", std::to_string(fx.test.size()));
  }

  if (!spec.smoothing.accuracy_drops.empty() && spec.kind != ExperimentKind::kSormCheck) {
    spec.smoothing.sigmas.clear();
    for (double drop : spec.smoothing.accuracy_drops) {
      const auto cal = calibrate_sigma(*fx.classifier, fx.test, drop, spec.smoothing.calibration_n,
                                       derive_key(spec.seed, kTagCalibrate));
      spec.smoothing.sigmas.push_back(cal.sigma);
      results.metadata.emplace_back("calibrated_sigma[drop=" + fmt_num(drop) + "]",
                                    fmt_num(cal.sigma));
      results.metadata.emplace_back("calibrated_accuracy[drop=" + fmt_num(drop) + "]",
                                    fmt_num(cal.accuracy));
    }
  }

  Context ctx{spec, fx, spec.smoothing.sigmas, results};
  switch (spec.kind) {
    case ExperimentKind::kCertify: run_certify(ctx); break;
    case ExperimentKind::kAttackSweep: run_attack_sweep(ctx); break;
    case ExperimentKind::kBinarySearchDist: run_binary_search_dist(ctx); break;
    case ExperimentKind::kSlice: run_slice(ctx); break;
    case ExperimentKind::kDirectionProfile: run_direction_profile(ctx); break;
    case ExperimentKind::kSormCheck: run_sorm_check(ctx); break;
  }

  if (spec.out.empty()) return results;

  const std::filesystem::path dir(spec.out);
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "records.csv", std::ios::binary);
    write_records_csv(results, csv);
  }
  nlohmann::ordered_json doc;
  doc["kind"] = std::string(to_string(spec.kind));
  doc["seed"] = spec.seed;
  auto& meta = doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : results.metadata) meta[k] = v;
  doc["summary"] = nlohmann::ordered_json::parse(summarize(results));
  write_text(dir / "summary.json", doc.dump(2) + "\n");
  write_text(dir / "spec.resolved.toml", spec_to_toml(spec));
  report(dir);
  return results;
}

}  // namespace rsd

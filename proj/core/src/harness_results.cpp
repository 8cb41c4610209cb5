#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "rsd/format.hpp"
#include "rsd/harness.hpp"
#include "rsd/svg.hpp"

namespace rsd {

namespace {

using Json = nlohmann::ordered_json;

double parse_number(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

// Row indices grouped by the formatted values of `keys`, in first-seen order.
std::vector<std::pair<std::vector<std::string>, std::vector<std::size_t>>> group_rows(
    const ResultSet& r, const std::vector<std::string>& keys) {
  std::vector<std::size_t> cols;
  for (const auto& k : keys) cols.push_back(r.column(k));
  std::vector<std::pair<std::vector<std::string>, std::vector<std::size_t>>> groups;
  std::map<std::vector<std::string>, std::size_t> index;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    std::vector<std::string> key;
    for (std::size_t c : cols) key.push_back(r.rows[i][c]);
    auto [it, inserted] = index.emplace(key, groups.size());
    if (inserted) groups.push_back({key, {}});
    groups[it->second].second.push_back(i);
  }
  return groups;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

Json nullable(const std::vector<double>& v, double value) {
  return v.empty() ? Json(nullptr) : Json(value);
}

std::vector<std::pair<double, double>> curve_points(std::vector<double> radii, std::size_t total) {
  std::sort(radii.begin(), radii.end());
  std::vector<std::pair<double, double>> out;
  out.emplace_back(0.0, certified_accuracy(radii, total, 0.0));
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] > 0.0 && (i == 0 || radii[i] != radii[i - 1])) {
      out.emplace_back(radii[i], certified_accuracy(radii, total, radii[i]));
    }
  }
  return out;
}

Json curve_json(const std::vector<std::pair<double, double>>& pts) {
  Json arr = Json::array();
  for (const auto& [r, a] : pts) arr.push_back({r, a});
  return arr;
}

std::size_t histogram_bins(const ResultSet& r) {
  for (const auto& [k, v] : r.metadata) {
    if (k == "histogram_bins") return static_cast<std::size_t>(std::stoul(v));
  }
  return 21;
}

Json summarize_certify(const ResultSet& r) {
  Json groups = Json::array();
  const bool exact = r.has_column("radius_exact");
  for (const auto& [key, idx] : group_rows(r, {"sigma", "n"})) {
    std::vector<double> correct_radii, all, certified;
    std::vector<double> exact_radii;
    std::size_t exact_known = 0;
    for (std::size_t i : idx) {
      const bool ok = r.cell(i, "correct") == "1";
      const double rad = r.number(i, "radius_lower");
      all.push_back(ok ? rad : 0.0);
      if (ok) correct_radii.push_back(rad);
      if (ok && rad > 0.0) certified.push_back(rad);
      if (exact && !r.cell(i, "radius_exact").empty()) {
        ++exact_known;
        if (r.cell(i, "correct_exact") == "1") exact_radii.push_back(r.number(i, "radius_exact"));
      }
    }
    Json g;
    g["sigma"] = parse_number(key[0]);
    g["n"] = parse_number(key[1]);
    g["points"] = idx.size();
    g["accuracy"] = static_cast<double>(correct_radii.size()) / static_cast<double>(idx.size());
    g["mean_radius_lower"] = mean_of(all);
    g["mean_radius_certified"] = nullable(certified, mean_of(certified));
    g["max_radius_lower"] =
        correct_radii.empty() ? 0.0 : *std::max_element(correct_radii.begin(), correct_radii.end());
    g["curve_lower"] = curve_json(curve_points(correct_radii, idx.size()));
    if (exact_known == idx.size()) {
      g["accuracy_exact"] = static_cast<double>(exact_radii.size()) / static_cast<double>(idx.size());
      g["max_radius_exact"] =
          exact_radii.empty() ? 0.0 : *std::max_element(exact_radii.begin(), exact_radii.end());
      g["curve_exact"] = curve_json(curve_points(exact_radii, idx.size()));
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

Json summarize_attack(const ResultSet& r) {
  Json groups = Json::array();
  for (const auto& [key, idx] : group_rows(r, {"sigma", "n", "attack", "pa"})) {
    std::vector<double> verified, raw, ratios;
    std::size_t ok = 0, errors = 0, clean = 0, with_radius = 0, violations = 0;
    for (std::size_t i : idx) {
      if (r.cell(i, "status") != "ok") {
        ++errors;
        continue;
      }
      ++ok;
      if (r.cell(i, "clean_correct") == "1") ++clean;
      if (!r.cell(i, "distortion_raw").empty()) raw.push_back(r.number(i, "distortion_raw"));
      const bool found = r.cell(i, "verified") == "1";
      const double dist = found ? r.number(i, "distortion_verified") : 0.0;
      if (found) verified.push_back(dist);
      const std::string& rl = r.cell(i, "radius_lower");
      if (!rl.empty() && parse_number(rl) > 0.0) {
        ++with_radius;
        const double rad = parse_number(rl);
        if (found) {
          ratios.push_back(dist / rad);
          if (!(dist > rad)) ++violations;
        }
      }
    }
    Json g;
    g["sigma"] = parse_number(key[0]);
    g["n"] = parse_number(key[1]);
    g["attack"] = key[2];
    g["pa"] = parse_number(key[3]);
    g["points"] = ok;
    g["errors"] = errors;
    g["accuracy"] = ok ? static_cast<double>(clean) / static_cast<double>(ok) : 0.0;
    g["found"] = verified.size();
    g["mean_distortion"] = nullable(verified, mean_of(verified));
    g["median_distortion"] = nullable(verified, median_of(verified));
    g["mean_raw_distortion"] = nullable(raw, mean_of(raw));
    g["points_with_radius"] = with_radius;
    g["radius_violations"] = violations;
    g["median_ratio_to_radius"] = nullable(ratios, median_of(ratios));
    groups.push_back(std::move(g));
  }
  return groups;
}

Json summarize_bs(const ResultSet& r) {
  Json groups = Json::array();
  const std::size_t bins = histogram_bins(r);
  for (const auto& [key, idx] : group_rows(r, {"sigma", "n"})) {
    std::vector<double> offsets;
    std::size_t failures = 0, errors = 0;
    for (std::size_t i : idx) {
      const std::string& status = r.cell(i, "status");
      if (status == "ok") {
        offsets.push_back(r.number(i, "offset"));
      } else if (status == "precondition_failed") {
        ++failures;
      } else {
        ++errors;
      }
    }
    const auto [edges, counts] = symmetric_histogram(offsets, bins, 1e-12);
    Json g;
    g["sigma"] = parse_number(key[0]);
    g["n"] = parse_number(key[1]);
    g["trials"] = offsets.size();
    g["failures"] = failures;
    g["errors"] = errors;
    g["mean"] = mean_of(offsets);
    g["std"] = stddev_of(offsets);
    g["bin_edges"] = edges;
    g["counts"] = counts;
    groups.push_back(std::move(g));
  }
  return groups;
}

Json summarize_slice(const ResultSet& r) {
  Json groups = Json::array();
  for (const auto& [key, idx] : group_rows(r, {"sigma", "n"})) {
    std::size_t ones = 0;
    for (std::size_t i : idx) ones += r.cell(i, "label") == "1";
    Json g;
    g["sigma"] = parse_number(key[0]);
    g["n"] = parse_number(key[1]);
    g["cells"] = idx.size();
    g["fraction_one"] = static_cast<double>(ones) / static_cast<double>(idx.size());
    groups.push_back(std::move(g));
  }
  return groups;
}

Json summarize_profile(const ResultSet& r) {
  Json groups = Json::array();
  for (const auto& [key, idx] : group_rows(r, {"sigma", "n"})) {
    Json crossing = nullptr;
    double max_flip = 0.0;
    for (std::size_t i : idx) {
      const double p = r.number(i, "flip_probability");
      max_flip = std::max(max_flip, p);
      if (crossing.is_null() && p >= 0.5) crossing = r.number(i, "t");
    }
    Json g;
    g["sigma"] = parse_number(key[0]);
    g["n"] = parse_number(key[1]);
    g["points"] = idx.size();
    g["crossing_t"] = crossing;
    g["max_flip_probability"] = max_flip;
    groups.push_back(std::move(g));
  }
  return groups;
}

Json summarize_sorm(const ResultSet& r) {
  double max_all = 0.0, max_region = 0.0, max_flat = 0.0;
  std::size_t region = 0;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const double err = std::abs(r.number(i, "rel_error"));
    const double beta = r.number(i, "beta");
    const double bk = r.number(i, "beta_kappa");
    max_all = std::max(max_all, err);
    if (bk == 0.0) max_flat = std::max(max_flat, err);
    if (beta >= 0.5 && beta <= 2.0 && std::abs(bk) < 0.5) {
      ++region;
      max_region = std::max(max_region, err);
    }
  }
  Json g;
  g["cases"] = r.rows.size();
  g["max_abs_rel_error"] = max_all;
  g["region_cases"] = region;
  g["max_abs_rel_error_region"] = max_region;
  g["max_abs_rel_error_flat"] = max_flat;
  return g;
}

std::string group_label(const std::vector<std::string>& key) {
  return "sigma=" + key[0] + " n=" + key[1];
}

bool matches(const PlotFilter& f, const std::string& sigma, const std::string& n) {
  return (!f.sigma || *f.sigma == sigma) && (!f.n || *f.n == n);
}

std::string plot_certified_curve(const ResultSet& r) {
  r.require({"sigma", "n", "radius_lower", "correct"});
  SvgPlot plot(720, 440, "certified accuracy vs radius");
  plot.set_labels("radius (l2)", "certified accuracy");
  double r_max = 0.0;
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> lines;
  for (const auto& [key, idx] : group_rows(r, {"sigma", "n"})) {
    std::vector<double> radii;
    for (std::size_t i : idx) {
      if (r.cell(i, "correct") == "1") radii.push_back(r.number(i, "radius_lower"));
    }
    const auto pts = curve_points(radii, idx.size());
    std::vector<std::pair<double, double>> steps;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (k > 0) steps.emplace_back(pts[k].first, pts[k - 1].second);
      steps.emplace_back(pts[k]);
      r_max = std::max(r_max, pts[k].first);
    }
    // right after the last breakpoint nothing is certified
    const auto drop = static_cast<double>(std::count_if(radii.begin(), radii.end(), [&](double x) {
                        return x > pts.back().first;
                      })) /
                      static_cast<double>(idx.size());
    steps.emplace_back(pts.back().first, drop);
    lines.emplace_back(group_label(key), std::move(steps));
  }
  plot.set_x_range(0.0, r_max > 0.0 ? 1.05 * r_max : 1.0);
  plot.set_y_range(0.0, 1.0);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    auto pts = lines[k].second;
    pts.emplace_back(r_max > 0.0 ? 1.05 * r_max : 1.0, pts.back().second);
    plot.polyline(pts, palette(k), lines[k].first);
  }
  return plot.render();
}

std::string plot_distortion_vs_accuracy(const ResultSet& r) {
  r.require({"sigma", "n", "attack", "pa", "clean_correct", "verified", "distortion_verified",
             "status"});
  SvgPlot plot(720, 440, "mean l2 distortion vs smoothed accuracy");
  plot.set_labels("clean accuracy of the smoothed oracle", "mean verified distortion");
  const std::string first_pa = r.rows.empty() ? "" : r.cell(0, "pa");
  std::map<std::string, std::vector<std::pair<double, double>>> by_attack;
  std::vector<std::string> order;
  double y_max = 0.0;
  for (const auto& [key, idx] : group_rows(r, {"sigma", "n", "attack", "pa"})) {
    if (key[3] != first_pa) continue;
    std::size_t ok = 0, clean = 0;
    std::vector<double> dist;
    for (std::size_t i : idx) {
      if (r.cell(i, "status") != "ok") continue;
      ++ok;
      clean += r.cell(i, "clean_correct") == "1";
      if (r.cell(i, "verified") == "1") dist.push_back(r.number(i, "distortion_verified"));
    }
    const double acc = ok ? static_cast<double>(clean) / static_cast<double>(ok) : 0.0;
    const double y = mean_of(dist);
    y_max = std::max(y_max, y);
    if (!by_attack.count(key[2])) order.push_back(key[2]);
    by_attack[key[2]].emplace_back(acc, y);
  }
  plot.set_x_range(0.0, 1.0);
  plot.set_y_range(0.0, y_max > 0.0 ? 1.1 * y_max : 1.0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    plot.markers(by_attack[order[k]], palette(k), order[k] + " (pa=" + first_pa + ")");
  }
  return plot.render();
}

std::string plot_bs_histogram(const ResultSet& r) {
  r.require({"sigma", "n", "status", "offset"});
  SvgPlot plot(720, 440, "binary search offsets from the smoothed boundary");
  plot.set_labels("signed offset (input units)", "count");
  const std::size_t bins = histogram_bins(r);
  std::vector<double> all;
  const auto groups = group_rows(r, {"sigma", "n"});
  std::vector<std::vector<double>> per_group;
  for (const auto& [key, idx] : groups) {
    std::vector<double> offsets;
    for (std::size_t i : idx) {
      if (r.cell(i, "status") == "ok") offsets.push_back(r.number(i, "offset"));
    }
    all.insert(all.end(), offsets.begin(), offsets.end());
    per_group.push_back(std::move(offsets));
  }
  const auto [edges, unused] = symmetric_histogram(all, bins, 1e-12);
  double c_max = 0.0;
  std::vector<std::vector<std::pair<double, double>>> lines;
  for (const auto& offsets : per_group) {
    std::vector<double> counts(bins, 0.0);
    const double span = edges.back();
    for (double o : offsets) {
      auto b = static_cast<std::size_t>((o + span) / (2.0 * span) * static_cast<double>(bins));
      counts[std::min(b, bins - 1)] += 1.0;
    }
    std::vector<std::pair<double, double>> pts;
    for (std::size_t b = 0; b < bins; ++b) {
      pts.emplace_back(edges[b], counts[b]);
      pts.emplace_back(edges[b + 1], counts[b]);
      c_max = std::max(c_max, counts[b]);
    }
    lines.push_back(std::move(pts));
  }
  plot.set_x_range(edges.front(), edges.back());
  plot.set_y_range(0.0, c_max > 0.0 ? 1.05 * c_max : 1.0);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    plot.polyline(lines[k], palette(k), group_label(groups[k].first));
  }
  return plot.render();
}

std::string plot_slice(const ResultSet& r, const PlotFilter& filter) {
  r.require({"sigma", "n", "u", "v", "label"});
  for (const auto& [key, idx] : group_rows(r, {"sigma", "n"})) {
    if (!matches(filter, key[0], key[1])) continue;
    const auto res = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(idx.size()))));
    if (res < 2 || res * res != idx.size()) throw std::runtime_error("slice group is not square");
    const double lo = r.number(idx.front(), "u");
    const double hi = r.number(idx.back(), "u");
    const double half = hi > lo ? 0.5 * (hi - lo) / static_cast<double>(res - 1) : 0.5;
    SvgPlot plot(560, 480, "decision slice " + group_label(key));
    plot.set_labels("u (toward x_out)", "v (random orthogonal)");
    plot.set_x_range(lo - half, hi + half);
    plot.set_y_range(lo - half, hi + half);
    for (std::size_t i : idx) {
      const double u = r.number(i, "u"), v = r.number(i, "v");
      plot.cell(u - half, v - half, u + half, v + half,
                r.cell(i, "label") == "1" ? "#f4a582" : "#92c5de");
    }
    return plot.render();
  }
  throw std::runtime_error("slice-raster: no rows match the requested sigma/n");
}

std::string plot_profile(const ResultSet& r) {
  r.require({"sigma", "n", "t", "flip_probability"});
  SvgPlot plot(720, 440, "probability of a flipped smoothed decision along a direction");
  plot.set_labels("t (input units)", "flip probability");
  double t_max = 0.0;
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> lines;
  for (const auto& [key, idx] : group_rows(r, {"sigma", "n"})) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i : idx) {
      pts.emplace_back(r.number(i, "t"), r.number(i, "flip_probability"));
      t_max = std::max(t_max, pts.back().first);
    }
    lines.emplace_back(group_label(key), std::move(pts));
  }
  plot.set_x_range(0.0, t_max > 0.0 ? t_max : 1.0);
  plot.set_y_range(0.0, 1.0);
  for (std::size_t k = 0; k < lines.size(); ++k) plot.polyline(lines[k].second, palette(k), lines[k].first);
  return plot.render();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::size_t ResultSet::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::invalid_argument("result set has no column '" + std::string(name) + "'");
}

bool ResultSet::has_column(std::string_view name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

void ResultSet::require(const std::vector<std::string>& names) const {
  std::string missing;
  for (const auto& n : names) {
    if (!has_column(n)) missing += (missing.empty() ? "" : ", ") + n;
  }
  if (!missing.empty()) throw std::invalid_argument("result set is missing columns: " + missing);
}

const std::string& ResultSet::cell(std::size_t row, std::string_view name) const {
  return rows.at(row).at(column(name));
}

double ResultSet::number(std::size_t row, std::string_view name) const {
  return parse_number(cell(row, name));
}

void write_records_csv(const ResultSet& results, std::ostream& out) {
  for (std::size_t c = 0; c < results.columns.size(); ++c) {
    out << (c ? "," : "") << results.columns[c];
  }
  out << '\n';
  for (const auto& row : results.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
}

ResultSet read_records_csv(ExperimentKind kind, std::istream& in) {
  ResultSet r;
  r.kind = kind;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("records.csv is empty");
  for (const auto& c : split_csv_line(line)) r.columns.emplace_back(c);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> row;
    for (const auto& c : split_csv_line(line)) row.emplace_back(c);
    if (row.size() != r.columns.size()) {
      throw std::runtime_error("records.csv: row with " + std::to_string(row.size()) +
                               " cells, expected " + std::to_string(r.columns.size()));
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

double certified_accuracy(const std::vector<double>& correct_radii, std::size_t total, double r) {
  if (total == 0) return 0.0;
  const auto hits = std::count_if(correct_radii.begin(), correct_radii.end(),
                                  [r](double x) { return x >= r; });
  return static_cast<double>(hits) / static_cast<double>(total);
}

std::pair<std::vector<double>, std::vector<std::uint64_t>> symmetric_histogram(
    const std::vector<double>& values, std::size_t bins, double fallback_span) {
  if (bins == 0) throw std::invalid_argument("symmetric_histogram: bins must be >= 1");
  double span = 0.0;
  for (double v : values) span = std::max(span, std::abs(v));
  if (!(span > 0.0)) span = fallback_span;
  std::vector<double> edges(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    edges[b] = -span + 2.0 * span * static_cast<double>(b) / static_cast<double>(bins);
  }
  std::vector<std::uint64_t> counts(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v + span) / (2.0 * span) * static_cast<double>(bins));
    ++counts[std::min(b, bins - 1)];
  }
  return {edges, counts};
}

std::string summarize(const ResultSet& results) {
  Json s;
  switch (results.kind) {
    case ExperimentKind::kCertify: s = summarize_certify(results); break;
    case ExperimentKind::kAttackSweep: s = summarize_attack(results); break;
    case ExperimentKind::kBinarySearchDist: s = summarize_bs(results); break;
    case ExperimentKind::kSlice: s = summarize_slice(results); break;
    case ExperimentKind::kDirectionProfile: s = summarize_profile(results); break;
    case ExperimentKind::kSormCheck: s = summarize_sorm(results); break;
  }
  return s.dump();
}

std::string_view to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::kCertifiedCurve: return "certified-curve";
    case PlotKind::kDistortionVsAccuracy: return "distortion-vs-accuracy";
    case PlotKind::kBsHistogram: return "bs-histogram";
    case PlotKind::kSliceRaster: return "slice-raster";
    case PlotKind::kDirectionProfile: return "direction-profile";
  }
  return "unknown";
}

std::string render_plot(const ResultSet& results, PlotKind kind, const PlotFilter& filter) {
  switch (kind) {
    case PlotKind::kCertifiedCurve: return plot_certified_curve(results);
    case PlotKind::kDistortionVsAccuracy: return plot_distortion_vs_accuracy(results);
    case PlotKind::kBsHistogram: return plot_bs_histogram(results);
    case PlotKind::kSliceRaster: return plot_slice(results, filter);
    case PlotKind::kDirectionProfile: return plot_profile(results);
  }
  throw std::invalid_argument("unknown plot kind");
}

void emit_plot(const ResultSet& results, PlotKind kind, const std::filesystem::path& path,
               const PlotFilter& filter) {
  const std::string svg = render_plot(results, kind, filter);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << svg;
}

std::vector<std::filesystem::path> report(const std::filesystem::path& out_dir) {
  const Json doc = Json::parse(read_file(out_dir / "summary.json"));
  const ExperimentKind kind = experiment_kind_from_string(doc.at("kind").get<std::string>());
  std::istringstream csv(read_file(out_dir / "records.csv"));
  ResultSet results = read_records_csv(kind, csv);
  for (const auto& [k, v] : doc.at("metadata").items()) {
    results.metadata.emplace_back(k, v.get<std::string>());
  }
  if (Json::parse(summarize(results)) != doc.at("summary")) {
    throw std::runtime_error("summary.json does not match the summary recomputed from records.csv");
  }

  std::vector<std::filesystem::path> written;
  auto emit = [&](PlotKind k, const std::string& name, const PlotFilter& f = {}) {
    emit_plot(results, k, out_dir / name, f);
    written.push_back(out_dir / name);
  };
  switch (kind) {
    case ExperimentKind::kCertify: emit(PlotKind::kCertifiedCurve, "certified_curve.svg"); break;
    case ExperimentKind::kAttackSweep:
      emit(PlotKind::kDistortionVsAccuracy, "distortion_vs_accuracy.svg");
      break;
    case ExperimentKind::kBinarySearchDist: emit(PlotKind::kBsHistogram, "bs_histogram.svg"); break;
    case ExperimentKind::kSlice: {
      std::size_t k = 0;
      for (const auto& [key, idx] : group_rows(results, {"sigma", "n"})) {
        emit(PlotKind::kSliceRaster, "slice_" + std::to_string(k++) + ".svg",
             PlotFilter{key[0], key[1]});
      }
      break;
    }
    case ExperimentKind::kDirectionProfile:
      emit(PlotKind::kDirectionProfile, "direction_profile.svg");
      break;
    case ExperimentKind::kSormCheck: break;
  }
  return written;
}

}  // namespace rsd

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rsd/classifiers.hpp"

namespace rsd {

enum class ExperimentKind {
  kCertify,
  kAttackSweep,
  kBinarySearchDist,
  kSlice,
  kDirectionProfile,
  kSormCheck,
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view name);

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ClassifierSpec {
  std::string type = "mlp";  // mlp | linear | sphere | file
  // mlp
  std::size_t hidden = 32;
  std::size_t epochs = 600;
  double learning_rate = 0.05;
  double noise_augment = 0.0;
  // linear: empty weights means the all-ones normal through the cube center
  std::vector<double> weights;
  double bias = 0.0;
  // sphere: empty center means the cube center
  std::vector<double> center;
  double radius = 0.25;
  // file: serialized classifier
  std::string path;
};

struct SmoothingGrid {
  std::vector<double> sigmas = {0.05, 0.15};
  // When nonempty, sigmas are replaced by values calibrated so that smoothed
  // clean accuracy drops by these absolute amounts.
  std::vector<double> accuracy_drops;
  std::vector<std::uint64_t> ns = {10, 50, 200};
  double alpha = 0.001;
  std::uint64_t certify_n = 1000;
  std::uint64_t calibration_n = 200;
};

struct AttackGrid {
  std::vector<std::string> names = {"hsja", "surfree", "rays"};
  std::uint64_t budget = 2000;
  std::vector<double> pa = {0.5, 0.8};
  std::string verify = "repeated-query";  // repeated-query | exact-count
  double repeat_constant = 10.0;
  std::size_t max_verify = 16;  // milestones tried per P_a before giving up
  bool traces = false;          // write per-run trace CSV + JSON sidecars
};

struct ProbeSpec {
  std::vector<double> x_in;  // empty: first test point the base labels 0
  std::vector<double> x_out; // empty: first test point the base labels 1
  std::size_t trials = 200;
  double tol = 1e-3;
  std::size_t bins = 21;
  double extent = 0.25;
  std::size_t resolution = 64;
  std::size_t profile_points = 41;
  double profile_span = 1.5;  // t range as a multiple of |x_out - x_in|
  std::size_t probes_per_point = 200;
};

struct SormSpec {
  std::size_t dimension = 3;
  std::vector<double> betas = {0.5, 1.0, 1.5, 2.0};
  std::vector<double> beta_kappas = {-0.4, -0.2, 0.0, 0.2, 0.4};
  double sigma = 0.05;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kCertify;
  std::uint64_t seed = 0;
  std::string out = "out";
  std::size_t jobs = 1;
  DatasetSpec dataset = {.size = 600};
  std::size_t train_size = 400;
  std::size_t test_points = 50;
  ClassifierSpec classifier;
  SmoothingGrid smoothing;
  AttackGrid attack;
  ProbeSpec probe;
  SormSpec sorm;

  // Throws SpecError naming the offending field.
  void validate() const;
};

// TOML in, TOML out. Unknown keys are errors; omitted keys take defaults.
// A seed passed here replaces the file's seed, which is otherwise required.
ExperimentSpec parse_spec_toml(std::string_view text,
                               std::optional<std::uint64_t> seed = std::nullopt);
ExperimentSpec load_spec(const std::filesystem::path& path,
                         std::optional<std::uint64_t> seed = std::nullopt);
std::string spec_to_toml(const ExperimentSpec& spec);

// Trained or constructed base classifier plus the data it is evaluated on.
struct Fixture {
  std::shared_ptr<const Classifier> classifier;
  Dataset train;
  Dataset test;
  double base_accuracy = 0.0;  // on test
};

Fixture build_fixture(const ExperimentSpec& spec);

struct SigmaCalibration {
  double target_drop = 0.0;
  double sigma = 0.0;
  double accuracy = 0.0;
};

// Smallest sigma (to bisection precision) whose smoothed accuracy on `data`
// is at least target_drop below the base accuracy. Every sigma sees the same
// standard-normal draws, so accuracy(sigma) is a deterministic function.
SigmaCalibration calibrate_sigma(const Classifier& base, const Dataset& data, double target_drop,
                                 std::uint64_t n, std::uint64_t seed);

// Flat table of formatted cells; every number passes through fmt_num, so
// anything computed from a ResultSet is identical whether it comes from
// memory or from the persisted CSV.
struct ResultSet {
  ExperimentKind kind = ExperimentKind::kCertify;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;  // run facts not derivable from rows

  std::size_t column(std::string_view name) const;  // throws naming the column
  bool has_column(std::string_view name) const;
  void require(const std::vector<std::string>& names) const;
  double number(std::size_t row, std::string_view name) const;
  const std::string& cell(std::size_t row, std::string_view name) const;
};

void write_records_csv(const ResultSet& results, std::ostream& out);
ResultSet read_records_csv(ExperimentKind kind, std::istream& in);

// Summary statistics as JSON text, computed from rows only.
std::string summarize(const ResultSet& results);

// Fraction of all points (one row per point) that are correct with radius >= r.
double certified_accuracy(const std::vector<double>& correct_radii, std::size_t total, double r);

enum class PlotKind { kCertifiedCurve, kDistortionVsAccuracy, kBsHistogram, kSliceRaster,
                      kDirectionProfile };

std::string_view to_string(PlotKind kind);

// Restricts slice-raster to one (sigma, n) group, matched on formatted cells.
struct PlotFilter {
  std::optional<std::string> sigma;
  std::optional<std::string> n;
};

std::string render_plot(const ResultSet& results, PlotKind kind, const PlotFilter& filter = {});
void emit_plot(const ResultSet& results, PlotKind kind, const std::filesystem::path& path,
               const PlotFilter& filter = {});

// Symmetric histogram over [-span, span], span = max |value| (fallback when
// all values are zero). Returns edges (bins + 1) and counts.
std::pair<std::vector<double>, std::vector<std::uint64_t>> symmetric_histogram(
    const std::vector<double>& values, std::size_t bins, double fallback_span);

// Runs the experiment and, when spec.out is nonempty, writes records.csv,
// summary.json, spec.resolved.toml and the figures into spec.out.
ResultSet run_experiment(const ExperimentSpec& spec);

// Re-reads a finished run directory, checks that the stored summary matches
// one recomputed from records.csv, and re-renders the figures. Returns the
// list of written files.
std::vector<std::filesystem::path> report(const std::filesystem::path& out_dir);

// Runs task(i) for i in [0, count) on up to `jobs` threads. Exceptions are
// rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task);

}  // namespace rsd

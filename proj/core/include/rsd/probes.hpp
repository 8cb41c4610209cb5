#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsd/classifiers.hpp"
#include "rsd/oracle.hpp"
#include "rsd/smoothing.hpp"

namespace rsd {

// Endpoints of a bisection disagreed with the precondition when re-queried.
// Under a randomized oracle this is transient, so callers may retry.
class SearchPreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using LabelQuery = std::function<Label(PointView)>;

struct BoundarySearch {
  Point boundary;  // midpoint of the final bracket
  Point inside;    // bracket end carrying x_in's label
  Point outside;   // bracket end carrying the other label
  double t_lo = 0.0;
  double t_hi = 1.0;
  std::size_t steps = 0;
  Label inside_label = Label::kZero;
};

// Bisection along x(t) = x_in + t (x_out - x_in). Both endpoints are queried
// first; equal labels raise SearchPreconditionError. Then at least one and at
// most max_steps halvings run, one query each, until t_hi - t_lo <= tol.
BoundarySearch binary_search_boundary(DecisionOracle& oracle, PointView x_in, PointView x_out,
                                      double tol, std::size_t max_steps);
BoundarySearch binary_search_boundary(const LabelQuery& query, PointView x_in, PointView x_out,
                                      double tol, std::size_t max_steps);

struct OffsetStatistics {
  std::vector<double> offsets;  // input units; positive = beyond the smoothed boundary seen from x_in
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> bin_edges;      // bins + 1 edges
  std::vector<std::uint64_t> counts;  // sums to offsets.size()
  std::size_t failures = 0;           // trials whose endpoints kept failing the precondition
  double crossing_t = 0.0;            // reference boundary crossing on the segment
  double segment_length = 0.0;
};

// Runs `trials` independent seeded binary searches against g_{sigma,n} and
// measures where they land relative to the smoothed boundary (pi = 1/2,
// found by root finding on exact_pi). sigma = 0 searches the base
// classifier and measures against its own boundary.
OffsetStatistics binary_search_distribution(std::shared_ptr<const Classifier> base,
                                            const SmoothingConfig& cfg, PointView x_in,
                                            PointView x_out, std::size_t trials, double tol,
                                            std::uint64_t seed, std::size_t bins = 21);

struct ProfilePoint {
  double t = 0.0;
  double flip_probability = 0.0;      // empirical
  std::optional<double> exact_flip;   // from exact_pi when available
};

// Empirical P[g_{sigma,n}(x_o + t * direction) != label_o] on a grid of t.
// label_o is g_sigma(x_o) when exact_pi is available, f(x_o) otherwise.
std::vector<ProfilePoint> direction_profile(const Classifier& base, const SmoothingConfig& cfg,
                                            PointView x_o, PointView direction,
                                            std::span<const double> t_grid,
                                            std::size_t probes_per_point, std::uint64_t seed);

// Probability that one smoothed decision differs from label_o, given the
// exact class probabilities at the point.
double smoothed_flip_probability(const ClassProbabilities& pi, std::uint64_t n, Label label_o);

struct SliceMap {
  Point center;
  Point dir1;
  Point dir2;
  double extent = 0.0;
  std::size_t resolution = 0;
  std::vector<Label> grid;  // row-major; row = index along dir2

  double coord(std::size_t i) const;
  Label at(std::size_t i, std::size_t j) const { return grid[j * resolution + i]; }
  Point point(std::size_t i, std::size_t j) const;
  double fraction_one() const;
};

// One oracle query per cell of a resolution x resolution grid over
// [-extent, extent]^2 in the plane spanned by the orthonormalized directions.
SliceMap slice_map(DecisionOracle& oracle, PointView center, PointView dir1, PointView dir2,
                   double extent, std::size_t resolution);

void write_slice_csv(const SliceMap& map, std::ostream& out);
std::string slice_svg(const SliceMap& map, const std::string& title = "");

struct NormalEstimate {
  Point normal;                  // unit vector pointing toward class 1
  double flip_fraction = 0.0;    // minority share of probe labels
  double positive_fraction = 0.0;
  bool degenerate = false;       // every probe returned the same label
  std::size_t probes = 0;
};

// Mean of probe perturbations signed +1 for class 1 and -1 for class 0.
NormalEstimate estimate_normal(DecisionOracle& oracle, PointView x_b, std::size_t num_probes,
                               double probe_sigma, std::uint64_t seed);

void write_profile_csv(const std::vector<ProfilePoint>& profile, std::ostream& out);
void write_offsets_csv(const OffsetStatistics& stats, std::ostream& out);
void write_histogram_csv(const OffsetStatistics& stats, std::ostream& out);

}  // namespace rsd

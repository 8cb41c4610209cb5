#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsd/classifiers.hpp"
#include "rsd/numerics.hpp"
#include "rsd/random.hpp"

namespace rsd {

struct SmoothingConfig {
  SmoothingConfig(double sigma, std::uint64_t n, double alpha = 0.001, std::uint64_t seed = 0);

  double sigma;        // noise std, input units
  std::uint64_t n;     // Monte Carlo samples per decision
  Probability alpha;   // one-sided confidence complement for pi_lower
  std::uint64_t seed;  // keys the noise streams built from this config
};

struct SmoothedDecision {
  Label label = Label::kZero;
  std::uint64_t votes = 0;  // micro-decisions agreeing with `label`
  std::uint64_t n = 0;
  Probability pi_hat;
  Probability pi_lower;
  double certified_radius_lower = 0.0;
  bool tie = false;  // even n split exactly; resolved to class 0
};

// Number of the n micro-decisions f(x + sigma * N_j) that return class 1.
// Noise sample j comes from stream.gaussian(j), so the count is reproducible
// sample by sample.
std::uint64_t count_class_one_votes(const Classifier& base, double sigma, std::uint64_t n,
                                    PointView x, const DecisionStream& stream);

// Monte Carlo smoothed classifier g_{sigma,n}: majority vote over n noisy
// copies of x, Clopper-Pearson lower bound on the winning share and the
// resulting certified radius (0 when the bound does not exceed 1/2).
SmoothedDecision smoothed_decide(const Classifier& base, const SmoothingConfig& cfg, PointView x,
                                 const DecisionStream& stream);

std::string smoothed_decision_csv_header();
std::string smoothed_decision_csv_row(std::string_view x_id, const SmoothingConfig& cfg,
                                      const SmoothedDecision& decision);

// Class probabilities of the ideal smoothed classifier g_sigma.
struct ClassProbabilities {
  Probability p0;
  Probability p1;

  Probability of(Label y) const { return y == Label::kOne ? p1 : p0; }
  Label winner() const { return p1.value() > p0.value() ? Label::kOne : Label::kZero; }
};

// Closed form for linear classifiers, radial quadrature for spheres.
// nullopt for classifiers without an analytic description. sigma must be > 0.
std::optional<ClassProbabilities> exact_pi(const Classifier& base, PointView x, double sigma);

// pi values are clamped into [kPiClamp, 1 - kPiClamp] before the quantile.
inline constexpr double kPiClamp = 1e-12;
Probability clamp_pi(Probability pi);

// max(0, sigma * Phi^{-1}(pi)). Throws std::domain_error for pi in {0, 1}.
double certified_radius(Probability pi, double sigma);

// Point at distance beta * sigma from the base boundary, with the boundary's
// principal curvatures expressed in noise units (kappa * sigma) so that
// beta * curvature is dimensionless.
struct CurvatureProfile {
  double beta = 0.0;
  std::vector<double> curvatures;
};

std::optional<CurvatureProfile> curvature_profile(const Classifier& base, PointView x,
                                                  double sigma);

struct SormEstimate {
  Probability flip;  // approximate probability that noise crosses the boundary
  bool clamped = false;
};

// Second-order reliability approximation
//   Phi(-beta) * prod_i (1 + beta * kappa_i)^{-1/2}.
// Throws std::domain_error naming the first index with 1 + beta*kappa_i <= 0.
SormEstimate sorm_pi0(const CurvatureProfile& profile);

// 1 - I^{-1}_{pa}(m, m) with m = 1 + floor(n / 2): any point whose
// probability of keeping the original label is below this value is
// pa-adversarial under majority vote. Requires odd n and pa in [1/2, 1).
Probability pa_vote_threshold(std::uint64_t n, Probability pa);

// R + sigma * Phi^{-1}(I^{-1}_{pa}(m, m)). Equals R exactly at pa = 1/2.
double adversarial_distance_bound(double radius, double sigma, std::uint64_t n, Probability pa);

enum class VerifyMode { kExactCount, kRepeatedQuery };

struct AdversarialVerdict {
  bool adversarial = false;
  VerifyMode mode = VerifyMode::kExactCount;
  std::uint64_t flips = 0;     // micro-decisions (exact-count) or decisions (repeated) != label_o
  std::uint64_t trials = 0;    // n, or the number of repeated smoothed decisions
  std::uint64_t required = 0;  // flips needed for a positive verdict
};

// Exact-count: one batch of n micro-decisions, adversarial iff at least
// ceil(n * pa) of them differ from label_o. Repeated-query: ceil(c / (1 - pa))
// full smoothed decisions, adversarial iff the flip fraction is >= pa.
AdversarialVerdict verify_adversarial(const Classifier& base, const SmoothingConfig& cfg,
                                      PointView x_a, Label label_o, Probability pa,
                                      VerifyMode mode, const RandomStream& stream,
                                      double repeat_constant = 10.0);

// ceil(n * p) with a small guard against representation error (0.8 * 10).
std::uint64_t ceil_fraction(std::uint64_t n, double p);

}  // namespace rsd

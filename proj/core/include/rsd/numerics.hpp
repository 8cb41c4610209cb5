#pragma once

#include <cstdint>

namespace rsd {

// A real number in [0, 1]. Construction rejects NaN and out-of-range values.
class Probability {
 public:
  constexpr Probability() = default;
  explicit Probability(double value);

  constexpr double value() const { return value_; }
  constexpr operator double() const { return value_; }  // NOLINT

  Probability complement() const { return Probability(1.0 - value_); }

 private:
  double value_ = 0.0;
};

struct BetaParams {
  BetaParams(double a, double b);

  double a;
  double b;
};

/// Standard normal CDF, 0.5 * erfc(-z / sqrt(2)). Accepts +/-inf; NaN throws
/// std::invalid_argument.
Probability std_normal_cdf(double z);

/// Inverse of std_normal_cdf on the open interval (0, 1). Rational
/// approximation followed by Halley refinement against std_normal_cdf.
/// Throws std::domain_error for p == 0 or p == 1.
double std_normal_quantile(Probability p);

/// Regularized incomplete beta function I_x(a, b).
double reg_inc_beta(double x, BetaParams params);

/// Inverse of reg_inc_beta in x for fixed (a, b). Safeguarded Newton on a
/// shrinking bisection bracket. Throws std::domain_error for p in {0, 1}.
double inv_reg_inc_beta(Probability p, BetaParams params);

/// P[Binomial(n, q) >= k], summed term by term over the shorter tail.
Probability binomial_tail_geq(std::uint64_t n, std::uint64_t k, Probability q);

/// Probability that a strict majority of n Bernoulli(q) votes are ones,
/// written in the equal-parameter form I_q(m, m) with m = 1 + floor(n / 2).
/// The form is exact only for odd n; even n throws std::domain_error.
Probability majority_tail_beta(std::uint64_t n, Probability q);

/// One-sided Clopper-Pearson lower bound L with P[Binomial(n, L) >= k] = alpha.
/// Returns 0 when k == 0.
Probability clopper_pearson_lower(std::uint64_t k, std::uint64_t n, Probability alpha);

}  // namespace rsd

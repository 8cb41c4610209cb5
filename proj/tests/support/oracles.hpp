#pragma once

// Brute-force reference values computed without the library's numerics:
// adaptive quadrature, subset enumeration and plain bisection.

#include <bit>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>

namespace rsd::oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 8, 1e-13);
}

inline double normal_cdf(double z) {
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto density = [&](double t) { return inv_sqrt_2pi * std::exp(-0.5 * t * t); };
  // integrate the smaller side directly so the lower tail keeps relative accuracy
  const double a = std::abs(z);
  double tail = 0.0;
  for (double lo = a; lo < a + 40.0; lo += 2.0) tail += integrate(density, lo, lo + 2.0);
  return z >= 0.0 ? 1.0 - tail : tail;
}

// Smallest x in [lo, hi] with f(x) >= target, for nondecreasing f.
inline double bisect_increasing(const std::function<double(double)>& f, double target, double lo,
                                double hi, int iterations = 200) {
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) >= target ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double normal_quantile(double p) {
  return bisect_increasing(normal_cdf, p, -40.0, 40.0);
}

// I_x(a, b) for a, b >= 1 by direct integration of the beta density, with
// t = u^2 so that fractional a leaves no kink at the origin.
inline double inc_beta(double x, double a, double b) {
  auto density = [&](double u) {
    const double t = u * u;
    return 2.0 * u * std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0);
  };
  return integrate(density, 0.0, std::sqrt(x)) / integrate(density, 0.0, 1.0);
}

inline double inv_inc_beta(double p, double a, double b) {
  return bisect_increasing([&](double x) { return inc_beta(x, a, b); }, p, 0.0, 1.0);
}

// P[Binomial(n, q) >= k] by summing over all 2^n outcomes.
inline double binomial_tail_enum(unsigned n, unsigned k, double q) {
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const auto ones = static_cast<unsigned>(std::popcount(mask));
    if (ones >= k) total += std::pow(q, ones) * std::pow(1.0 - q, n - ones);
  }
  return total;
}

// Same tail for large n: direct sum of log-space pmf terms.
inline double binomial_tail_sum(unsigned n, unsigned k, double q) {
  if (q <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (q >= 1.0) return 1.0;
  double total = 0.0;
  for (unsigned j = k; j <= n; ++j) {
    total += std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
                      j * std::log(q) + (n - j) * std::log1p(-q));
  }
  return total;
}

// L with P[Binomial(n, L) >= k] = alpha by bisection on the summed tail.
inline double clopper_pearson_lower_sum(unsigned k, unsigned n, double alpha) {
  return bisect_increasing([&](double q) { return binomial_tail_sum(n, k, q); }, alpha, 0.0, 1.0,
                           60);
}

// L with P[Binomial(n, L) >= k] = alpha, k >= 1.
inline double clopper_pearson_lower(unsigned k, unsigned n, double alpha) {
  return bisect_increasing([&](double q) { return binomial_tail_enum(n, k, q); }, alpha, 0.0, 1.0,
                           60);
}

// Probability that a strict majority of n votes goes against a label each
// vote keeps with probability keep.
inline double majority_flip_enum(unsigned n, double keep) {
  return binomial_tail_enum(n, n / 2 + 1, 1.0 - keep);
}

}  // namespace rsd::oracle

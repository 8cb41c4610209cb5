#include "rsd/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rsd {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

// Acklam's rational approximation for the lower half of the normal quantile.
double quantile_lower_half(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLowBreak = 0.02425;

  double x;
  if (p < kLowBreak) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  // Halley refinement. In the lower half erfc(-x/sqrt2) is evaluated at a
  // nonnegative argument, so the residual keeps full relative precision.
  for (int iter = 0; iter < 2; ++iter) {
    const double e = 0.5 * std::erfc(-x / kSqrt2) - p;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("reg_inc_beta: continued fraction did not converge");
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double beta_density(double x, BetaParams p, double lbeta) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return std::exp((p.a - 1.0) * std::log(x) + (p.b - 1.0) * std::log1p(-x) - lbeta);
}

double log_binomial_pmf(std::uint64_t n, std::uint64_t j, double log_q, double log_1mq) {
  const double dn = static_cast<double>(n);
  const double dj = static_cast<double>(j);
  return std::lgamma(dn + 1.0) - std::lgamma(dj + 1.0) - std::lgamma(dn - dj + 1.0) +
         dj * log_q + (dn - dj) * log_1mq;
}

}  // namespace

Probability::Probability(double value) : value_(value) {
  if (std::isnan(value)) throw std::invalid_argument("Probability: NaN");
  if (value < 0.0 || value > 1.0) {
    throw std::domain_error("Probability: " + std::to_string(value) + " outside [0, 1]");
  }
}

BetaParams::BetaParams(double a_in, double b_in) : a(a_in), b(b_in) {
  if (!(a > 0.0) || !(b > 0.0) || std::isinf(a) || std::isinf(b)) {
    throw std::domain_error("BetaParams: a and b must be positive and finite");
  }
}

Probability std_normal_cdf(double z) {
  if (std::isnan(z)) throw std::invalid_argument("std_normal_cdf: NaN argument");
  return Probability(0.5 * std::erfc(-z / kSqrt2));
}

double std_normal_quantile(Probability p) {
  const double v = p.value();
  if (v <= 0.0 || v >= 1.0) {
    throw std::domain_error("std_normal_quantile: p must lie in (0, 1)");
  }
  if (v == 0.5) return 0.0;
  // 1 - v is exact for v >= 0.5, so the upper half reuses the lower branch.
  if (v > 0.5) return -quantile_lower_half(1.0 - v);
  return quantile_lower_half(v);
}

double reg_inc_beta(double x, BetaParams params) {
  if (std::isnan(x) || x < 0.0 || x > 1.0) {
    throw std::domain_error("reg_inc_beta: x must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double a = params.a;
  const double b = params.b;
  if (a == b && x == 0.5) return 0.5;

  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  double result;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    result = front * beta_continued_fraction(a, b, x) / a;
  } else {
    result = 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
  }
  return std::clamp(result, 0.0, 1.0);
}

double inv_reg_inc_beta(Probability p, BetaParams params) {
  const double target = p.value();
  if (target <= 0.0 || target >= 1.0) {
    throw std::domain_error("inv_reg_inc_beta: p must lie in (0, 1)");
  }
  if (params.a == params.b && target == 0.5) return 0.5;

  const double lbeta = log_beta(params.a, params.b);
  double lo = 0.0;
  double hi = 1.0;
  double x = params.a / (params.a + params.b);
  for (int iter = 0; iter < 400; ++iter) {
    const double f = reg_inc_beta(x, params) - target;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 1e-15) break;

    const double density = beta_density(x, params, lbeta);
    double next = density > 0.0 ? x - f / density : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-13 * std::max(x, 1e-3)) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

Probability binomial_tail_geq(std::uint64_t n, std::uint64_t k, Probability q) {
  if (n == 0) throw std::domain_error("binomial_tail_geq: n must be >= 1");
  if (k > n) throw std::domain_error("binomial_tail_geq: k > n");
  if (k == 0) return Probability(1.0);
  const double qv = q.value();
  if (qv == 0.0) return Probability(0.0);
  if (qv == 1.0) return Probability(1.0);

  const double log_q = std::log(qv);
  const double log_1mq = std::log1p(-qv);
  const double ratio_up = qv / (1.0 - qv);

  // Sum whichever tail does not contain the mode; both start at the term
  // closest to the mode and decrease monotonically from there.
  const double mean = static_cast<double>(n) * qv;
  if (static_cast<double>(k) > mean) {
    double term = std::exp(log_binomial_pmf(n, k, log_q, log_1mq));
    double sum = 0.0;
    for (std::uint64_t j = k; j <= n; ++j) {
      sum += term;
      if (term < 1e-18 * sum) break;
      term *= static_cast<double>(n - j) / static_cast<double>(j + 1) * ratio_up;
    }
    return Probability(std::clamp(sum, 0.0, 1.0));
  }
  double term = std::exp(log_binomial_pmf(n, k - 1, log_q, log_1mq));
  double sum = 0.0;
  for (std::uint64_t j = k - 1;; --j) {
    sum += term;
    if (j == 0 || term < 1e-18 * sum) break;
    term *= static_cast<double>(j) / static_cast<double>(n - j + 1) / ratio_up;
  }
  return Probability(std::clamp(1.0 - sum, 0.0, 1.0));
}

Probability majority_tail_beta(std::uint64_t n, Probability q) {
  if (n % 2 == 0) {
    throw std::domain_error(
        "majority_tail_beta: equal-parameter form requires odd n (got " +
        std::to_string(n) + ")");
  }
  const double m = static_cast<double>(1 + n / 2);
  return Probability(reg_inc_beta(q.value(), BetaParams(m, m)));
}

Probability clopper_pearson_lower(std::uint64_t k, std::uint64_t n, Probability alpha) {
  if (n == 0) throw std::domain_error("clopper_pearson_lower: n must be >= 1");
  if (k > n) throw std::domain_error("clopper_pearson_lower: k > n");
  if (alpha.value() <= 0.0 || alpha.value() >= 1.0) {
    throw std::domain_error("clopper_pearson_lower: alpha must lie in (0, 1)");
  }
  if (k == 0) return Probability(0.0);
  // I_L(n, 1) = L^n
  if (k == n) return Probability(std::pow(alpha.value(), 1.0 / static_cast<double>(n)));
  return Probability(inv_reg_inc_beta(
      alpha, BetaParams(static_cast<double>(k), static_cast<double>(n - k + 1))));
}

}  // namespace rsd

#include "rsd/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rsd/format.hpp"

namespace rsd {

namespace {

void require_odd(std::uint64_t n, const char* who) {
  if (n % 2 == 0) {
    throw std::domain_error(std::string(who) +
                            ": requires odd n (the equal-parameter vote formula is exact "
                            "only for odd n), got " + std::to_string(n));
  }
}

void require_pa(Probability pa, const char* who) {
  if (pa.value() < 0.5 || pa.value() >= 1.0) {
    throw std::domain_error(std::string(who) + ": pa must lie in [1/2, 1)");
  }
}

// I^{-1}_{pa}(m, m) for m = 1 + floor(n/2).
double majority_quantile(std::uint64_t n, Probability pa) {
  const double m = static_cast<double>(1 + n / 2);
  return inv_reg_inc_beta(pa, BetaParams(m, m));
}

// P[||c + sigma N|| < rho] for a center offset of norm `offset`, d dims.
// Conditioning on the component along the offset leaves a chi-square with
// d - 1 degrees of freedom for the orthogonal part.
double ball_probability(double offset, double rho, double sigma, std::size_t d) {
  const double m = offset / sigma;
  const double r = rho / sigma;
  if (d == 1) {
    return std::clamp(std::erfc((m - r) / std::sqrt(2.0)) * 0.5 -
                          std::erfc((m + r) / std::sqrt(2.0)) * 0.5,
                      0.0, 1.0);
  }
  const double half_dof = 0.5 * static_cast<double>(d - 1);
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  // s = r sin(theta) removes the square-root kink of the chi-square factor at |s| = r.
  auto integrand = [&](double theta) {
    const double s = r * std::sin(theta);
    const double c = r * std::cos(theta);
    const double z = s - m;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z) * boost::math::gamma_p(half_dof, 0.5 * c * c) * c;
  };
  // The Gaussian factor is below 1e-32 more than 12 units away from m.
  auto angle = [&](double v) { return std::asin(std::clamp(v / r, -1.0, 1.0)); };
  const double lo = angle(m - 12.0);
  const double hi = angle(m + 12.0);
  if (lo >= hi) return 0.0;
  double total = 0.0;
  // Split at the Gaussian peak so each piece is unimodal.
  double pieces[3] = {lo, std::clamp(angle(m), lo, hi), hi};
  for (int i = 0; i < 2; ++i) {
    if (pieces[i + 1] - pieces[i] <= 0.0) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, pieces[i], pieces[i + 1], 15, 1e-14);
  }
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace

SmoothingConfig::SmoothingConfig(double sigma_in, std::uint64_t n_in, double alpha_in,
                                 std::uint64_t seed_in)
    : sigma(sigma_in), n(n_in), alpha(alpha_in), seed(seed_in) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("SmoothingConfig: sigma must be finite and >= 0");
  }
  if (n == 0) throw std::invalid_argument("SmoothingConfig: n must be >= 1");
  if (alpha.value() <= 0.0 || alpha.value() >= 1.0) {
    throw std::invalid_argument("SmoothingConfig: alpha must lie in (0, 1)");
  }
}

std::uint64_t count_class_one_votes(const Classifier& base, double sigma, std::uint64_t n,
                                    PointView x, const DecisionStream& stream) {
  if (sigma == 0.0) {
    return base.decide(x) == Label::kOne ? n : 0;
  }
  const std::size_t d = x.size();
  std::vector<double> noise(d);
  Point noisy(d);
  std::uint64_t ones = 0;
  for (std::uint64_t j = 0; j < n; ++j) {
    stream.gaussian(static_cast<std::uint32_t>(j), noise);
    for (std::size_t i = 0; i < d; ++i) noisy[i] = x[i] + sigma * noise[i];
    if (base.decide(noisy) == Label::kOne) ++ones;
  }
  return ones;
}

SmoothedDecision smoothed_decide(const Classifier& base, const SmoothingConfig& cfg, PointView x,
                                 const DecisionStream& stream) {
  const std::uint64_t ones = count_class_one_votes(base, cfg.sigma, cfg.n, x, stream);
  const std::uint64_t zeros = cfg.n - ones;

  SmoothedDecision out;
  out.n = cfg.n;
  out.tie = ones == zeros;
  out.label = ones > zeros ? Label::kOne : Label::kZero;
  out.votes = out.label == Label::kOne ? ones : zeros;
  const double n = static_cast<double>(cfg.n);
  out.pi_hat = Probability(static_cast<double>(out.votes) / n);
  out.pi_lower = clopper_pearson_lower(out.votes, cfg.n, cfg.alpha);
  out.certified_radius_lower =
      out.pi_lower.value() > 0.5 ? certified_radius(clamp_pi(out.pi_lower), cfg.sigma) : 0.0;
  return out;
}

std::string smoothed_decision_csv_header() {
  return "x_id,sigma,n,alpha,label,votes,pi_hat,pi_lower,radius_lower,tie";
}

std::string smoothed_decision_csv_row(std::string_view x_id, const SmoothingConfig& cfg,
                                      const SmoothedDecision& d) {
  std::string row(x_id);
  row += ',' + fmt_num(cfg.sigma) + ',' + std::to_string(cfg.n) + ',' + fmt_num(cfg.alpha) + ',' +
         std::to_string(to_int(d.label)) + ',' + std::to_string(d.votes) + ',' +
         fmt_num(d.pi_hat) + ',' + fmt_num(d.pi_lower) + ',' + fmt_num(d.certified_radius_lower) +
         ',' + (d.tie ? "1" : "0");
  return row;
}

std::optional<ClassProbabilities> exact_pi(const Classifier& base, PointView x, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("exact_pi: sigma must be > 0");
  if (const auto* lin = dynamic_cast<const LinearClassifier*>(&base)) {
    const double z = lin->signed_margin(x) / sigma;
    return ClassProbabilities{std_normal_cdf(-z), std_normal_cdf(z)};
  }
  if (const auto* sph = dynamic_cast<const SphereClassifier*>(&base)) {
    const double offset = l2_distance(x, sph->center());
    const double inside = ball_probability(offset, sph->radius(), sigma, base.dimension());
    return ClassProbabilities{Probability(1.0 - inside), Probability(inside)};
  }
  return std::nullopt;
}

Probability clamp_pi(Probability pi) {
  return Probability(std::clamp(pi.value(), kPiClamp, 1.0 - kPiClamp));
}

double certified_radius(Probability pi, double sigma) {
  if (pi.value() <= 0.0 || pi.value() >= 1.0) {
    throw std::domain_error("certified_radius: pi must lie in (0, 1); clamp it first");
  }
  if (!(sigma >= 0.0)) throw std::invalid_argument("certified_radius: sigma must be >= 0");
  return std::max(0.0, sigma * std_normal_quantile(pi));
}

std::optional<CurvatureProfile> curvature_profile(const Classifier& base, PointView x,
                                                  double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("curvature_profile: sigma must be > 0");
  const auto distance = base.distance_to_boundary(x);
  auto curvatures = base.principal_curvatures(x);
  if (!distance || !curvatures) return std::nullopt;
  CurvatureProfile profile;
  profile.beta = *distance / sigma;
  profile.curvatures = std::move(*curvatures);
  for (double& k : profile.curvatures) k *= sigma;
  return profile;
}

SormEstimate sorm_pi0(const CurvatureProfile& profile) {
  double value = std_normal_cdf(-profile.beta).value();
  for (std::size_t i = 0; i < profile.curvatures.size(); ++i) {
    const double factor = 1.0 + profile.beta * profile.curvatures[i];
    if (!(factor > 0.0)) {
      throw std::domain_error("sorm_pi0: 1 + beta * kappa_" + std::to_string(i) +
                              " = " + fmt_num(factor) + " is not positive");
    }
    value /= std::sqrt(factor);
  }
  SormEstimate out;
  out.clamped = value > 1.0;
  out.flip = Probability(std::min(value, 1.0));
  return out;
}

Probability pa_vote_threshold(std::uint64_t n, Probability pa) {
  require_odd(n, "pa_vote_threshold");
  require_pa(pa, "pa_vote_threshold");
  return Probability(1.0 - majority_quantile(n, pa));
}

double adversarial_distance_bound(double radius, double sigma, std::uint64_t n, Probability pa) {
  require_odd(n, "adversarial_distance_bound");
  require_pa(pa, "adversarial_distance_bound");
  if (!(radius >= 0.0) || !(sigma >= 0.0)) {
    throw std::invalid_argument("adversarial_distance_bound: radius and sigma must be >= 0");
  }
  return radius + sigma * std_normal_quantile(Probability(majority_quantile(n, pa)));
}

std::uint64_t ceil_fraction(std::uint64_t n, double p) {
  const double scaled = static_cast<double>(n) * p;
  return static_cast<std::uint64_t>(std::ceil(scaled - 1e-9 * std::max(1.0, scaled)));
}

AdversarialVerdict verify_adversarial(const Classifier& base, const SmoothingConfig& cfg,
                                      PointView x_a, Label label_o, Probability pa,
                                      VerifyMode mode, const RandomStream& stream,
                                      double repeat_constant) {
  AdversarialVerdict verdict;
  verdict.mode = mode;
  if (mode == VerifyMode::kExactCount) {
    const std::uint64_t ones = count_class_one_votes(base, cfg.sigma, cfg.n, x_a, stream.decision(0));
    verdict.trials = cfg.n;
    verdict.flips = label_o == Label::kOne ? cfg.n - ones : ones;
    verdict.required = std::max<std::uint64_t>(1, ceil_fraction(cfg.n, pa));
    verdict.adversarial = verdict.flips >= verdict.required;
    return verdict;
  }
  if (pa.value() >= 1.0) throw std::domain_error("verify_adversarial: repeated-query needs pa < 1");
  if (!(repeat_constant > 0.0)) {
    throw std::invalid_argument("verify_adversarial: repeat constant must be > 0");
  }
  const auto trials =
      static_cast<std::uint64_t>(std::ceil(repeat_constant / (1.0 - pa.value()) - 1e-9));
  verdict.trials = trials;
  verdict.required = std::max<std::uint64_t>(1, ceil_fraction(trials, pa));
  for (std::uint64_t t = 0; t < trials; ++t) {
    if (smoothed_decide(base, cfg, x_a, stream.decision(t)).label != label_o) ++verdict.flips;
  }
  verdict.adversarial = verdict.flips >= verdict.required;
  return verdict;
}

}  // namespace rsd

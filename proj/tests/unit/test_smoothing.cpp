#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "../support/oracles.hpp"
#include "rsd/random.hpp"
#include "rsd/smoothing.hpp"

namespace {

using rsd::Label;
using rsd::Point;
using rsd::Probability;

TEST(SmoothingConfig, Validates) {
  EXPECT_THROW(rsd::SmoothingConfig(-0.1, 10), std::invalid_argument);
  EXPECT_THROW(rsd::SmoothingConfig(0.1, 0), std::invalid_argument);
  EXPECT_NO_THROW(rsd::SmoothingConfig(0.0, 1));
}

TEST(SmoothedDecide, SigmaZeroIsTheBaseClassifier) {
  const rsd::LinearClassifier f({1.0, 1.0}, -1.0);
  const rsd::SmoothingConfig cfg(0.0, 7);
  const auto d = rsd::smoothed_decide(f, cfg, Point{0.9, 0.9}, rsd::RandomStream(1).decision(0));
  EXPECT_EQ(d.label, Label::kOne);
  EXPECT_EQ(d.votes, 7u);
}

TEST(SmoothedDecide, TiesGoToClassZero) {
  // Point on the plane: each micro-decision is a fair coin. Look for an
  // exact 50/50 split at even n and check the tie rule.
  const rsd::LinearClassifier f({1.0, 0.0}, -0.5);
  const rsd::SmoothingConfig cfg(0.1, 2);
  int ties = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto d = rsd::smoothed_decide(f, cfg, Point{0.5, 0.5}, rsd::RandomStream(3).decision(i));
    if (d.tie) {
      ++ties;
      EXPECT_EQ(d.label, Label::kZero);
      EXPECT_EQ(d.votes, 1u);
    }
  }
  EXPECT_GT(ties, 50);
}

TEST(SmoothedDecide, RadiusFollowsTheLowerBound) {
  const rsd::LinearClassifier f({1.0, 0.0}, -0.3);
  const rsd::SmoothingConfig cfg(0.1, 1000, 0.001);
  const auto d = rsd::smoothed_decide(f, cfg, Point{0.45, 0.5}, rsd::RandomStream(4).decision(0));
  EXPECT_EQ(d.label, Label::kOne);
  EXPECT_NEAR(d.pi_lower.value(),
              rsd::oracle::clopper_pearson_lower_sum(static_cast<unsigned>(d.votes), 1000, 0.001),
              1e-9);
  EXPECT_NEAR(d.certified_radius_lower,
              0.1 * rsd::oracle::normal_quantile(d.pi_lower.value()), 1e-9);
  EXPECT_LT(d.certified_radius_lower, 0.15);
}

TEST(CertifiedRadius, ZeroAtOneHalfAndDomainErrors) {
  EXPECT_EQ(rsd::certified_radius(Probability(0.5), 0.3), 0.0);
  EXPECT_EQ(rsd::certified_radius(Probability(0.2), 0.3), 0.0);
  EXPECT_THROW(rsd::certified_radius(Probability(1.0), 0.3), std::domain_error);
  EXPECT_NO_THROW(rsd::certified_radius(rsd::clamp_pi(Probability(1.0)), 0.3));
  EXPECT_NEAR(rsd::clamp_pi(Probability(0.0)).value(), rsd::kPiClamp, 0.0);
}

TEST(ExactPi, LinearClosedFormGivesPlaneDistance) {
  rsd::CounterRng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    Point w(5), x(5);
    for (auto& v : w) v = rng.normal();
    for (auto& v : x) v = rng.uniform();
    const rsd::LinearClassifier f(w, rng.uniform(-1.0, 1.0));
    const double sigma = rng.uniform(0.05, 0.5);
    const double margin = f.signed_margin(x);
    if (std::abs(margin) > 5.0 * sigma) continue;
    const auto pi = rsd::exact_pi(f, x, sigma);
    ASSERT_TRUE(pi);
    EXPECT_NEAR(pi->p1.value(), rsd::oracle::normal_cdf(margin / sigma), 1e-12);
    EXPECT_NEAR(pi->p0.value() + pi->p1.value(), 1.0, 1e-15);
    const double r = rsd::certified_radius(pi->of(pi->winner()), sigma);
    EXPECT_NEAR(r, std::abs(margin), 1e-9);
  }
}

TEST(ExactPi, SphereMatchesMonteCarlo) {
  auto f = std::make_shared<rsd::SphereClassifier>(Point{0.5, 0.5, 0.5}, 0.2);
  const double sigma = 0.1;
  for (const Point& x : {Point{0.5, 0.5, 0.5}, Point{0.62, 0.5, 0.5}, Point{0.8, 0.6, 0.5}}) {
    const auto pi = rsd::exact_pi(*f, x, sigma);
    ASSERT_TRUE(pi);
    const std::uint64_t n = 200000;
    const auto ones =
        rsd::count_class_one_votes(*f, sigma, n, x, rsd::RandomStream(5).decision(0));
    const double p = pi->p1.value();
    EXPECT_NEAR(static_cast<double>(ones) / n, p, 4.0 * std::sqrt(p * (1 - p) / n) + 1e-12);
  }
}

TEST(ExactPi, NoneForTrainedNetworksAndRejectsZeroSigma) {
  const rsd::LinearClassifier f({1.0, 0.0}, 0.0);
  EXPECT_THROW(rsd::exact_pi(f, Point{0.1, 0.1}, 0.0), std::invalid_argument);
}

TEST(PaVoteThreshold, MatchesVoteEnumeration) {
  for (std::uint64_t n = 1; n <= 15; n += 2) {
    for (double pa : {0.55, 0.8, 0.95}) {
      const double thr = rsd::pa_vote_threshold(n, Probability(pa)).value();
      for (int i = 1; i < 100; ++i) {
        const double keep = i / 100.0;
        const double flip = rsd::oracle::majority_flip_enum(static_cast<unsigned>(n), keep);
        if (std::abs(flip - pa) < 1e-9) continue;
        EXPECT_EQ(keep < thr, flip >= pa) << n << ' ' << pa << ' ' << keep;
      }
    }
  }
}

TEST(PaVoteThreshold, SingleVoteIsOneMinusPa) {
  EXPECT_NEAR(rsd::pa_vote_threshold(1, Probability(0.8)).value(), 0.2, 1e-12);
  EXPECT_NEAR(rsd::pa_vote_threshold(7, Probability(0.5)).value(), 0.5, 1e-12);
  EXPECT_THROW(rsd::pa_vote_threshold(4, Probability(0.8)), std::domain_error);
  EXPECT_THROW(rsd::pa_vote_threshold(5, Probability(0.4)), std::domain_error);
}

TEST(AdversarialBound, EqualsRadiusAtOneHalfAndIncreasesWithPa) {
  for (std::uint64_t n : {1u, 11u, 201u}) {
    for (double r : {0.0, 0.1, 1.3}) {
      EXPECT_EQ(rsd::adversarial_distance_bound(r, 0.25, n, Probability(0.5)), r);
      double prev = r;
      for (double pa = 0.51; pa < 0.999; pa += 0.02) {
        const double b = rsd::adversarial_distance_bound(r, 0.25, n, Probability(pa));
        EXPECT_GT(b, prev);
        prev = b;
      }
    }
  }
}

TEST(AdversarialBound, MoreSamplesTightenTheBound) {
  const double few = rsd::adversarial_distance_bound(0.1, 0.2, 11, Probability(0.8));
  const double many = rsd::adversarial_distance_bound(0.1, 0.2, 1001, Probability(0.8));
  EXPECT_GT(few, many);
}

TEST(CeilFraction, GuardsRepresentationError) {
  EXPECT_EQ(rsd::ceil_fraction(10, 0.8), 8u);
  EXPECT_EQ(rsd::ceil_fraction(10, 0.81), 9u);
  EXPECT_EQ(rsd::ceil_fraction(3, 0.5), 2u);
}

TEST(VerifyAdversarial, ExactCountUsesCeilOfNPa) {
  const rsd::LinearClassifier f({1.0, 0.0}, -0.5);
  const rsd::SmoothingConfig cfg(0.05, 50);
  const auto far = rsd::verify_adversarial(f, cfg, Point{0.8, 0.5}, Label::kZero, Probability(0.8),
                                           rsd::VerifyMode::kExactCount, rsd::RandomStream(1));
  EXPECT_TRUE(far.adversarial);
  EXPECT_EQ(far.required, 40u);
  EXPECT_EQ(far.trials, 50u);
  EXPECT_EQ(far.flips, 50u);
  const auto near = rsd::verify_adversarial(f, cfg, Point{0.5, 0.5}, Label::kZero,
                                            Probability(0.8), rsd::VerifyMode::kExactCount,
                                            rsd::RandomStream(1));
  EXPECT_FALSE(near.adversarial);
}

TEST(VerifyAdversarial, RepeatedQueryCount) {
  const rsd::LinearClassifier f({1.0, 0.0}, -0.5);
  const rsd::SmoothingConfig cfg(0.05, 11);
  const auto v = rsd::verify_adversarial(f, cfg, Point{0.7, 0.5}, Label::kZero, Probability(0.8),
                                         rsd::VerifyMode::kRepeatedQuery, rsd::RandomStream(2));
  EXPECT_EQ(v.trials, 50u);
  EXPECT_EQ(v.required, 40u);
  EXPECT_TRUE(v.adversarial);
  EXPECT_THROW(rsd::verify_adversarial(f, cfg, Point{0.7, 0.5}, Label::kZero, Probability(1.0),
                                       rsd::VerifyMode::kRepeatedQuery, rsd::RandomStream(2)),
               std::domain_error);
}

TEST(Sorm, FlatCaseIsTheNormalTail) {
  for (double beta : {0.0, 0.5, 1.7, 3.0}) {
    const rsd::CurvatureProfile p{beta, {0.0, 0.0}};
    EXPECT_EQ(rsd::sorm_pi0(p).flip.value(), rsd::std_normal_cdf(-beta).value());
  }
}

TEST(Sorm, ProductFormAndDomain) {
  const rsd::CurvatureProfile p{1.0, {0.2, -0.3}};
  const double expected = rsd::oracle::normal_cdf(-1.0) / std::sqrt(1.2 * 0.7);
  EXPECT_NEAR(rsd::sorm_pi0(p).flip.value(), expected, 1e-12);
  EXPECT_THROW(rsd::sorm_pi0({2.0, {0.1, -0.5}}), std::domain_error);
}

TEST(CurvatureProfile, SphereInNoiseUnits) {
  const rsd::SphereClassifier f({0.5, 0.5, 0.5}, 0.2);
  const auto p = rsd::curvature_profile(f, Point{0.6, 0.5, 0.5}, 0.05);
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->beta, 2.0, 1e-12);
  ASSERT_EQ(p->curvatures.size(), 2u);
  EXPECT_NEAR(p->curvatures[0], -0.25, 1e-12);
}

TEST(CsvRow, NineSignificantDigits) {
  const rsd::SmoothingConfig cfg(0.1, 10);
  rsd::SmoothedDecision d;
  d.label = Label::kOne;
  d.votes = 9;
  d.n = 10;
  d.pi_hat = Probability(0.9);
  d.pi_lower = Probability(0.123456789123);
  EXPECT_EQ(rsd::smoothed_decision_csv_row("p7", cfg, d), "p7,0.1,10,0.001,1,9,0.9,0.123456789,0,0");
  EXPECT_EQ(rsd::smoothed_decision_csv_header(),
            "x_id,sigma,n,alpha,label,votes,pi_hat,pi_lower,radius_lower,tie");
}

}  // namespace

#include <gtest/gtest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "rsd/numerics.hpp"

namespace {

using rsd::BetaParams;
using rsd::Probability;

TEST(Probability, RejectsOutOfRangeAndNan) {
  EXPECT_THROW(Probability(-0.1), std::domain_error);
  EXPECT_THROW(Probability(1.0000001), std::domain_error);
  EXPECT_THROW(Probability(std::nan("")), std::invalid_argument);
  EXPECT_DOUBLE_EQ(Probability(0.25).complement().value(), 0.75);
}

TEST(NormalCdf, MatchesQuadrature) {
  for (double z = -8.0; z <= 8.0; z += 0.137) {
    EXPECT_NEAR(rsd::std_normal_cdf(z).value(), rsd::oracle::normal_cdf(z), 1e-12) << z;
  }
}

TEST(NormalCdf, Limits) {
  EXPECT_EQ(rsd::std_normal_cdf(-INFINITY).value(), 0.0);
  EXPECT_EQ(rsd::std_normal_cdf(INFINITY).value(), 1.0);
  EXPECT_EQ(rsd::std_normal_cdf(0.0).value(), 0.5);
  EXPECT_THROW(rsd::std_normal_cdf(std::nan("")), std::invalid_argument);
}

TEST(NormalQuantile, MatchesBisectionOnQuadrature) {
  for (double p : {1e-9, 1e-6, 0.001, 0.025, 0.2, 0.5, 0.7, 0.975, 0.999, 1 - 1e-6}) {
    EXPECT_NEAR(rsd::std_normal_quantile(Probability(p)), rsd::oracle::normal_quantile(p), 1e-8)
        << p;
  }
  EXPECT_THROW(rsd::std_normal_quantile(Probability(0.0)), std::domain_error);
  EXPECT_THROW(rsd::std_normal_quantile(Probability(1.0)), std::domain_error);
}

TEST(NormalQuantile, RoundTripsAndIsMonotone) {
  double prev = -INFINITY;
  for (int i = 1; i < 1000; ++i) {
    const double p = i / 1000.0;
    const double z = rsd::std_normal_quantile(Probability(p));
    EXPECT_GT(z, prev);
    EXPECT_NEAR(rsd::std_normal_cdf(z).value(), p, 1e-14);
    prev = z;
  }
}

TEST(IncBeta, ClosedFormTwoTwo) {
  EXPECT_NEAR(rsd::reg_inc_beta(0.7, BetaParams(2, 2)), 0.784, 1e-14);
  for (double x = 0.0; x <= 1.0; x += 0.01) {
    EXPECT_NEAR(rsd::reg_inc_beta(x, BetaParams(2, 2)), 3 * x * x - 2 * x * x * x, 1e-13);
  }
}

TEST(IncBeta, PowerClosedForms) {
  // I_x(a, 1) = x^a and I_x(1, b) = 1 - (1 - x)^b
  for (double x : {0.05, 0.3, 0.61, 0.99}) {
    EXPECT_NEAR(rsd::reg_inc_beta(x, BetaParams(3.5, 1)), std::pow(x, 3.5), 1e-13);
    EXPECT_NEAR(rsd::reg_inc_beta(x, BetaParams(1, 4.25)), 1 - std::pow(1 - x, 4.25), 1e-13);
  }
}

TEST(IncBeta, MatchesQuadrature) {
  for (double a : {1.0, 1.5, 3.0, 8.0}) {
    for (double b : {1.0, 2.5, 6.0}) {
      for (double x : {0.1, 0.35, 0.5, 0.8, 0.95}) {
        EXPECT_NEAR(rsd::reg_inc_beta(x, BetaParams(a, b)), rsd::oracle::inc_beta(x, a, b), 1e-10)
            << a << ' ' << b << ' ' << x;
      }
    }
  }
}

TEST(IncBeta, MatchesBinomialEnumeration) {
  // I_q(k, n - k + 1) = P[Bin(n, q) >= k]
  for (unsigned n = 1; n <= 15; n += 2) {
    for (unsigned k = 1; k <= n; ++k) {
      for (double q : {0.05, 0.2, 0.5, 0.77}) {
        EXPECT_NEAR(rsd::reg_inc_beta(q, BetaParams(k, n - k + 1)),
                    rsd::oracle::binomial_tail_enum(n, k, q), 1e-12);
      }
    }
  }
}

TEST(InvIncBeta, ClosedFormTwoTwo) {
  EXPECT_NEAR(rsd::inv_reg_inc_beta(Probability(0.8), BetaParams(2, 2)), 0.7129, 1e-4);
  EXPECT_NEAR(rsd::inv_reg_inc_beta(Probability(0.784), BetaParams(2, 2)), 0.7, 1e-12);
}

TEST(InvIncBeta, MatchesBisectionOracle) {
  for (double a : {1.0, 2.0, 5.0, 8.0}) {
    for (double b : {1.0, 3.0, 8.0}) {
      for (double p : {0.01, 0.3, 0.5, 0.9, 0.999}) {
        EXPECT_NEAR(rsd::inv_reg_inc_beta(Probability(p), BetaParams(a, b)),
                    rsd::oracle::inv_inc_beta(p, a, b), 1e-9);
      }
    }
  }
}

TEST(InvIncBeta, RejectsDegenerateProbabilities) {
  EXPECT_THROW(rsd::inv_reg_inc_beta(Probability(0.0), BetaParams(2, 2)), std::domain_error);
  EXPECT_THROW(rsd::inv_reg_inc_beta(Probability(1.0), BetaParams(2, 2)), std::domain_error);
  EXPECT_THROW(BetaParams(0.0, 1.0), std::domain_error);
}

TEST(BinomialTail, SmallCaseByHand) {
  // n=3, k=2, q=0.2: 3 * 0.04 * 0.8 + 0.008
  EXPECT_NEAR(rsd::binomial_tail_geq(3, 2, Probability(0.2)).value(), 0.104, 1e-15);
  EXPECT_EQ(rsd::binomial_tail_geq(5, 0, Probability(0.3)).value(), 1.0);
  EXPECT_THROW(rsd::binomial_tail_geq(5, 6, Probability(0.3)), std::domain_error);
}

TEST(BinomialTail, MatchesEnumeration) {
  for (unsigned n = 1; n <= 15; ++n) {
    for (unsigned k = 0; k <= n; ++k) {
      for (double q : {0.01, 0.3, 0.5, 0.9}) {
        EXPECT_NEAR(rsd::binomial_tail_geq(n, k, Probability(q)).value(),
                    rsd::oracle::binomial_tail_enum(n, k, q), 1e-12);
      }
    }
  }
}

TEST(MajorityTail, MatchesEnumerationForOddN) {
  for (unsigned n = 1; n <= 15; n += 2) {
    for (double q : {0.1, 0.45, 0.5, 0.6, 0.93}) {
      EXPECT_NEAR(rsd::majority_tail_beta(n, Probability(q)).value(),
                  rsd::oracle::binomial_tail_enum(n, n / 2 + 1, q), 1e-12);
    }
  }
  EXPECT_THROW(rsd::majority_tail_beta(4, Probability(0.5)), std::domain_error);
}

TEST(ClopperPearson, MatchesEnumerationBisection) {
  for (unsigned n : {5u, 10u, 15u}) {
    for (unsigned k = 1; k <= n; ++k) {
      for (double alpha : {0.001, 0.05}) {
        EXPECT_NEAR(rsd::clopper_pearson_lower(k, n, Probability(alpha)).value(),
                    rsd::oracle::clopper_pearson_lower(k, n, alpha), 1e-9);
      }
    }
  }
}

TEST(ClopperPearson, EdgeCasesAndMonotonicity) {
  EXPECT_EQ(rsd::clopper_pearson_lower(0, 10, Probability(0.05)).value(), 0.0);
  // k = n has the closed form alpha^(1/n)
  EXPECT_NEAR(rsd::clopper_pearson_lower(20, 20, Probability(0.05)).value(),
              std::pow(0.05, 1.0 / 20), 1e-12);
  double prev = 0.0;
  for (std::uint64_t k = 1; k <= 1000; k += 37) {
    const double l = rsd::clopper_pearson_lower(k, 1000, Probability(0.001)).value();
    EXPECT_GT(l, prev);
    EXPECT_LT(l, static_cast<double>(k) / 1000.0);
    prev = l;
  }
}

}  // namespace

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "rsd/attacks.hpp"
#include "rsd/random.hpp"

namespace {

using rsd::AttackKind;
using rsd::Label;
using rsd::Point;

const AttackKind kAll[] = {AttackKind::kHsja, AttackKind::kSurfree, AttackKind::kRays};

std::shared_ptr<const rsd::Classifier> diagonal_plane(std::size_t d) {
  return std::make_shared<rsd::LinearClassifier>(std::vector<double>(d, 1.0),
                                                 -0.5 * static_cast<double>(d));
}

rsd::AttackConfig config(std::uint64_t budget, std::uint64_t seed = 1) {
  rsd::AttackConfig cfg;
  cfg.budget = budget;
  cfg.seed = seed;
  return cfg;
}

class AttackInvariants : public ::testing::TestWithParam<AttackKind> {};

TEST_P(AttackInvariants, TraceIsMonotoneClippedAndWithinBudget) {
  const std::size_t d = 6;
  const auto f = diagonal_plane(d);
  rsd::CounterRng rng(31);
  for (int point = 0; point < 4; ++point) {
    Point x(d);
    for (auto& v : x) v = rng.uniform(0.1, 0.4);
    rsd::DecisionOracle oracle(f);
    const auto trace = rsd::run_attack(GetParam(), oracle, x, f->decide(x), config(500, point));
    EXPECT_LE(trace.queries_used, 500u);
    EXPECT_EQ(oracle.queries(), trace.queries_used);
    EXPECT_EQ(trace.reason, rsd::TerminationReason::kBudgetExhausted);
    ASSERT_FALSE(trace.milestones.empty());
    for (std::size_t k = 0; k < trace.milestones.size(); ++k) {
      const auto& m = trace.milestones[k];
      EXPECT_NE(f->decide(m.x), f->decide(x));
      for (double v : m.x) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
      EXPECT_NEAR(m.best_distortion, rsd::l2_distance(m.x, x), 1e-12);
      if (k > 0) {
        EXPECT_LT(m.best_distortion, trace.milestones[k - 1].best_distortion);
        EXPECT_GT(m.queries_used, trace.milestones[k - 1].queries_used);
      }
    }
    ASSERT_TRUE(trace.final_adversarial);
    EXPECT_EQ(*trace.final_adversarial, trace.milestones.back().x);
    // never closer than the true minimum
    EXPECT_GE(*trace.final_distortion(), *f->distance_to_boundary(x) - 1e-12);
  }
}

TEST_P(AttackInvariants, ConvergesNearTheLinearOptimum) {
  const std::size_t d = 8;
  const auto f = diagonal_plane(d);
  Point x(d, 0.3);
  rsd::DecisionOracle oracle(f);
  const auto trace = rsd::run_attack(GetParam(), oracle, x, Label::kZero, config(2000, 5));
  EXPECT_LT(*trace.final_distortion(), 1.25 * *f->distance_to_boundary(x));
}

TEST_P(AttackInvariants, AlreadyAdversarialStopsAtZero) {
  const auto f = diagonal_plane(4);
  rsd::DecisionOracle oracle(f);
  const Point x(4, 0.9);
  const auto trace = rsd::run_attack(GetParam(), oracle, x, Label::kZero, config(100));
  EXPECT_EQ(trace.reason, rsd::TerminationReason::kAlreadyAdversarial);
  EXPECT_EQ(trace.queries_used, 1u);
  ASSERT_EQ(trace.milestones.size(), 1u);
  EXPECT_EQ(trace.milestones[0].best_distortion, 0.0);
}

TEST_P(AttackInvariants, ConstantClassifierFailsInitialization) {
  // plane outside the cube: no point of [0,1]^d is class 1
  auto f = std::make_shared<rsd::LinearClassifier>(std::vector<double>{1.0, 1.0}, -5.0);
  rsd::DecisionOracle oracle(f);
  const auto trace = rsd::run_attack(GetParam(), oracle, Point{0.5, 0.5}, Label::kZero,
                                     config(2000));
  EXPECT_TRUE(trace.milestones.empty());
  EXPECT_FALSE(trace.final_adversarial);
  EXPECT_LE(trace.queries_used, 2000u);
}

TEST_P(AttackInvariants, SmoothedOracleRunsAreReproducible) {
  const auto f = diagonal_plane(5);
  const rsd::SmoothingConfig smooth(0.05, 11, 0.001, 9);
  const Point x(5, 0.3);
  std::string first;
  for (int rep = 0; rep < 2; ++rep) {
    rsd::DecisionOracle oracle(f, smooth, 3);
    const auto trace = rsd::run_attack(GetParam(), oracle, x, Label::kZero, config(400, 2));
    std::ostringstream out;
    rsd::write_trace_csv(trace, out);
    if (rep == 0) first = out.str();
    else EXPECT_EQ(out.str(), first);
  }
}

TEST_P(AttackInvariants, BudgetCountsFromTheOraclesCurrentCount) {
  const auto f = diagonal_plane(4);
  rsd::DecisionOracle oracle(f);
  for (int i = 0; i < 37; ++i) oracle.query(Point(4, 0.1));
  const auto trace = rsd::run_attack(GetParam(), oracle, Point(4, 0.3), Label::kZero, config(300));
  EXPECT_LE(trace.queries_used, 300u);
  EXPECT_EQ(oracle.queries(), 37u + trace.queries_used);
}

INSTANTIATE_TEST_SUITE_P(AllAttacks, AttackInvariants, ::testing::ValuesIn(kAll),
                         [](const auto& info) { return std::string(rsd::to_string(info.param)); });

TEST(Attacks, RaysLogsAcceptedRadiiInDecreasingOrder) {
  const auto f = diagonal_plane(8);
  rsd::DecisionOracle oracle(f);
  const auto trace = rsd::attack_rays(oracle, Point(8, 0.3), Label::kZero, config(1000));
  ASSERT_FALSE(trace.accepted_radii.empty());
  for (std::size_t k = 1; k < trace.accepted_radii.size(); ++k) {
    EXPECT_LT(trace.accepted_radii[k], trace.accepted_radii[k - 1]);
  }
}

TEST(Attacks, ConfigValidation) {
  rsd::AttackConfig cfg;
  cfg.budget = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.surfree.probes_per_arc = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.rays.rel_tol = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Attacks, KindNames) {
  for (auto k : kAll) EXPECT_EQ(rsd::attack_kind_from_string(rsd::to_string(k)), k);
  EXPECT_THROW(rsd::attack_kind_from_string("boundary"), std::invalid_argument);
}

TEST(BestDistortion, LastMilestoneWithinBudget) {
  rsd::AttackTrace t;
  t.milestones = {{5, 0.9, {}}, {40, 0.5, {}}, {300, 0.2, {}}};
  EXPECT_FALSE(rsd::best_distortion(t, 4));
  EXPECT_EQ(*rsd::best_distortion(t, 5), 0.9);
  EXPECT_EQ(*rsd::best_distortion(t, 299), 0.5);
  EXPECT_EQ(*rsd::best_distortion(t, 10000), 0.2);
  EXPECT_THROW(rsd::best_distortion(t, 0), std::invalid_argument);
}

TEST(TraceIo, CsvAndSidecar) {
  rsd::AttackTrace t;
  t.attack = "hsja";
  t.milestones = {{3, 0.25, {0.1}}, {17, 0.125, {0.2}}};
  t.queries_used = 20;
  std::ostringstream csv;
  rsd::write_trace_csv(t, csv);
  EXPECT_EQ(csv.str(), "queries_used,best_distortion\n3,0.25\n17,0.125\n");
  const std::string json = rsd::trace_sidecar_json(t, config(20));
  EXPECT_NE(json.find("\"attack\""), std::string::npos);
  EXPECT_NE(json.find("budget_exhausted"), std::string::npos);
}

}  // namespace

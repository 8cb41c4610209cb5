#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include "rsd/oracle.hpp"
#include "rsd/probes.hpp"

namespace {

using rsd::Label;
using rsd::Point;

std::shared_ptr<const rsd::Classifier> vertical_plane(double at = 0.5) {
  return std::make_shared<rsd::LinearClassifier>(std::vector<double>{1.0, 0.0}, -at);
}

TEST(Oracle, CountsEveryQueryAndEnforcesBudget) {
  rsd::DecisionOracle oracle(vertical_plane(), 3);
  EXPECT_EQ(oracle.query(Point{0.9, 0.1}), Label::kOne);
  EXPECT_EQ(oracle.query(Point{0.1, 0.1}), Label::kZero);
  oracle.query(Point{0.2, 0.1});
  EXPECT_EQ(oracle.queries(), 3u);
  EXPECT_THROW(oracle.query(Point{0.2, 0.1}), rsd::BudgetExhausted);
  EXPECT_EQ(oracle.queries(), 3u);
}

TEST(Oracle, SmoothedQueriesReplayExactly) {
  const rsd::SmoothingConfig cfg(0.2, 5, 0.001, 17);
  rsd::DecisionOracle a(vertical_plane(), cfg, 4), b(vertical_plane(), cfg, 4);
  a.set_logging(true);
  std::vector<Label> la, lb;
  for (int i = 0; i < 200; ++i) {
    const Point x{0.45 + 0.0005 * i, 0.5};
    la.push_back(a.query(x));
    lb.push_back(b.query(x));
  }
  EXPECT_EQ(la, lb);
  ASSERT_EQ(a.log().size(), 200u);
  EXPECT_EQ(a.log()[7].index, 7u);
  EXPECT_EQ(a.log()[7].label, la[7]);
  // near the plane the randomized oracle does not answer consistently
  EXPECT_GT(std::count(la.begin(), la.end(), Label::kOne), 20);
  EXPECT_GT(std::count(la.begin(), la.end(), Label::kZero), 20);
}

TEST(Oracle, DifferentStreamsDiffer) {
  const rsd::SmoothingConfig cfg(0.2, 5, 0.001, 17);
  rsd::DecisionOracle a(vertical_plane(), cfg, 1), b(vertical_plane(), cfg, 2);
  int diff = 0;
  for (int i = 0; i < 100; ++i) diff += a.query(Point{0.5, 0.5}) != b.query(Point{0.5, 0.5});
  EXPECT_GT(diff, 10);
}

TEST(BinarySearch, DeterministicOracleQueryAccounting) {
  rsd::DecisionOracle oracle(vertical_plane(0.3));
  const auto r = rsd::binary_search_boundary(oracle, Point{0.0, 0.5}, Point{1.0, 0.5}, 1e-3, 64);
  EXPECT_EQ(r.steps, 10u);
  EXPECT_EQ(oracle.queries(), r.steps + 2);
  EXPECT_LE(r.t_hi - r.t_lo, 1e-3);
  EXPECT_LE(r.t_lo, 0.3);
  EXPECT_GE(r.t_hi, 0.3);
  EXPECT_EQ(r.inside_label, Label::kZero);
  EXPECT_NEAR(r.boundary[0], 0.3, 1e-3);
}

TEST(BinarySearch, AlwaysAtLeastOneStep) {
  rsd::DecisionOracle oracle(vertical_plane(0.3));
  const auto r = rsd::binary_search_boundary(oracle, Point{0.0, 0.5}, Point{1.0, 0.5}, 10.0, 64);
  EXPECT_EQ(r.steps, 1u);
  const auto capped = rsd::binary_search_boundary(oracle, Point{0.0, 0.5}, Point{1.0, 0.5}, 1e-12, 5);
  EXPECT_EQ(capped.steps, 5u);
}

TEST(BinarySearch, PreconditionAndArgumentErrors) {
  rsd::DecisionOracle oracle(vertical_plane());
  EXPECT_THROW(rsd::binary_search_boundary(oracle, Point{0.1, 0.5}, Point{0.2, 0.5}, 1e-3, 64),
               rsd::SearchPreconditionError);
  EXPECT_THROW(rsd::binary_search_boundary(oracle, Point{0.1, 0.5}, Point{0.9, 0.5}, 0.0, 64),
               std::invalid_argument);
  EXPECT_THROW(rsd::binary_search_boundary(oracle, Point{0.1}, Point{0.9, 0.5}, 1e-3, 64),
               std::invalid_argument);
}

TEST(BinarySearchDistribution, SigmaZeroLandsOnTheBoundary) {
  const rsd::SmoothingConfig cfg(0.0, 1);
  const auto s = rsd::binary_search_distribution(vertical_plane(0.4), cfg, Point{0.1, 0.5},
                                                 Point{0.9, 0.5}, 20, 1e-4, 3);
  EXPECT_NEAR(s.crossing_t, 0.375, 1e-12);
  for (double o : s.offsets) EXPECT_LE(std::abs(o), 1e-4 * 0.8);
  EXPECT_EQ(s.stddev, 0.0);
}

TEST(BinarySearchDistribution, HistogramAccountsForEveryTrial) {
  const rsd::SmoothingConfig cfg(0.1, 10);
  const auto s = rsd::binary_search_distribution(vertical_plane(), cfg, Point{0.1, 0.5},
                                                 Point{0.9, 0.5}, 150, 1e-3, 8, 15);
  EXPECT_EQ(s.bin_edges.size(), 16u);
  EXPECT_EQ(std::accumulate(s.counts.begin(), s.counts.end(), std::uint64_t{0}),
            s.offsets.size());
  EXPECT_EQ(s.offsets.size() + s.failures, 150u);
  EXPECT_GT(s.stddev, 0.0);
  EXPECT_NEAR(s.segment_length, 0.8, 1e-15);
}

TEST(BinarySearchDistribution, MoreSamplesConcentrateTheOffsets) {
  double prev = INFINITY;
  for (std::uint64_t n : {1u, 25u, 625u}) {
    const rsd::SmoothingConfig cfg(0.1, n);
    const auto s = rsd::binary_search_distribution(vertical_plane(), cfg, Point{0.1, 0.5},
                                                   Point{0.9, 0.5}, 100, 1e-3, 5);
    EXPECT_LT(s.stddev, prev);
    prev = s.stddev;
  }
}

TEST(BinarySearchDistribution, RequiresAnalyticClassifierAndCrossing) {
  const rsd::SmoothingConfig cfg(0.1, 10);
  EXPECT_THROW(rsd::binary_search_distribution(vertical_plane(), cfg, Point{0.1, 0.5},
                                               Point{0.2, 0.5}, 10, 1e-3, 1),
               std::invalid_argument);
}

TEST(FlipProbability, SingleVoteAndLargeN) {
  const rsd::ClassProbabilities pi{rsd::Probability(0.3), rsd::Probability(0.7)};
  EXPECT_NEAR(rsd::smoothed_flip_probability(pi, 1, Label::kOne), 0.3, 1e-12);
  EXPECT_NEAR(rsd::smoothed_flip_probability(pi, 1, Label::kZero), 0.7, 1e-12);
  EXPECT_LT(rsd::smoothed_flip_probability(pi, 201, Label::kOne), 1e-6);
}

TEST(DirectionProfile, AgreesWithExactFlipProbability) {
  const auto f = vertical_plane();
  const rsd::SmoothingConfig cfg(0.1, 11);
  const std::vector<double> ts{0.0, 0.1, 0.2, 0.3, 0.4};
  const auto prof =
      rsd::direction_profile(*f, cfg, Point{0.3, 0.5}, Point{1.0, 0.0}, ts, 400, 21);
  ASSERT_EQ(prof.size(), ts.size());
  for (const auto& p : prof) {
    ASSERT_TRUE(p.exact_flip);
    const double q = *p.exact_flip;
    EXPECT_NEAR(p.flip_probability, q, 4.0 * std::sqrt(q * (1 - q) / 400) + 1e-9) << p.t;
  }
  EXPECT_LT(prof.front().flip_probability, 0.1);
  EXPECT_GT(prof.back().flip_probability, 0.9);
}

TEST(SliceMap, OneQueryPerCellAndGeometry) {
  rsd::DecisionOracle oracle(vertical_plane());
  const auto m = rsd::slice_map(oracle, Point{0.5, 0.5}, Point{2.0, 0.0}, Point{1.0, 1.0}, 0.25, 9);
  EXPECT_EQ(oracle.queries(), 81u);
  EXPECT_NEAR(rsd::dot(m.dir1, m.dir2), 0.0, 1e-15);
  EXPECT_NEAR(rsd::l2_norm(m.dir2), 1.0, 1e-15);
  EXPECT_NEAR(m.coord(0), -0.25, 1e-15);
  EXPECT_NEAR(m.coord(8), 0.25, 1e-15);
  // dir1 is the plane normal: left half class 0, right half class 1
  for (std::size_t j = 0; j < 9; ++j) {
    EXPECT_EQ(m.at(0, j), Label::kZero);
    EXPECT_EQ(m.at(8, j), Label::kOne);
  }
  EXPECT_NEAR(m.fraction_one(), 4.0 / 9.0, 1e-12);
  std::ostringstream csv;
  rsd::write_slice_csv(m, csv);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "u,v,label");
  EXPECT_NE(rsd::slice_svg(m).find("<svg"), std::string::npos);
  EXPECT_THROW(rsd::slice_map(oracle, Point{0.5, 0.5}, Point{1.0, 0.0}, Point{2.0, 0.0}, 0.25, 9),
               std::invalid_argument);
}

TEST(EstimateNormal, PointsTowardClassOne) {
  rsd::DecisionOracle oracle(std::make_shared<rsd::LinearClassifier>(std::vector<double>{1.0, 1.0},
                                                                     -1.0));
  const auto est = rsd::estimate_normal(oracle, Point{0.5, 0.5}, 400, 0.05, 3);
  EXPECT_EQ(est.probes, 400u);
  EXPECT_FALSE(est.degenerate);
  EXPECT_NEAR(est.normal[0], std::sqrt(0.5), 0.1);
  EXPECT_NEAR(est.normal[1], std::sqrt(0.5), 0.1);
  EXPECT_NEAR(est.positive_fraction, 0.5, 0.1);
  EXPECT_NEAR(est.flip_fraction, std::min(est.positive_fraction, 1 - est.positive_fraction), 1e-15);
}

TEST(EstimateNormal, DegenerateFarFromBoundary) {
  rsd::DecisionOracle oracle(vertical_plane());
  const auto est = rsd::estimate_normal(oracle, Point{0.95, 0.5}, 50, 0.01, 3);
  EXPECT_TRUE(est.degenerate);
  EXPECT_EQ(rsd::l2_norm(est.normal), 0.0);
}

}  // namespace

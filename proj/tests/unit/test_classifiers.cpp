#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rsd/classifiers.hpp"

namespace {

using rsd::Label;
using rsd::Point;

TEST(Geometry, NormsAndDistances) {
  const Point a{3, 4}, b{0, 0};
  EXPECT_DOUBLE_EQ(rsd::l2_norm(a), 5.0);
  EXPECT_DOUBLE_EQ(rsd::l2_distance(a, b), 5.0);
  EXPECT_DOUBLE_EQ(rsd::dot(a, Point{1, 1}), 7.0);
}

TEST(LinearClassifier, DecisionMarginAndNormal) {
  const rsd::LinearClassifier f({2.0, 0.0}, -1.0);
  EXPECT_EQ(f.decide(Point{0.6, 0.3}), Label::kOne);
  EXPECT_EQ(f.decide(Point{0.4, 0.3}), Label::kZero);
  // exactly on the plane w.x + b = 0 is class 0
  EXPECT_EQ(f.decide(Point{0.5, 0.9}), Label::kZero);
  EXPECT_NEAR(f.signed_margin(Point{0.75, 0.1}), 0.25, 1e-15);
  EXPECT_NEAR(*f.distance_to_boundary(Point{0.2, 0.7}), 0.3, 1e-15);
  EXPECT_EQ(f.unit_normal(), (Point{1.0, 0.0}));
  const auto k = f.principal_curvatures(Point{0.1, 0.1});
  ASSERT_TRUE(k);
  EXPECT_EQ(*k, (std::vector<double>{0.0}));
  EXPECT_THROW(f.decide(Point{1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(rsd::LinearClassifier({0.0, 0.0}, 1.0), std::invalid_argument);
}

TEST(SphereClassifier, InsideIsClassOneWithSignedCurvature) {
  const rsd::SphereClassifier f({0.5, 0.5, 0.5}, 0.25);
  const Point inside{0.5, 0.6, 0.5}, outside{0.9, 0.5, 0.5};
  EXPECT_EQ(f.decide(inside), Label::kOne);
  EXPECT_EQ(f.decide(outside), Label::kZero);
  EXPECT_NEAR(*f.distance_to_boundary(inside), 0.15, 1e-15);
  EXPECT_NEAR(*f.distance_to_boundary(outside), 0.15, 1e-15);
  EXPECT_EQ(*f.principal_curvatures(inside), (std::vector<double>{-4.0, -4.0}));
  EXPECT_EQ(*f.principal_curvatures(outside), (std::vector<double>{4.0, 4.0}));
}

TEST(Datasets, StayInUnitCubeAndBalanced) {
  for (const char* gen : {"gaussian-blobs", "concentric-spheres", "two-moons-embedded"}) {
    rsd::DatasetSpec spec;
    spec.generator = gen;
    spec.dimension = 16;
    spec.size = 300;
    spec.noise = 0.3;
    const auto data = rsd::generate_dataset(spec, 3);
    ASSERT_EQ(data.size(), 300u);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      ASSERT_EQ(data.points[i].size(), 16u);
      for (double v : data.points[i]) {
        ASSERT_GE(v, 0.0) << gen;
        ASSERT_LE(v, 1.0) << gen;
      }
      ones += data.labels[i] == Label::kOne;
    }
    EXPECT_EQ(ones, 150u) << gen;
  }
}

TEST(Datasets, DeterministicPerSeed) {
  rsd::DatasetSpec spec;
  const auto a = rsd::generate_dataset(spec, 5), b = rsd::generate_dataset(spec, 5),
             c = rsd::generate_dataset(spec, 6);
  EXPECT_EQ(a.points, b.points);
  EXPECT_NE(a.points, c.points);
}

TEST(Datasets, RejectsBadSpecs) {
  rsd::DatasetSpec spec;
  spec.size = 201;
  EXPECT_THROW(rsd::generate_dataset(spec, 1), std::invalid_argument);
  spec.size = 200;
  spec.dimension = 1;
  EXPECT_THROW(rsd::generate_dataset(spec, 1), std::invalid_argument);
  spec.dimension = 2;
  spec.generator = "spirals";
  EXPECT_THROW(rsd::generate_dataset(spec, 1), std::invalid_argument);
}

TEST(Datasets, SplitSharesTheDraw) {
  rsd::DatasetSpec spec;
  spec.generator = "two-moons-embedded";
  spec.dimension = 8;
  const auto data = rsd::generate_dataset(spec, 9);
  const auto [head, tail] = rsd::split_dataset(data, 120);
  EXPECT_EQ(head.size(), 120u);
  EXPECT_EQ(tail.size(), 80u);
  EXPECT_EQ(tail.points.front(), data.points[120]);
  EXPECT_THROW(rsd::split_dataset(data, 0), std::invalid_argument);
  EXPECT_THROW(rsd::split_dataset(data, 200), std::invalid_argument);
}

TEST(Mlp, LearnsSeparableBlobs) {
  rsd::DatasetSpec spec;
  spec.dimension = 4;
  spec.size = 400;
  const auto data = rsd::generate_dataset(spec, 11);
  rsd::MlpTrainConfig cfg;
  cfg.hidden = 8;
  cfg.epochs = 100;
  const auto result = rsd::train_mlp(data, cfg);
  EXPECT_GT(result.train_accuracy, 0.97);
  EXPECT_NEAR(rsd::accuracy(result.model, data), result.train_accuracy, 1e-12);
  // no analytic oracle for a trained network
  EXPECT_FALSE(result.model.distance_to_boundary(data.points[0]));
}

TEST(Mlp, TrainingIsDeterministic) {
  rsd::DatasetSpec spec;
  const auto data = rsd::generate_dataset(spec, 2);
  rsd::MlpTrainConfig cfg;
  cfg.epochs = 20;
  const auto a = rsd::train_mlp(data, cfg), b = rsd::train_mlp(data, cfg);
  EXPECT_EQ(rsd::serialize_classifier(a.model), rsd::serialize_classifier(b.model));
}

TEST(Serialization, RoundTripsEveryKind) {
  rsd::DatasetSpec spec;
  const auto data = rsd::generate_dataset(spec, 4);
  rsd::MlpTrainConfig cfg;
  cfg.epochs = 5;
  const auto mlp = rsd::train_mlp(data, cfg).model;
  const rsd::LinearClassifier lin({0.3, -1.7}, 0.123456789012345);
  const rsd::SphereClassifier sph({0.1, 0.2}, 0.3);
  for (const rsd::Classifier* f : {static_cast<const rsd::Classifier*>(&mlp),
                                   static_cast<const rsd::Classifier*>(&lin),
                                   static_cast<const rsd::Classifier*>(&sph)}) {
    const std::string text = rsd::serialize_classifier(*f);
    const auto back = rsd::parse_classifier(text);
    EXPECT_EQ(back->kind(), f->kind());
    EXPECT_EQ(rsd::serialize_classifier(*back), text);
    for (const auto& x : data.points) ASSERT_EQ(back->decide(x), f->decide(x));
  }
  EXPECT_THROW(rsd::parse_classifier("{\"version\": 99}"), std::exception);
  EXPECT_THROW(rsd::parse_classifier("not json"), std::exception);
}

TEST(DatasetCsv, HeaderAndRows) {
  rsd::DatasetSpec spec;
  spec.size = 4;
  const auto data = rsd::generate_dataset(spec, 1);
  std::ostringstream out;
  rsd::write_dataset_csv(data, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x0,x1,label");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

}  // namespace

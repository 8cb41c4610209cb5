#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rsd {

enum class Label : std::uint8_t { kZero = 0, kOne = 1 };

constexpr Label other(Label y) { return y == Label::kZero ? Label::kOne : Label::kZero; }
constexpr int to_int(Label y) { return static_cast<int>(y); }
Label label_from_int(int v);

using Point = std::vector<double>;
using PointView = std::span<const double>;

double l2_norm(PointView v);
double l2_distance(PointView a, PointView b);
double dot(PointView a, PointView b);

// Deterministic binary decision function f: R^d -> {0, 1}. Analytic
// classifiers also expose the distance to their decision boundary and the
// signed principal curvatures of the boundary at the nearest point.
class Classifier {
 public:
  virtual ~Classifier() = default;

  std::size_t dimension() const { return dimension_; }

  // Throws std::invalid_argument on dimension mismatch.
  Label decide(PointView x) const;

  // Radius of an open ball around x on which decide is constant. nullopt
  // means the classifier has no analytic oracle.
  std::optional<double> distance_to_boundary(PointView x) const;

  // d - 1 signed principal curvatures (1/length) at the boundary point
  // nearest to x. Negative values mean the boundary bends around x, i.e. the
  // region holding x is locally convex and noise crosses the boundary more
  // often than for a flat boundary at the same distance.
  std::optional<std::vector<double>> principal_curvatures(PointView x) const;

  virtual std::string_view kind() const = 0;

 protected:
  explicit Classifier(std::size_t dimension);

  void check_dimension(PointView x) const;

  virtual Label decide_unchecked(PointView x) const = 0;
  virtual std::optional<double> distance_unchecked(PointView) const { return std::nullopt; }
  virtual std::optional<std::vector<double>> curvatures_unchecked(PointView) const {
    return std::nullopt;
  }

 private:
  std::size_t dimension_;
};

// Class 1 iff w.x + b > 0.
class LinearClassifier final : public Classifier {
 public:
  LinearClassifier(std::vector<double> weights, double bias);

  std::string_view kind() const override { return "linear"; }

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  // (w.x + b) / ||w||; positive on the class-1 side.
  double signed_margin(PointView x) const;
  Point unit_normal() const;

 private:
  Label decide_unchecked(PointView x) const override;
  std::optional<double> distance_unchecked(PointView x) const override;
  std::optional<std::vector<double>> curvatures_unchecked(PointView x) const override;

  std::vector<double> weights_;
  double bias_;
  double norm_;
};

// Class 1 iff ||x - center|| < radius. Curvatures are -1/radius for points
// inside the ball and +1/radius outside (see Classifier::principal_curvatures).
class SphereClassifier final : public Classifier {
 public:
  SphereClassifier(Point center, double radius);

  std::string_view kind() const override { return "sphere"; }

  const Point& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Label decide_unchecked(PointView x) const override;
  std::optional<double> distance_unchecked(PointView x) const override;
  std::optional<std::vector<double>> curvatures_unchecked(PointView x) const override;

  Point center_;
  double radius_;
};

struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;  // row-major, outputs x inputs
  std::vector<double> bias;
};

// d -> h -> h -> 2 with tanh hidden units; label is the argmax logit
// (ties go to class 0).
class MlpClassifier final : public Classifier {
 public:
  static constexpr std::size_t kMaxHidden = 256;

  MlpClassifier(std::size_t dimension, std::size_t hidden, std::vector<DenseLayer> layers);

  std::string_view kind() const override { return "mlp"; }

  std::size_t hidden() const { return hidden_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  std::array<double, 2> logits(PointView x) const;

 private:
  Label decide_unchecked(PointView x) const override;

  std::size_t hidden_;
  std::vector<DenseLayer> layers_;
};

struct DatasetSpec {
  std::string generator = "gaussian-blobs";  // gaussian-blobs | concentric-spheres | two-moons-embedded
  std::size_t size = 200;                    // even; half of each class
  std::size_t dimension = 2;
  double noise = 0.08;       // blob std / moon jitter
  double separation = 0.4;   // distance between blob centers
  double radius = 0.25;      // concentric-spheres label threshold
  double gap = 0.1;          // concentric-spheres relative empty shell
  double embed_noise = 0.02; // two-moons off-plane jitter
};

struct Dataset {
  DatasetSpec spec;
  std::uint64_t seed = 0;
  std::vector<Point> points;
  std::vector<Label> labels;

  std::size_t size() const { return points.size(); }
  std::size_t dimension() const { return spec.dimension; }
};

// Throws std::invalid_argument for an unknown generator, d < 2 or odd size.
Dataset generate_dataset(const DatasetSpec& spec, std::uint64_t seed);

// First `head` points and the remainder, as two datasets sharing the
// generator draw (and therefore any random embedding). Labels alternate, so an
// even head keeps both parts balanced.
std::pair<Dataset, Dataset> split_dataset(const Dataset& data, std::size_t head);

// Fraction of correct decisions; throws on an empty dataset.
double accuracy(const Classifier& classifier, const Dataset& data);

struct MlpTrainConfig {
  std::size_t hidden = 16;
  std::size_t epochs = 200;
  double learning_rate = 0.05;
  std::uint64_t seed = 1;
  double noise_augment_sigma = 0.0;
};

struct MlpTrainResult {
  MlpClassifier model;
  double train_accuracy;
  double final_loss;
};

class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(std::size_t epoch, const std::string& what)
      : std::runtime_error(what), epoch_(epoch) {}
  std::size_t epoch() const { return epoch_; }

 private:
  std::size_t epoch_;
};

MlpTrainResult train_mlp(const Dataset& data, const MlpTrainConfig& config);

// Versioned JSON document; numbers are stored as round-trippable decimal
// strings.
std::string serialize_classifier(const Classifier& classifier);
std::unique_ptr<Classifier> parse_classifier(std::string_view json_text);

// Header x0..x{d-1},label then one row per point.
void write_dataset_csv(const Dataset& data, std::ostream& out);

}  // namespace rsd

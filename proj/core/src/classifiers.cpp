#include "rsd/classifiers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rsd {

Label label_from_int(int v) {
  if (v == 0) return Label::kZero;
  if (v == 1) return Label::kOne;
  throw std::invalid_argument("label must be 0 or 1, got " + std::to_string(v));
}

double dot(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(PointView v) { return std::sqrt(dot(v, v)); }

double l2_distance(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return std::sqrt(s);
}

Classifier::Classifier(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw std::invalid_argument("classifier dimension must be >= 1");
}

void Classifier::check_dimension(PointView x) const {
  if (x.size() != dimension_) {
    throw std::invalid_argument("dimension mismatch: classifier expects " +
                                std::to_string(dimension_) + ", got " +
                                std::to_string(x.size()));
  }
}

Label Classifier::decide(PointView x) const {
  check_dimension(x);
  return decide_unchecked(x);
}

std::optional<double> Classifier::distance_to_boundary(PointView x) const {
  check_dimension(x);
  return distance_unchecked(x);
}

std::optional<std::vector<double>> Classifier::principal_curvatures(PointView x) const {
  check_dimension(x);
  return curvatures_unchecked(x);
}

// ---------------------------------------------------------------------------

LinearClassifier::LinearClassifier(std::vector<double> weights, double bias)
    : Classifier(weights.size()), weights_(std::move(weights)), bias_(bias) {
  norm_ = l2_norm(weights_);
  if (!(norm_ > 0.0) || !std::isfinite(norm_) || !std::isfinite(bias_)) {
    throw std::invalid_argument("LinearClassifier: weights must be finite with nonzero norm");
  }
}

double LinearClassifier::signed_margin(PointView x) const {
  check_dimension(x);
  return (dot(weights_, x) + bias_) / norm_;
}

Point LinearClassifier::unit_normal() const {
  Point n(weights_);
  for (double& v : n) v /= norm_;
  return n;
}

Label LinearClassifier::decide_unchecked(PointView x) const {
  return dot(weights_, x) + bias_ > 0.0 ? Label::kOne : Label::kZero;
}

std::optional<double> LinearClassifier::distance_unchecked(PointView x) const {
  return std::fabs(dot(weights_, x) + bias_) / norm_;
}

std::optional<std::vector<double>> LinearClassifier::curvatures_unchecked(PointView) const {
  return std::vector<double>(dimension() - 1, 0.0);
}

// ---------------------------------------------------------------------------

SphereClassifier::SphereClassifier(Point center, double radius)
    : Classifier(center.size()), center_(std::move(center)), radius_(radius) {
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw std::invalid_argument("SphereClassifier: radius must be positive");
  }
}

Label SphereClassifier::decide_unchecked(PointView x) const {
  return l2_distance(x, center_) < radius_ ? Label::kOne : Label::kZero;
}

std::optional<double> SphereClassifier::distance_unchecked(PointView x) const {
  return std::fabs(l2_distance(x, center_) - radius_);
}

std::optional<std::vector<double>> SphereClassifier::curvatures_unchecked(PointView x) const {
  const double sign = l2_distance(x, center_) < radius_ ? -1.0 : 1.0;
  return std::vector<double>(dimension() - 1, sign / radius_);
}

// ---------------------------------------------------------------------------

MlpClassifier::MlpClassifier(std::size_t dimension, std::size_t hidden,
                             std::vector<DenseLayer> layers)
    : Classifier(dimension), hidden_(hidden), layers_(std::move(layers)) {
  if (hidden_ == 0 || hidden_ > kMaxHidden) {
    throw std::invalid_argument("MlpClassifier: hidden width must be in [1, 256]");
  }
  const std::size_t shapes[3][2] = {{dimension, hidden}, {hidden, hidden}, {hidden, 2}};
  if (layers_.size() != 3) throw std::invalid_argument("MlpClassifier: expected 3 layers");
  for (std::size_t l = 0; l < 3; ++l) {
    const DenseLayer& layer = layers_[l];
    if (layer.inputs != shapes[l][0] || layer.outputs != shapes[l][1] ||
        layer.weights.size() != layer.inputs * layer.outputs ||
        layer.bias.size() != layer.outputs) {
      throw std::invalid_argument("MlpClassifier: layer " + std::to_string(l) +
                                  " has inconsistent shape");
    }
  }
}

std::array<double, 2> MlpClassifier::logits(PointView x) const {
  check_dimension(x);
  std::array<double, kMaxHidden> h1;
  std::array<double, kMaxHidden> h2;

  const DenseLayer& l0 = layers_[0];
  for (std::size_t o = 0; o < l0.outputs; ++o) {
    const double* row = &l0.weights[o * l0.inputs];
    double s = l0.bias[o];
    for (std::size_t i = 0; i < l0.inputs; ++i) s += row[i] * x[i];
    h1[o] = std::tanh(s);
  }
  const DenseLayer& l1 = layers_[1];
  for (std::size_t o = 0; o < l1.outputs; ++o) {
    const double* row = &l1.weights[o * l1.inputs];
    double s = l1.bias[o];
    for (std::size_t i = 0; i < l1.inputs; ++i) s += row[i] * h1[i];
    h2[o] = std::tanh(s);
  }
  const DenseLayer& l2 = layers_[2];
  std::array<double, 2> out{};
  for (std::size_t o = 0; o < 2; ++o) {
    const double* row = &l2.weights[o * l2.inputs];
    double s = l2.bias[o];
    for (std::size_t i = 0; i < l2.inputs; ++i) s += row[i] * h2[i];
    out[o] = s;
  }
  return out;
}

Label MlpClassifier::decide_unchecked(PointView x) const {
  const auto z = logits(x);
  return z[1] > z[0] ? Label::kOne : Label::kZero;
}

}  // namespace rsd

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rsd/classifiers.hpp"
#include "rsd/random.hpp"

namespace rsd {

namespace {

DenseLayer init_layer(std::size_t inputs, std::size_t outputs, CounterRng& rng) {
  DenseLayer layer;
  layer.inputs = inputs;
  layer.outputs = outputs;
  layer.weights.resize(inputs * outputs);
  layer.bias.assign(outputs, 0.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(inputs));
  for (double& w : layer.weights) w = scale * rng.normal();
  return layer;
}

struct Activations {
  std::vector<double> h1, h2;
  std::array<double, 2> logits{};
};

void forward(const std::vector<DenseLayer>& layers, PointView x, Activations& act) {
  const DenseLayer& l0 = layers[0];
  for (std::size_t o = 0; o < l0.outputs; ++o) {
    double s = l0.bias[o];
    for (std::size_t i = 0; i < l0.inputs; ++i) s += l0.weights[o * l0.inputs + i] * x[i];
    act.h1[o] = std::tanh(s);
  }
  const DenseLayer& l1 = layers[1];
  for (std::size_t o = 0; o < l1.outputs; ++o) {
    double s = l1.bias[o];
    for (std::size_t i = 0; i < l1.inputs; ++i) s += l1.weights[o * l1.inputs + i] * act.h1[i];
    act.h2[o] = std::tanh(s);
  }
  const DenseLayer& l2 = layers[2];
  for (std::size_t o = 0; o < 2; ++o) {
    double s = l2.bias[o];
    for (std::size_t i = 0; i < l2.inputs; ++i) s += l2.weights[o * l2.inputs + i] * act.h2[i];
    act.logits[o] = s;
  }
}

// One SGD step on softmax cross-entropy; returns the sample loss.
double sgd_step(std::vector<DenseLayer>& layers, PointView x, Label y, double lr,
                Activations& act, std::vector<double>& g1, std::vector<double>& g2) {
  forward(layers, x, act);
  const double zmax = std::max(act.logits[0], act.logits[1]);
  const double e0 = std::exp(act.logits[0] - zmax);
  const double e1 = std::exp(act.logits[1] - zmax);
  const double p1 = e1 / (e0 + e1);
  const double target = y == Label::kOne ? 1.0 : 0.0;
  const double loss = -std::log(std::max(target > 0.5 ? p1 : 1.0 - p1, 1e-300));
  const std::array<double, 2> dz = {(1.0 - p1) - (1.0 - target), p1 - target};

  DenseLayer& l2 = layers[2];
  DenseLayer& l1 = layers[1];
  DenseLayer& l0 = layers[0];
  const std::size_t h = l1.outputs;

  // Back through the output layer, then each tanh layer.
  for (std::size_t i = 0; i < h; ++i) {
    const double upstream = dz[0] * l2.weights[i] + dz[1] * l2.weights[h + i];
    g2[i] = upstream * (1.0 - act.h2[i] * act.h2[i]);
  }
  for (std::size_t o = 0; o < 2; ++o) {
    for (std::size_t i = 0; i < h; ++i) l2.weights[o * h + i] -= lr * dz[o] * act.h2[i];
    l2.bias[o] -= lr * dz[o];
  }
  for (std::size_t i = 0; i < h; ++i) {
    double upstream = 0.0;
    for (std::size_t o = 0; o < h; ++o) upstream += g2[o] * l1.weights[o * h + i];
    g1[i] = upstream * (1.0 - act.h1[i] * act.h1[i]);
  }
  for (std::size_t o = 0; o < h; ++o) {
    for (std::size_t i = 0; i < h; ++i) l1.weights[o * h + i] -= lr * g2[o] * act.h1[i];
    l1.bias[o] -= lr * g2[o];
  }
  for (std::size_t o = 0; o < h; ++o) {
    for (std::size_t i = 0; i < l0.inputs; ++i) l0.weights[o * l0.inputs + i] -= lr * g1[o] * x[i];
    l0.bias[o] -= lr * g1[o];
  }
  return loss;
}

}  // namespace

MlpTrainResult train_mlp(const Dataset& data, const MlpTrainConfig& config) {
  if (data.size() == 0) throw std::invalid_argument("train_mlp: empty dataset");
  if (config.noise_augment_sigma < 0.0) {
    throw std::invalid_argument("train_mlp: noise_augment_sigma must be >= 0");
  }
  if (config.hidden == 0 || config.hidden > MlpClassifier::kMaxHidden) {
    throw std::invalid_argument("train_mlp: hidden width must be in [1, 256]");
  }
  const std::size_t d = data.dimension();
  const std::size_t h = config.hidden;

  CounterRng init_rng(config.seed, 0x1417);
  std::vector<DenseLayer> layers;
  layers.push_back(init_layer(d, h, init_rng));
  layers.push_back(init_layer(h, h, init_rng));
  layers.push_back(init_layer(h, 2, init_rng));

  CounterRng shuffle_rng(config.seed, 0x5A0F);
  CounterRng noise_rng(config.seed, 0xA06);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  Activations act;
  act.h1.resize(h);
  act.h2.resize(h);
  std::vector<double> g1(h), g2(h);
  Point noisy(d);
  double epoch_loss = 0.0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with the seeded stream
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      std::swap(order[i], order[shuffle_rng.below(i + 1)]);
    }
    epoch_loss = 0.0;
    for (std::size_t idx : order) {
      const Point& x = data.points[idx];
      PointView input = x;
      if (config.noise_augment_sigma > 0.0) {
        for (std::size_t j = 0; j < d; ++j) {
          noisy[j] = x[j] + config.noise_augment_sigma * noise_rng.normal();
        }
        input = noisy;
      }
      epoch_loss += sgd_step(layers, input, data.labels[idx], config.learning_rate, act, g1, g2);
    }
    epoch_loss /= static_cast<double>(data.size());
    if (!std::isfinite(epoch_loss)) {
      throw TrainingDiverged(epoch, "train_mlp: non-finite loss at epoch " + std::to_string(epoch));
    }
  }

  MlpClassifier model(d, h, std::move(layers));
  const double train_acc = accuracy(model, data);
  return {std::move(model), train_acc, epoch_loss};
}

}  // namespace rsd

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "rsd/classifiers.hpp"
#include "rsd/random.hpp"

namespace rsd {

namespace {

void clip_unit_box(Point& x) {
  for (double& v : x) v = std::clamp(v, 0.0, 1.0);
}

Point random_unit_vector(CounterRng& rng, std::size_t d) {
  Point u(d);
  double norm = 0.0;
  do {
    for (double& v : u) v = rng.normal();
    norm = l2_norm(u);
  } while (norm < 1e-12);
  for (double& v : u) v /= norm;
  return u;
}

void gaussian_blobs(const DatasetSpec& spec, CounterRng& rng, Dataset& out) {
  const std::size_t d = spec.dimension;
  const double offset = 0.5 * spec.separation / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < spec.size; ++i) {
    const Label y = i % 2 == 0 ? Label::kZero : Label::kOne;
    const double shift = y == Label::kOne ? offset : -offset;
    Point x(d);
    for (double& v : x) v = 0.5 + shift + spec.noise * rng.normal();
    clip_unit_box(x);
    out.points.push_back(std::move(x));
    out.labels.push_back(y);
  }
}

// Label 1 iff ||x - 0.5|| < radius. Radii are kept at most 0.5 so no point
// needs clipping and the labelling rule holds exactly.
void concentric_spheres(const DatasetSpec& spec, CounterRng& rng, Dataset& out) {
  const std::size_t d = spec.dimension;
  const double inner_max = spec.radius * (1.0 - spec.gap);
  const double outer_min = spec.radius * (1.0 + spec.gap);
  if (!(inner_max > 0.0) || outer_min >= 0.5) {
    throw std::invalid_argument("concentric-spheres: need 0 < radius*(1-gap) and radius*(1+gap) < 0.5");
  }
  for (std::size_t i = 0; i < spec.size; ++i) {
    const Label y = i % 2 == 0 ? Label::kZero : Label::kOne;
    const Point u = random_unit_vector(rng, d);
    const double r = y == Label::kOne
                         ? inner_max * std::pow(rng.uniform(), 1.0 / static_cast<double>(d))
                         : rng.uniform(outer_min, 0.5);
    Point x(d);
    for (std::size_t j = 0; j < d; ++j) x[j] = 0.5 + r * u[j];
    out.points.push_back(std::move(x));
    out.labels.push_back(y);
  }
}

// Two interleaved half circles drawn in a random 2-plane through the cube
// center, with small off-plane jitter.
void two_moons_embedded(const DatasetSpec& spec, CounterRng& rng, Dataset& out) {
  const std::size_t d = spec.dimension;
  Point e1 = random_unit_vector(rng, d);
  Point e2 = random_unit_vector(rng, d);
  const double proj = dot(e1, e2);
  for (std::size_t j = 0; j < d; ++j) e2[j] -= proj * e1[j];
  const double n2 = l2_norm(e2);
  for (double& v : e2) v /= n2;

  for (std::size_t i = 0; i < spec.size; ++i) {
    const Label y = i % 2 == 0 ? Label::kZero : Label::kOne;
    const double t = std::numbers::pi * rng.uniform(0.0, 1.0);
    double mx, my;
    if (y == Label::kZero) {
      mx = std::cos(t);
      my = std::sin(t);
    } else {
      mx = 1.0 - std::cos(t);
      my = 0.5 - std::sin(t);
    }
    mx += spec.noise * rng.normal();
    my += spec.noise * rng.normal();
    // moons span roughly [-1, 2] x [-0.5, 1]; map into [-0.5, 0.5]^2
    const double a = (mx - 0.5) / 3.2;
    const double b = (my - 0.25) / 3.2;
    Point x(d);
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = 0.5 + a * e1[j] + b * e2[j] + spec.embed_noise * rng.normal();
    }
    clip_unit_box(x);
    out.points.push_back(std::move(x));
    out.labels.push_back(y);
  }
}

}  // namespace

Dataset generate_dataset(const DatasetSpec& spec, std::uint64_t seed) {
  if (spec.dimension < 2) throw std::invalid_argument("dataset dimension must be >= 2");
  if (spec.size == 0 || spec.size % 2 != 0) {
    throw std::invalid_argument("dataset size must be a positive even number");
  }
  Dataset data;
  data.spec = spec;
  data.seed = seed;
  data.points.reserve(spec.size);
  data.labels.reserve(spec.size);
  CounterRng rng(seed, 0xDA7A);
  if (spec.generator == "gaussian-blobs") {
    gaussian_blobs(spec, rng, data);
  } else if (spec.generator == "concentric-spheres") {
    concentric_spheres(spec, rng, data);
  } else if (spec.generator == "two-moons-embedded") {
    two_moons_embedded(spec, rng, data);
  } else {
    throw std::invalid_argument("unknown dataset generator '" + spec.generator + "'");
  }
  return data;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, std::size_t head) {
  if (head == 0 || head >= data.size()) {
    throw std::invalid_argument("split_dataset: head must be in [1, size)");
  }
  Dataset first, second;
  first.spec = second.spec = data.spec;
  first.seed = second.seed = data.seed;
  first.spec.size = head;
  second.spec.size = data.size() - head;
  const auto mid = static_cast<std::ptrdiff_t>(head);
  first.points.assign(data.points.begin(), data.points.begin() + mid);
  first.labels.assign(data.labels.begin(), data.labels.begin() + mid);
  second.points.assign(data.points.begin() + mid, data.points.end());
  second.labels.assign(data.labels.begin() + mid, data.labels.end());
  return {std::move(first), std::move(second)};
}

double accuracy(const Classifier& classifier, const Dataset& data) {
  if (data.size() == 0) throw std::invalid_argument("accuracy: empty dataset");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (classifier.decide(data.points[i]) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  for (std::size_t j = 0; j < data.dimension(); ++j) out << 'x' << j << ',';
  out << "label\n";
  char buf[32];
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.points[i]) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << ',';
    }
    out << to_int(data.labels[i]) << '\n';
  }
}

}  // namespace rsd

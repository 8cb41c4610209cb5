#include <cstdio>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "rsd/classifiers.hpp"

namespace rsd {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;
constexpr const char* kFormatName = "rsd.classifier";

std::string exact_decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json decimal_array(const std::vector<double>& values) {
  json arr = json::array();
  for (double v : values) arr.push_back(exact_decimal(v));
  return arr;
}

double parse_decimal(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad decimal string '" + s + "'");
  return v;
}

std::vector<double> parse_decimal_array(const json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(parse_decimal(e));
  return out;
}

}  // namespace

std::string serialize_classifier(const Classifier& classifier) {
  json doc;
  doc["format"] = kFormatName;
  doc["version"] = kFormatVersion;
  doc["kind"] = std::string(classifier.kind());
  doc["dimension"] = classifier.dimension();

  if (const auto* lin = dynamic_cast<const LinearClassifier*>(&classifier)) {
    doc["weights"] = decimal_array(lin->weights());
    doc["bias"] = exact_decimal(lin->bias());
  } else if (const auto* sph = dynamic_cast<const SphereClassifier*>(&classifier)) {
    doc["center"] = decimal_array(sph->center());
    doc["radius"] = exact_decimal(sph->radius());
  } else if (const auto* mlp = dynamic_cast<const MlpClassifier*>(&classifier)) {
    doc["hidden"] = mlp->hidden();
    doc["activation"] = "tanh";
    json layers = json::array();
    for (const DenseLayer& layer : mlp->layers()) {
      layers.push_back({{"inputs", layer.inputs},
                        {"outputs", layer.outputs},
                        {"weights", decimal_array(layer.weights)},
                        {"bias", decimal_array(layer.bias)}});
    }
    doc["layers"] = std::move(layers);
  } else {
    throw std::invalid_argument("serialize_classifier: unsupported kind");
  }
  return doc.dump(1);
}

std::unique_ptr<Classifier> parse_classifier(std::string_view json_text) {
  const json doc = json::parse(json_text);
  if (doc.value("format", "") != kFormatName) {
    throw std::invalid_argument("parse_classifier: not an rsd.classifier document");
  }
  const int version = doc.at("version").get<int>();
  if (version != kFormatVersion) {
    throw std::invalid_argument("parse_classifier: unsupported version " +
                                std::to_string(version));
  }
  const std::string kind = doc.at("kind").get<std::string>();
  const auto dimension = doc.at("dimension").get<std::size_t>();

  std::unique_ptr<Classifier> out;
  if (kind == "linear") {
    out = std::make_unique<LinearClassifier>(parse_decimal_array(doc.at("weights")),
                                             parse_decimal(doc.at("bias")));
  } else if (kind == "sphere") {
    out = std::make_unique<SphereClassifier>(parse_decimal_array(doc.at("center")),
                                             parse_decimal(doc.at("radius")));
  } else if (kind == "mlp") {
    std::vector<DenseLayer> layers;
    for (const auto& l : doc.at("layers")) {
      DenseLayer layer;
      layer.inputs = l.at("inputs").get<std::size_t>();
      layer.outputs = l.at("outputs").get<std::size_t>();
      layer.weights = parse_decimal_array(l.at("weights"));
      layer.bias = parse_decimal_array(l.at("bias"));
      layers.push_back(std::move(layer));
    }
    out = std::make_unique<MlpClassifier>(dimension, doc.at("hidden").get<std::size_t>(),
                                          std::move(layers));
  } else {
    throw std::invalid_argument("parse_classifier: unknown kind '" + kind + "'");
  }
  if (out->dimension() != dimension) {
    throw std::invalid_argument("parse_classifier: dimension field disagrees with weights");
  }
  return out;
}

}  // namespace rsd

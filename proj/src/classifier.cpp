// SPDX-License-Identifier: Apache-2.0
#include "ida/classifier.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include <json.hpp>

#include "ida/errors.hpp"

namespace ida {

PixelClassifier::PixelClassifier(int num_classes, std::size_t feature_dim)
    : num_classes_(num_classes),
      feature_dim_(feature_dim),
      params_(static_cast<std::size_t>(num_classes) * (feature_dim + 1), 0.0) {
  if (num_classes < 1) throw ConfigError("PixelClassifier: num_classes must be >= 1");
  if (feature_dim < 1) throw ConfigError("PixelClassifier: feature_dim must be >= 1");
}

PixelClassifier PixelClassifier::random(int num_classes, std::uint64_t seed, double scale, std::size_t feature_dim) {
  PixelClassifier model(num_classes, feature_dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  const std::size_t nw = static_cast<std::size_t>(num_classes) * feature_dim;
  for (std::size_t i = 0; i < nw; ++i) model.params_[i] = normal(rng);
  return model;
}

LinearView PixelClassifier::view() const {
  const std::size_t nw = static_cast<std::size_t>(num_classes_) * feature_dim_;
  const std::span<const double> all = params_;
  return {all.first(nw), all.subspan(nw), num_classes_, feature_dim_};
}

ProbMap PixelClassifier::predict(const FeatureMap& features) const { return kernels::predict(view(), features); }

ProbMap PixelClassifier::predict(const ImageGrid& image) const {
  return predict(kernels::extract_features(image));
}

LossGrad cross_entropy_loss(const PixelClassifier& model, const FeatureMap& features, const LabelMap& labels) {
  return kernels::cross_entropy(model.view(), features, labels);
}

LossGrad source_loss(const PixelClassifier& model, const ImageGrid& image, const LabelMap& labels) {
  return cross_entropy_loss(model, kernels::extract_features(image), labels);
}

double mean_cross_entropy(const ProbMap& probs, const LabelMap& labels) {
  if (probs.shape() != labels.shape() || probs.num_classes() != labels.num_classes()) {
    throw DimensionError("mean_cross_entropy: shape or class count mismatch");
  }
  const std::size_t n = labels.shape().pixels();
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t p = 0; p < n; ++p) sum -= std::log(probs.prob(p, labels[p]));
  return sum / static_cast<double>(n);
}

void gradient_step(PixelClassifier& model, std::span<const double> grad, double learning_rate, double weight) {
  auto params = model.params();
  if (grad.size() != params.size()) throw DimensionError("gradient_step: gradient length mismatch");
  const double scale = learning_rate * weight;
  for (std::size_t i = 0; i < params.size(); ++i) params[i] -= scale * grad[i];
}

LabelMap pseudo_label(const PixelClassifier& teacher, const ImageGrid& image) {
  return argmax_labels(teacher.predict(image));
}

TeacherState::TeacherState(const PixelClassifier& student, double alpha) : teacher_(student), alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("TeacherState: alpha must lie in [0, 1]");
}

void TeacherState::update(const PixelClassifier& student) {
  auto t = teacher_.params();
  const auto s = student.params();
  if (t.size() != s.size()) throw DimensionError("TeacherState::update: parameter count mismatch");
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = alpha_ * t[i] + (1.0 - alpha_) * s[i];
}

void write_model(const std::filesystem::path& path, const PixelClassifier& model) {
  static_assert(std::endian::native == std::endian::little, "model files are little-endian");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  const nlohmann::json header = {{"feature_dim", model.feature_dim()},
                                 {"num_classes", model.num_classes()},
                                 {"dtype", "float64-le"},
                                 {"layout", "weights[num_classes][feature_dim] then bias[num_classes]"}};
  out << header.dump() << '\n';
  const auto params = model.params();
  out.write(reinterpret_cast<const char*>(params.data()), static_cast<std::streamsize>(params.size_bytes()));
}

PixelClassifier read_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": bad model header: " + e.what());
  }
  PixelClassifier model(header.at("num_classes").get<int>(), header.at("feature_dim").get<std::size_t>());
  auto params = model.params();
  in.read(reinterpret_cast<char*>(params.data()), static_cast<std::streamsize>(params.size_bytes()));
  if (static_cast<std::size_t>(in.gcount()) != params.size_bytes()) throw DataError(path.string() + ": truncated weights");
  return model;
}

}  // namespace ida

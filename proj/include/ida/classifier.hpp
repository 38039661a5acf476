// SPDX-License-Identifier: Apache-2.0
//
// Linear softmax pixel classifier over engineered per-pixel features, its
// cross-entropy objective, and the EMA teacher.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ida/grid.hpp"
#include "ida/kernels.hpp"

namespace ida {

class PixelClassifier {
 public:
  PixelClassifier() = default;
  /// All parameters zero.
  PixelClassifier(int num_classes, std::size_t feature_dim = kFeatureDim);
  /// Weights ~ N(0, scale^2), bias zero.
  static PixelClassifier random(int num_classes, std::uint64_t seed, double scale = 0.01,
                                std::size_t feature_dim = kFeatureDim);

  int num_classes() const { return num_classes_; }
  std::size_t feature_dim() const { return feature_dim_; }

  /// Flat parameters: C x feature_dim weights (row-major) followed by C biases.
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  LinearView view() const;

  ProbMap predict(const FeatureMap& features) const;
  ProbMap predict(const ImageGrid& image) const;

  friend bool operator==(const PixelClassifier&, const PixelClassifier&) = default;

 private:
  int num_classes_ = 0;
  std::size_t feature_dim_ = 0;
  std::vector<double> params_;
};

/// Mean per-pixel cross-entropy with gradient aligned to params().
LossGrad cross_entropy_loss(const PixelClassifier& model, const FeatureMap& features, const LabelMap& labels);

/// Supervised source objective on one labelled image.
LossGrad source_loss(const PixelClassifier& model, const ImageGrid& image, const LabelMap& labels);

/// Mean -log p[label] of an explicit probability map. Zero probability on the
/// true class yields +inf.
double mean_cross_entropy(const ProbMap& probs, const LabelMap& labels);

/// params -= learning_rate * weight * grad
void gradient_step(PixelClassifier& model, std::span<const double> grad, double learning_rate, double weight = 1.0);

/// Argmax of the teacher's prediction; never touches gradients.
LabelMap pseudo_label(const PixelClassifier& teacher, const ImageGrid& image);

/// EMA copy of the student: teacher = alpha * teacher + (1 - alpha) * student.
class TeacherState {
 public:
  /// Starts as an exact copy of `student`. Throws ConfigError unless alpha in [0, 1].
  TeacherState(const PixelClassifier& student, double alpha);

  void update(const PixelClassifier& student);

  const PixelClassifier& model() const { return teacher_; }
  double alpha() const { return alpha_; }

 private:
  PixelClassifier teacher_;
  double alpha_;
};

/// One-line JSON header {"feature_dim":F,"num_classes":C,...} terminated by
/// '\n', followed by the flat parameters as little-endian float64.
void write_model(const std::filesystem::path& path, const PixelClassifier& model);
PixelClassifier read_model(const std::filesystem::path& path);

}  // namespace ida

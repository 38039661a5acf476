// SPDX-License-Identifier: Apache-2.0
//
// Per-pixel hot loops. Each kernel exists twice: the OpenMP version in
// `ida::kernels` used by the library, and a straightforward serial version in
// `ida::kernels::reference` kept for tests and benchmarks.
//
// Reductions in the OpenMP versions accumulate fixed blocks of kBlockPixels
// pixels and combine the block partials in block order, so the result does
// not depend on the number of threads.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ida/grid.hpp"

namespace ida {

/// Per-pixel features: RGB, normalised column/row coordinates in [-1, 1] and
/// the 3x3 neighbourhood mean of each channel (in-bounds neighbours only).
inline constexpr std::size_t kFeatureDim = 8;

struct FeatureMap {
  Shape shape;
  std::size_t dim = kFeatureDim;
  std::vector<double> data;  // pixel-major, dim values per pixel

  std::span<const double> pixel(std::size_t p) const { return {data.data() + p * dim, dim}; }
};

/// Linear map view: `weights` is C x dim row-major, `bias` has C entries.
struct LinearView {
  std::span<const double> weights;
  std::span<const double> bias;
  int num_classes = 0;
  std::size_t dim = 0;
};

/// Mean cross-entropy of softmax(W f + b) against `labels`, with its gradient
/// laid out as [C x dim weights][C bias].
struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

/// Per-class sum of max-confidence and member count.
struct ConfidenceSums {
  std::vector<double> sum;
  std::vector<std::size_t> count;
};

namespace kernels {

inline constexpr std::size_t kBlockPixels = 1024;

FeatureMap extract_features(const ImageGrid& image);
ProbMap predict(const LinearView& model, const FeatureMap& features);
LossGrad cross_entropy(const LinearView& model, const FeatureMap& features, const LabelMap& labels);
ConfidenceSums confidence_by_class(const ProbMap& probs, const LabelMap& membership);
/// Row = truth, column = prediction, C x C row-major.
std::vector<std::uint64_t> confusion(const LabelMap& truth, const LabelMap& pred);

namespace reference {

FeatureMap extract_features(const ImageGrid& image);
ProbMap predict(const LinearView& model, const FeatureMap& features);
LossGrad cross_entropy(const LinearView& model, const FeatureMap& features, const LabelMap& labels);
ConfidenceSums confidence_by_class(const ProbMap& probs, const LabelMap& membership);
std::vector<std::uint64_t> confusion(const LabelMap& truth, const LabelMap& pred);

}  // namespace reference

/// Number of OpenMP threads the kernels will use (1 without OpenMP).
int max_threads();

}  // namespace kernels
}  // namespace ida

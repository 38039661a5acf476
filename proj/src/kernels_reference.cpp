// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "kernels_detail.hpp"

namespace ida::kernels::reference {

FeatureMap extract_features(const ImageGrid& image) {
  if (image.channels() != 3) throw DimensionError("extract_features: expected 3 channels");
  FeatureMap out{image.shape(), kFeatureDim, std::vector<double>(image.shape().pixels() * kFeatureDim)};
  for (std::size_t r = 0; r < image.height(); ++r) {
    for (std::size_t c = 0; c < image.width(); ++c) {
      detail::pixel_features(image, r, c, out.data.data() + (r * image.width() + c) * kFeatureDim);
    }
  }
  return out;
}

ProbMap predict(const LinearView& model, const FeatureMap& features) {
  detail::check_model(model, features);
  const auto nc = static_cast<std::size_t>(model.num_classes);
  std::vector<double> probs(features.shape.pixels() * nc);
  for (std::size_t p = 0; p < features.shape.pixels(); ++p) {
    double* row = probs.data() + p * nc;
    detail::pixel_logits(model, features.pixel(p).data(), row);
    detail::pixel_softmax(row, model.num_classes);
  }
  return ProbMap::unchecked(features.shape, model.num_classes, std::move(probs));
}

LossGrad cross_entropy(const LinearView& model, const FeatureMap& features, const LabelMap& labels) {
  detail::check_model(model, features);
  detail::check_same_shape(features.shape, labels.shape(), "cross_entropy");
  if (labels.num_classes() != model.num_classes) throw DimensionError("cross_entropy: class count mismatch");
  const auto nc = static_cast<std::size_t>(model.num_classes);
  const std::size_t n = features.shape.pixels();
  LossGrad out{0.0, std::vector<double>(nc * model.dim + nc, 0.0)};
  std::vector<double> scratch(nc);
  for (std::size_t p = 0; p < n; ++p) {
    detail::pixel_cross_entropy(model, features.pixel(p).data(), labels[p], scratch.data(), out.loss,
                                out.grad.data());
  }
  if (n > 0) {
    const double inv = 1.0 / static_cast<double>(n);
    out.loss *= inv;
    for (auto& g : out.grad) g *= inv;
  }
  return out;
}

ConfidenceSums confidence_by_class(const ProbMap& probs, const LabelMap& membership) {
  detail::check_same_shape(probs.shape(), membership.shape(), "confidence_by_class");
  if (probs.num_classes() != membership.num_classes()) throw DimensionError("confidence_by_class: class count mismatch");
  const auto nc = static_cast<std::size_t>(probs.num_classes());
  ConfidenceSums out{std::vector<double>(nc, 0.0), std::vector<std::size_t>(nc, 0)};
  for (std::size_t p = 0; p < membership.shape().pixels(); ++p) {
    const auto row = probs.pixel(p);
    const auto c = static_cast<std::size_t>(membership[p]);
    out.sum[c] += *std::max_element(row.begin(), row.end());
    ++out.count[c];
  }
  return out;
}

std::vector<std::uint64_t> confusion(const LabelMap& truth, const LabelMap& pred) {
  detail::check_same_shape(truth.shape(), pred.shape(), "confusion");
  if (truth.num_classes() != pred.num_classes()) throw DimensionError("confusion: class count mismatch");
  const auto nc = static_cast<std::size_t>(truth.num_classes());
  std::vector<std::uint64_t> m(nc * nc, 0);
  for (std::size_t p = 0; p < truth.shape().pixels(); ++p) {
    ++m[static_cast<std::size_t>(truth[p]) * nc + static_cast<std::size_t>(pred[p])];
  }
  return m;
}

}  // namespace ida::kernels::reference

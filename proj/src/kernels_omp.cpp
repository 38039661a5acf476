// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kernels_detail.hpp"

namespace ida::kernels {

namespace {

std::size_t block_count(std::size_t n) { return (n + kBlockPixels - 1) / kBlockPixels; }

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

FeatureMap extract_features(const ImageGrid& image) {
  if (image.channels() != 3) throw DimensionError("extract_features: expected 3 channels");
  const std::size_t h = image.height();
  const std::size_t w = image.width();
  FeatureMap out{image.shape(), kFeatureDim, std::vector<double>(image.shape().pixels() * kFeatureDim)};
  double* dst = out.data.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(h); ++r) {
    const auto row = static_cast<std::size_t>(r);
    for (std::size_t c = 0; c < w; ++c) detail::pixel_features(image, row, c, dst + (row * w + c) * kFeatureDim);
  }
  return out;
}

ProbMap predict(const LinearView& model, const FeatureMap& features) {
  detail::check_model(model, features);
  const auto nc = static_cast<std::size_t>(model.num_classes);
  const std::size_t n = features.shape.pixels();
  std::vector<double> probs(n * nc);
  double* dst = probs.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const auto p = static_cast<std::size_t>(i);
    double* row = dst + p * nc;
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
  const std::size_t nblocks = block_count(n);
  const std::size_t stride = nc * model.dim + nc;

  std::vector<double> block_loss(nblocks, 0.0);
  std::vector<double> block_grad(nblocks * stride, 0.0);
#pragma omp parallel
  {
    std::vector<double> scratch(nc);
#pragma omp for schedule(static)
    for (std::ptrdiff_t bi = 0; bi < static_cast<std::ptrdiff_t>(nblocks); ++bi) {
      const auto b = static_cast<std::size_t>(bi);
      const std::size_t end = std::min(n, (b + 1) * kBlockPixels);
      double loss = 0.0;
      double* grad = block_grad.data() + b * stride;
      for (std::size_t p = b * kBlockPixels; p < end; ++p) {
        detail::pixel_cross_entropy(model, features.pixel(p).data(), labels[p], scratch.data(), loss, grad);
      }
      block_loss[b] = loss;
    }
  }

  LossGrad out{0.0, std::vector<double>(stride, 0.0)};
  for (std::size_t b = 0; b < nblocks; ++b) {
    out.loss += block_loss[b];
    const double* grad = block_grad.data() + b * stride;
    for (std::size_t i = 0; i < stride; ++i) out.grad[i] += grad[i];
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
  const std::size_t n = membership.shape().pixels();
  const std::size_t nblocks = block_count(n);

  std::vector<double> block_sum(nblocks * nc, 0.0);
  std::vector<std::size_t> block_count_(nblocks * nc, 0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t bi = 0; bi < static_cast<std::ptrdiff_t>(nblocks); ++bi) {
    const auto b = static_cast<std::size_t>(bi);
    const std::size_t end = std::min(n, (b + 1) * kBlockPixels);
    for (std::size_t p = b * kBlockPixels; p < end; ++p) {
      const auto row = probs.pixel(p);
      const auto c = static_cast<std::size_t>(membership[p]);
      block_sum[b * nc + c] += *std::max_element(row.begin(), row.end());
      ++block_count_[b * nc + c];
    }
  }

  ConfidenceSums out{std::vector<double>(nc, 0.0), std::vector<std::size_t>(nc, 0)};
  for (std::size_t b = 0; b < nblocks; ++b) {
    for (std::size_t c = 0; c < nc; ++c) {
      out.sum[c] += block_sum[b * nc + c];
      out.count[c] += block_count_[b * nc + c];
    }
  }
  return out;
}

std::vector<std::uint64_t> confusion(const LabelMap& truth, const LabelMap& pred) {
  detail::check_same_shape(truth.shape(), pred.shape(), "confusion");
  if (truth.num_classes() != pred.num_classes()) throw DimensionError("confusion: class count mismatch");
  const auto nc = static_cast<std::size_t>(truth.num_classes());
  const std::size_t n = truth.shape().pixels();
  const std::size_t nblocks = block_count(n);
  std::vector<std::uint64_t> block_m(nblocks * nc * nc, 0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t bi = 0; bi < static_cast<std::ptrdiff_t>(nblocks); ++bi) {
    const auto b = static_cast<std::size_t>(bi);
    const std::size_t end = std::min(n, (b + 1) * kBlockPixels);
    std::uint64_t* m = block_m.data() + b * nc * nc;
    for (std::size_t p = b * kBlockPixels; p < end; ++p) {
      ++m[static_cast<std::size_t>(truth[p]) * nc + static_cast<std::size_t>(pred[p])];
    }
  }
  std::vector<std::uint64_t> out(nc * nc, 0);
  for (std::size_t b = 0; b < nblocks; ++b) {
    for (std::size_t i = 0; i < nc * nc; ++i) out[i] += block_m[b * nc * nc + i];
  }
  return out;
}

}  // namespace ida::kernels

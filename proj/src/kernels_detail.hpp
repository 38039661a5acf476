// SPDX-License-Identifier: Apache-2.0
//
// Per-pixel building blocks shared by the serial and OpenMP kernels.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ida/errors.hpp"
#include "ida/kernels.hpp"

namespace ida::kernels::detail {

inline void check_model(const LinearView& m, const FeatureMap& f) {
  if (m.dim != f.dim) throw DimensionError("model feature_dim does not match feature map");
  const auto nc = static_cast<std::size_t>(m.num_classes);
  if (m.weights.size() != nc * m.dim || m.bias.size() != nc) {
    throw DimensionError("model parameter spans do not match C x dim");
  }
}

inline void check_same_shape(Shape a, Shape b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": shape mismatch");
}

inline void pixel_features(const ImageGrid& image, std::size_t row, std::size_t col, double* out) {
  const std::size_t h = image.height();
  const std::size_t w = image.width();
  const std::size_t p = row * w + col;
  for (std::size_t c = 0; c < 3; ++c) out[c] = image.at(p, c) - 0.5;
  out[3] = w > 1 ? 2.0 * static_cast<double>(col) / static_cast<double>(w - 1) - 1.0 : 0.0;
  out[4] = h > 1 ? 2.0 * static_cast<double>(row) / static_cast<double>(h - 1) - 1.0 : 0.0;

  const std::size_t r0 = row > 0 ? row - 1 : 0;
  const std::size_t r1 = std::min(row + 1, h - 1);
  const std::size_t c0 = col > 0 ? col - 1 : 0;
  const std::size_t c1 = std::min(col + 1, w - 1);
  double sum[3] = {0.0, 0.0, 0.0};
  for (std::size_t r = r0; r <= r1; ++r) {
    for (std::size_t c = c0; c <= c1; ++c) {
      for (std::size_t ch = 0; ch < 3; ++ch) sum[ch] += image.at(r * w + c, ch);
    }
  }
  const double n = static_cast<double>((r1 - r0 + 1) * (c1 - c0 + 1));
  for (std::size_t ch = 0; ch < 3; ++ch) out[5 + ch] = sum[ch] / n - 0.5;
}

inline void pixel_logits(const LinearView& m, const double* feat, double* logits) {
  for (int c = 0; c < m.num_classes; ++c) {
    const auto cu = static_cast<std::size_t>(c);
    const double* w = m.weights.data() + cu * m.dim;
    double z = m.bias[cu];
    for (std::size_t f = 0; f < m.dim; ++f) z += w[f] * feat[f];
    logits[cu] = z;
  }
}

// Softmax in place; returns log-sum-exp of the logits.
inline double pixel_softmax(double* v, int n) {
  double peak = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < n; ++c) peak = std::max(peak, v[c]);
  double sum = 0.0;
  for (int c = 0; c < n; ++c) {
    v[c] = std::exp(v[c] - peak);
    sum += v[c];
  }
  for (int c = 0; c < n; ++c) v[c] /= sum;
  return peak + std::log(sum);
}

// Adds pixel p's loss and unnormalised gradient into (loss, grad); `scratch`
// holds C doubles.
inline void pixel_cross_entropy(const LinearView& m, const double* feat, int label, double* scratch,
                                double& loss, double* grad) {
  pixel_logits(m, feat, scratch);
  const double target_logit = scratch[label];
  const double lse = pixel_softmax(scratch, m.num_classes);
  loss += lse - target_logit;
  const auto nc = static_cast<std::size_t>(m.num_classes);
  for (std::size_t c = 0; c < nc; ++c) {
    const double d = scratch[c] - (static_cast<int>(c) == label ? 1.0 : 0.0);
    double* gw = grad + c * m.dim;
    for (std::size_t f = 0; f < m.dim; ++f) gw[f] += d * feat[f];
    grad[nc * m.dim + c] += d;
  }
}

}  // namespace ida::kernels::detail

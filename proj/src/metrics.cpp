// SPDX-License-Identifier: Apache-2.0
#include "ida/metrics.hpp"

#include <numeric>

#include "ida/errors.hpp"
#include "ida/kernels.hpp"

namespace ida {

ConfusionMatrix::ConfusionMatrix(int num_classes)
    : num_classes_(num_classes), counts_(static_cast<std::size_t>(num_classes) * static_cast<std::size_t>(num_classes), 0) {
  if (num_classes < 1) throw ConfigError("ConfusionMatrix: num_classes must be >= 1");
}

ConfusionMatrix::ConfusionMatrix(int num_classes, std::vector<std::uint64_t> counts)
    : num_classes_(num_classes), counts_(std::move(counts)) {
  if (num_classes < 1) throw ConfigError("ConfusionMatrix: num_classes must be >= 1");
  if (counts_.size() != static_cast<std::size_t>(num_classes) * static_cast<std::size_t>(num_classes)) {
    throw DimensionError("ConfusionMatrix: expected C x C counts");
  }
}

void ConfusionMatrix::add(const LabelMap& truth, const LabelMap& pred) {
  if (truth.num_classes() != num_classes_) throw DimensionError("ConfusionMatrix::add: class count mismatch");
  const auto m = kernels::confusion(truth, pred);
  for (std::size_t i = 0; i < m.size(); ++i) counts_[i] += m[i];
}

std::uint64_t ConfusionMatrix::at(int truth, int pred) const {
  return counts_[static_cast<std::size_t>(truth) * static_cast<std::size_t>(num_classes_) + static_cast<std::size_t>(pred)];
}

std::uint64_t ConfusionMatrix::total() const { return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0}); }

IouReport compute_iou(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw DataError("compute_iou: empty confusion matrix");
  const int nc = cm.num_classes();
  IouReport out;
  out.iou.assign(static_cast<std::size_t>(nc), 0.0);
  out.present.assign(static_cast<std::size_t>(nc), false);
  double sum = 0.0;
  int n_present = 0;
  for (int c = 0; c < nc; ++c) {
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    for (int k = 0; k < nc; ++k) {
      row += cm.at(c, k);
      col += cm.at(k, c);
    }
    const std::uint64_t tp = cm.at(c, c);
    const std::uint64_t uni = row + col - tp;  // TP + FN + FP
    const auto cu = static_cast<std::size_t>(c);
    out.iou[cu] = uni > 0 ? static_cast<double>(tp) / static_cast<double>(uni) : 0.0;
    out.present[cu] = row > 0;
    if (row > 0) {
      sum += out.iou[cu];
      ++n_present;
    }
  }
  out.miou = sum / n_present;
  return out;
}

}  // namespace ida

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "ida/grid.hpp"

namespace ida {

/// Accumulated C x C confusion counts (row = ground truth, column = prediction).
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes);
  /// Row-major C x C counts.
  ConfusionMatrix(int num_classes, std::vector<std::uint64_t> counts);

  void add(const LabelMap& truth, const LabelMap& pred);

  int num_classes() const { return num_classes_; }
  std::uint64_t at(int truth, int pred) const;
  std::uint64_t total() const;

 private:
  int num_classes_;
  std::vector<std::uint64_t> counts_;
};

struct IouReport {
  std::vector<double> iou;      // TP / (TP + FP + FN); 0 where the class never occurs
  std::vector<bool> present;    // class occurs in the ground truth
  double miou = 0.0;            // mean over present classes
};

/// Throws DataError when the matrix is empty.
IouReport compute_iou(const ConfusionMatrix& cm);

}  // namespace ida

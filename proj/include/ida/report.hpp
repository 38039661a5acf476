// SPDX-License-Identifier: Apache-2.0
//
// Reliability binning of (class ECS, class IoU) pairs, Pearson correlation,
// and content digests for run manifests.
#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ida {

struct EcsIouPair {
  double ecs = 0.0;
  double iou = 0.0;
};

struct ReliabilityBin {
  double ecs_low = 0.0;
  double ecs_high = 0.0;
  double mean_iou = 0.0;  // 0 for empty bins
  std::size_t count = 0;

  bool empty() const { return count == 0; }
};

/// Equal-width bins over [0, 1]; the last bin is closed on the right.
/// Throws ConfigError on empty input, num_bins < 2, or values outside [0, 1].
std::vector<ReliabilityBin> reliability(std::span<const EcsIouPair> pairs, std::size_t num_bins);

/// Pearson coefficient of (ecs, iou). Throws ConfigError for fewer than two
/// pairs and UndefinedCorrelationError when either coordinate has zero variance.
double correlation(std::span<const EcsIouPair> pairs);

/// Git blob id: SHA-1 over "blob <size>\0" followed by the bytes, lowercase hex.
std::string git_blob_digest(std::string_view bytes);
std::string git_blob_digest_file(const std::filesystem::path& path);

}  // namespace ida

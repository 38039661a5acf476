// SPDX-License-Identifier: Apache-2.0
//
// Synthetic two-domain segmentation data. Both domains share one layout
// family: Voronoi cells filled with the common classes plus small discs of
// the rare classes. The target domain applies a per-channel intensity offset
// and scaled noise.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ida/grid.hpp"

namespace ida {

struct DomainPairConfig {
  int num_classes = 6;
  Shape image{64, 64};
  /// Voronoi cells per image; common classes are spread over the cells.
  int regions = 8;
  /// The last `rare_classes` class indices are rare (disc-shaped, low pixel share).
  int rare_classes = 2;
  /// Probability that a given rare class is stamped into an image.
  double rare_presence = 0.6;
  int rare_radius = 6;
  /// Std of per-pixel Gaussian intensity noise in the source domain.
  double noise = 0.06;
  std::array<double, 3> target_offset{0.12, -0.08, 0.10};
  /// Target noise std = noise * target_noise_scale.
  double target_noise_scale = 1.5;

  /// Throws ConfigError for invalid or infeasible settings.
  void validate() const;
  int common_classes() const { return num_classes - rare_classes; }
};

/// Base colour of each class (the palette holds 12 classes).
std::array<double, 3> class_color(int cls);

struct SourceSample {
  ImageGrid image;
  LabelMap labels;
};

/// Target image plus labels that exist only for evaluation.
struct TargetSample {
  ImageGrid image;
  LabelMap hidden_labels;
};

struct DomainPair {
  SourceSample source;
  TargetSample target;
};

/// Deterministic in (cfg, seed); source and target use independent layouts.
DomainPair generate_pair(const DomainPairConfig& cfg, std::uint64_t seed);

/// Pools used by one simulation run.
struct DatasetConfig {
  std::size_t source_images = 128;
  std::size_t target_images = 128;
  std::size_t eval_images = 24;
};

struct Dataset {
  std::vector<SourceSample> source;
  std::vector<TargetSample> target;  // training pool; labels hidden from training
  std::vector<TargetSample> eval;    // held-out target set
};

Dataset build_dataset(const DomainPairConfig& domain, const DatasetConfig& sizes, std::uint64_t seed);

}  // namespace ida

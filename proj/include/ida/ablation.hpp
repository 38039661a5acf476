// SPDX-License-Identifier: Apache-2.0
//
// Multi-seed experiment grids: strategy x fixed/dynamic ratio and ECS
// smoothness sweeps. Independent runs fan out over OpenMP threads; results
// are stored by (cell, seed) index so the output does not depend on scheduling.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ida/simulator.hpp"

namespace ida {

struct AblationCell {
  std::string grid;     // "ratio", "smoothness" or "baseline"
  MixStrategy strategy;
  std::optional<double> fixed_eta;  // nullopt: dynamic schedule from the base config
  double tau = 0.999;

  /// Base config with this cell's strategy, schedule and tau applied.
  SimulationConfig apply(const SimulationConfig& base) const;
  std::string eta_label() const;
};

struct CellResult {
  AblationCell cell;
  std::vector<double> miou;  // one per seed, in seed order
  double mean = 0.0;
  double stddev = 0.0;       // sample standard deviation (n - 1)
};

inline const std::vector<double> kAblationRatios{0.1, 0.3, 0.5, 0.7, 0.9};
inline const std::vector<double> kAblationTaus{0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.999};

/// Four informed strategies (SSTF/TSSF x Well/Under) crossed with every
/// fixed ratio plus the dynamic schedule.
std::vector<AblationCell> ratio_grid();
/// Dynamic SSTF-Under with each smoothness weight.
std::vector<AblationCell> smoothness_grid();
/// Random ClassMix, half of the present classes.
AblationCell classmix_baseline();

/// Runs every cell for seeds first_seed .. first_seed + num_seeds - 1.
std::vector<CellResult> run_cells(const SimulationConfig& base, const std::vector<AblationCell>& cells,
                                  std::uint64_t first_seed, std::size_t num_seeds);

}  // namespace ida

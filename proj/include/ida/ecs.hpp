// SPDX-License-Identifier: Apache-2.0
//
// Expected confidence score (ECS) tracking. The raw ECS of a class is the
// mean max-probability over the pixels that belong to it; a per-domain EMA
// turns the raw stream into a stable class-level performance indicator.
#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "ida/grid.hpp"

namespace ida {

enum class Domain { Source, Target };

std::string_view to_string(Domain d);

/// Per-class raw ECS; std::nullopt marks a class with no member pixels.
using RawEcs = std::vector<std::optional<double>>;

/// Groups pixels by `membership` (ground truth on the source side, teacher
/// pseudo-labels on the target side) and averages max_confidence per group.
RawEcs measure_ecs(const ProbMap& probs, const LabelMap& membership);

class EcsState {
 public:
  /// Throws ConfigError unless num_classes >= 1 and tau in [0, 1).
  EcsState(int num_classes, double tau);

  int num_classes() const { return num_classes_; }
  double tau() const { return tau_; }

  /// A class seen for the first time takes the raw value; afterwards
  /// new = tau * old + (1 - tau) * raw. Absent classes keep their value.
  void update(Domain domain, const RawEcs& raw);

  const std::vector<double>& snapshot(Domain domain) const;
  const std::vector<bool>& seen(Domain domain) const;

 private:
  int num_classes_;
  double tau_;
  std::vector<double> source_;
  std::vector<double> target_;
  std::vector<bool> seen_source_;
  std::vector<bool> seen_target_;
};

/// Value-returning form of EcsState::update.
EcsState update(EcsState state, Domain domain, const RawEcs& raw);

/// Rows of (iteration, domain, class, raw, smoothed), one per measured class.
class EcsHistory {
 public:
  struct Row {
    std::size_t iteration;
    Domain domain;
    int cls;
    double raw;
    double smoothed;
  };

  /// Appends one row for every class present in `raw`, reading the smoothed
  /// value from `state` (call after the update).
  void record(std::size_t iteration, Domain domain, const RawEcs& raw, const EcsState& state);

  const std::vector<Row>& rows() const { return rows_; }
  void write_csv(const std::filesystem::path& path) const;

 private:
  std::vector<Row> rows_;
};

/// Final-state ECS table with columns (class, source_ecs, target_ecs).
void write_ecs_csv(const std::filesystem::path& path, const EcsState& state);
/// Reads a table written by write_ecs_csv. `tau` is attached to the state.
EcsState read_ecs_csv(const std::filesystem::path& path, double tau = 0.0);

}  // namespace ida

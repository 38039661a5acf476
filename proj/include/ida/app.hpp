// SPDX-License-Identifier: Apache-2.0
//
// Command implementations behind the `ida` CLI. Each command reads its inputs,
// writes its artifacts under an output directory and returns nothing; errors
// surface as ida::Error subclasses, which the CLI maps to exit codes.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ida/ablation.hpp"
#include "ida/simulator.hpp"

namespace ida::app {

/// 0 success, 2 configuration error, 3 data error.
int exit_code_for(const std::exception& e);

nlohmann::json to_json(const SimulationConfig& cfg);
/// Missing keys keep their defaults; unknown keys are a ConfigError.
SimulationConfig simulation_config_from_json(const nlohmann::json& j);
SimulationConfig load_simulation_config(const std::filesystem::path& path);

struct MixOptions {
  std::filesystem::path donor_image;
  std::filesystem::path donor_labels;
  std::filesystem::path follower_image;
  std::filesystem::path follower_labels;
  /// ECS table (class, source_ecs, target_ecs); required for the informed sampler.
  std::optional<std::filesystem::path> ecs;
  int num_classes = 0;  // 0: from the ECS table, else inferred from the labels
  MixStrategy strategy{};
  double eta = 0.5;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
};

/// Writes x_m.ppm, y_m.pgm, mask.pgm and mix.json.
void run_mix(const MixOptions& opts);

/// CSV (iteration, eta) for iterations 0..K.
void write_schedule_csv(std::ostream& out, const ScheduleConfig& cfg);

/// Metrics table: iteration, L_S, L_M, eta, ecs_source_<c>..., ecs_target_<c>...
void write_metrics_csv(const std::filesystem::path& path, const std::vector<IterationMetrics>& metrics);

/// Writes metrics.csv, iou.csv, ecs_history.csv, final_ecs.csv, model.bin and
/// manifest.json into `out_dir`.
SimulationResult run_simulate(const SimulationConfig& cfg, const std::filesystem::path& out_dir);

struct AblateOptions {
  SimulationConfig base{};
  std::uint64_t first_seed = 0;
  std::size_t seeds = 3;
  bool ratio_grid = true;
  bool smoothness_grid = true;
  bool baseline = true;
};

/// Writes ablation.csv (grid, strategy, eta, tau, n, mean_miou, std_miou,
/// per-seed mIoU) and manifest.json.
std::vector<CellResult> run_ablate(const AblateOptions& opts, const std::filesystem::path& out_dir);

struct ReportOptions {
  std::vector<std::filesystem::path> run_dirs;
  std::size_t bins = 10;
  std::filesystem::path out_dir;
};

/// Pairs the final smoothed target ECS (last row of each metrics.csv) with the
/// per-class IoU of the same run; writes reliability.csv and report.json.
void run_report(const ReportOptions& opts);

/// Reads the last row of a metrics.csv written by write_metrics_csv and
/// returns its target ECS columns.
std::vector<double> final_target_ecs(const std::filesystem::path& metrics_csv);

}  // namespace ida::app

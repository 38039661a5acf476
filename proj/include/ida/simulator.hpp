// SPDX-License-Identifier: Apache-2.0
//
// Teacher-student self-training on the synthetic two-domain task. One
// iteration runs four stages: teacher EMA update, supervised source step,
// pseudo-labelling with ECS tracking, and a step on the mixed sample.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ida/classifier.hpp"
#include "ida/ecs.hpp"
#include "ida/metrics.hpp"
#include "ida/mixer.hpp"
#include "ida/schedule.hpp"
#include "ida/synthetic.hpp"

namespace ida {

struct TrainConfig {
  std::size_t iterations = 2000;
  double learning_rate = 1.0;
  /// ECS smoothness weight.
  double tau = 0.999;
  /// Teacher EMA momentum.
  double alpha = 0.99;
  MixStrategy strategy{};
  /// Allocation-ratio schedule; total_iters is forced to `iterations`.
  ScheduleConfig schedule{};
  /// Weight of the mixed loss in the update; 0 turns the run into source-only
  /// training while the mixed loss is still reported.
  double mix_weight = 1.0;
  /// Std of the random weight initialisation.
  double init_scale = 0.01;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SimulationConfig {
  DomainPairConfig domain{};
  DatasetConfig dataset{};
  TrainConfig train{};

  void validate() const;
};

struct TrainState {
  PixelClassifier student;
  TeacherState teacher;
  EcsState ecs;
  std::size_t iteration = 0;

  /// Student drawn from `cfg.seed`, teacher an exact copy.
  static TrainState initial(const TrainConfig& cfg, int num_classes);
};

/// One source sample and one unlabelled target image.
struct Batch {
  const ImageGrid& source_image;
  const LabelMap& source_labels;
  const ImageGrid& target_image;
};

struct IterationMetrics {
  std::size_t iteration = 0;
  double source_loss = 0.0;
  double mix_loss = 0.0;
  double eta = 0.0;
  std::vector<int> selected_classes;
  RawEcs raw_source;
  RawEcs raw_target;
  std::vector<double> ecs_source;
  std::vector<double> ecs_target;
};

/// Runs the four stages for `state.iteration` and advances it. `mix_seed`
/// drives the random ClassMix sampler.
IterationMetrics train_step(TrainState& state, const Batch& batch, const TrainConfig& cfg, std::uint64_t mix_seed);

struct TrainingRun {
  TrainState final_state;
  std::vector<IterationMetrics> metrics;
  EcsHistory ecs_history;
};

/// Full loop. Only target images are visible to training; sample indices
/// and mix seeds are derived from cfg.seed per iteration, so runs differing
/// only in strategy see the same data stream.
TrainingRun train(const TrainConfig& cfg, std::span<const SourceSample> source,
                  std::span<const ImageGrid> target_images);

/// Convenience overload that strips the hidden labels.
TrainingRun train(const TrainConfig& cfg, const Dataset& data);

struct Evaluation {
  ConfusionMatrix confusion;
  IouReport iou;
};

/// Per-class IoU and mIoU over a held-out target set. Throws ConfigError on an empty set.
Evaluation evaluate(const PixelClassifier& model, std::span<const TargetSample> eval_set);

struct SimulationResult {
  TrainingRun run;
  Evaluation evaluation;
};

/// Builds the dataset from `cfg.train.seed`, trains and evaluates the student.
SimulationResult simulate(const SimulationConfig& cfg);

}  // namespace ida

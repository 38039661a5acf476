// SPDX-License-Identifier: Apache-2.0
#include "ida/simulator.hpp"

#include <string>

#include "ida/errors.hpp"
#include "ida/kernels.hpp"
#include "ida/seed.hpp"

namespace ida {

namespace {

enum Stream : std::uint64_t { kInit = 100, kSourcePick = 101, kTargetPick = 102, kMixSeed = 103, kData = 104 };

ScheduleConfig schedule_for(const TrainConfig& cfg) {
  ScheduleConfig s = cfg.schedule;
  s.total_iters = cfg.iterations;
  return s;
}

}  // namespace

void TrainConfig::validate() const {
  if (iterations < 1) throw ConfigError("train: iterations must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("train: learning_rate must be > 0");
  if (!(tau >= 0.0 && tau < 1.0)) throw ConfigError("train: tau must lie in [0, 1)");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("train: alpha must lie in [0, 1)");
  if (!(mix_weight >= 0.0)) throw ConfigError("train: mix_weight must be >= 0");
  if (!(init_scale >= 0.0)) throw ConfigError("train: init_scale must be >= 0");
  schedule_for(*this).validate();
}

void SimulationConfig::validate() const {
  domain.validate();
  train.validate();
  if (dataset.source_images == 0 || dataset.target_images == 0 || dataset.eval_images == 0) {
    throw ConfigError("dataset: all pools must be non-empty");
  }
}

TrainState TrainState::initial(const TrainConfig& cfg, int num_classes) {
  auto student = PixelClassifier::random(num_classes, derive_seed(cfg.seed, kInit), cfg.init_scale);
  TeacherState teacher(student, cfg.alpha);
  return TrainState{std::move(student), std::move(teacher), EcsState(num_classes, cfg.tau), 0};
}

IterationMetrics train_step(TrainState& state, const Batch& batch, const TrainConfig& cfg, std::uint64_t mix_seed) {
  if (state.iteration >= cfg.iterations) {
    throw RangeError("train_step: iteration " + std::to_string(state.iteration) + " is past K = " +
                     std::to_string(cfg.iterations));
  }
  IterationMetrics m;
  m.iteration = state.iteration;

  // Stage 1: teacher follows the student.
  state.teacher.update(state.student);

  // Stage 2: supervised step on the source sample.
  const FeatureMap source_features = kernels::extract_features(batch.source_image);
  const LossGrad source = cross_entropy_loss(state.student, source_features, batch.source_labels);
  gradient_step(state.student, source.grad, cfg.learning_rate);
  m.source_loss = source.loss;

  // Stage 3: pseudo-labels and class-level confidence from the teacher.
  const PixelClassifier& teacher = state.teacher.model();
  const FeatureMap target_features = kernels::extract_features(batch.target_image);
  const ProbMap target_probs = teacher.predict(target_features);
  LabelMap pseudo = argmax_labels(target_probs);
  m.raw_source = measure_ecs(teacher.predict(source_features), batch.source_labels);
  m.raw_target = measure_ecs(target_probs, pseudo);
  state.ecs.update(Domain::Source, m.raw_source);
  state.ecs.update(Domain::Target, m.raw_target);
  m.ecs_source = state.ecs.snapshot(Domain::Source);
  m.ecs_target = state.ecs.snapshot(Domain::Target);

  // Stage 4: mixed sample and its update.
  m.eta = eta_at(schedule_for(cfg), state.iteration);
  LabeledImage source_pair{batch.source_image, batch.source_labels};
  LabeledImage target_pair{batch.target_image, std::move(pseudo)};
  const bool source_selects = cfg.strategy.order == MixOrder::SSTF;
  MixedSample mixed = source_selects ? mix(source_pair, target_pair, cfg.strategy, state.ecs, m.eta, mix_seed)
                                     : mix(target_pair, source_pair, cfg.strategy, state.ecs, m.eta, mix_seed);
  const LossGrad mixed_loss =
      cross_entropy_loss(state.student, kernels::extract_features(mixed.image), mixed.labels);
  if (cfg.mix_weight > 0.0) gradient_step(state.student, mixed_loss.grad, cfg.learning_rate, cfg.mix_weight);
  m.mix_loss = mixed_loss.loss;
  m.selected_classes = std::move(mixed.selected_classes);

  ++state.iteration;
  return m;
}

TrainingRun train(const TrainConfig& cfg, std::span<const SourceSample> source,
                  std::span<const ImageGrid> target_images) {
  cfg.validate();
  if (source.empty() || target_images.empty()) throw ConfigError("train: empty training pool");
  const int nc = source.front().labels.num_classes();

  TrainingRun run{TrainState::initial(cfg, nc), {}, {}};
  run.metrics.reserve(cfg.iterations);
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const auto& src = source[derive_seed(cfg.seed, kSourcePick, it) % source.size()];
    const auto& tgt = target_images[derive_seed(cfg.seed, kTargetPick, it) % target_images.size()];
    auto m = train_step(run.final_state, Batch{src.image, src.labels, tgt}, cfg, derive_seed(cfg.seed, kMixSeed, it));
    run.ecs_history.record(it, Domain::Source, m.raw_source, run.final_state.ecs);
    run.ecs_history.record(it, Domain::Target, m.raw_target, run.final_state.ecs);
    run.metrics.push_back(std::move(m));
  }
  return run;
}

TrainingRun train(const TrainConfig& cfg, const Dataset& data) {
  std::vector<ImageGrid> target_images;
  target_images.reserve(data.target.size());
  for (const auto& t : data.target) target_images.push_back(t.image);
  return train(cfg, data.source, target_images);
}

Evaluation evaluate(const PixelClassifier& model, std::span<const TargetSample> eval_set) {
  if (eval_set.empty()) throw ConfigError("evaluate: empty evaluation set");
  ConfusionMatrix cm(model.num_classes());
  for (const auto& sample : eval_set) cm.add(sample.hidden_labels, argmax_labels(model.predict(sample.image)));
  auto iou = compute_iou(cm);
  return {std::move(cm), std::move(iou)};
}

SimulationResult simulate(const SimulationConfig& cfg) {
  cfg.validate();
  const Dataset data = build_dataset(cfg.domain, cfg.dataset, derive_seed(cfg.train.seed, kData));
  auto run = train(cfg.train, data);
  auto evaluation = evaluate(run.final_state.student, data.eval);
  return {std::move(run), std::move(evaluation)};
}

}  // namespace ida

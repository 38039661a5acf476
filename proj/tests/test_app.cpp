// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ida/app.hpp"
#include "ida/errors.hpp"
#include "ida/image_io.hpp"
#include "ida/report.hpp"
#include "oracles.hpp"

using namespace ida;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* name) {
  auto dir = fs::temp_directory_path() / (std::string("ida_test_app_") + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SimulationConfig tiny_config() {
  SimulationConfig cfg;
  cfg.domain.image = Shape{32, 32};
  cfg.domain.regions = 6;
  cfg.domain.rare_radius = 3;
  cfg.dataset = DatasetConfig{6, 6, 3};
  cfg.train.iterations = 60;
  return cfg;
}

}  // namespace

TEST_CASE("config JSON round trip and strictness") {
  auto cfg = tiny_config();
  cfg.train.tau = 0.5;
  cfg.train.strategy = MixStrategy{MixOrder::TSSF, ClassKind::Well, Sampler::ClassMix};
  cfg.train.schedule.reversed = false;
  const auto back = app::simulation_config_from_json(app::to_json(cfg));
  CHECK(app::to_json(back) == app::to_json(cfg));
  CHECK(back.train.strategy == cfg.train.strategy);

  const auto partial = app::simulation_config_from_json(nlohmann::json::parse(R"({"train": {"iterations": 7}})"));
  CHECK(partial.train.iterations == 7);
  CHECK(partial.train.tau == TrainConfig{}.tau);

  CHECK_THROWS_AS(app::simulation_config_from_json(nlohmann::json::parse(R"({"trian": {}})")), ConfigError);
  CHECK_THROWS_AS(app::simulation_config_from_json(nlohmann::json::parse(R"({"train": {"tua": 0.1}})")), ConfigError);
  CHECK_THROWS_AS(app::simulation_config_from_json(nlohmann::json::parse(R"({"train": {"tau": "high"}})")), ConfigError);
  CHECK_THROWS_AS(app::simulation_config_from_json(nlohmann::json::parse(R"({"train": {"tau": 1.0}})")), ConfigError);

  const auto dir = fresh_dir("config");
  std::ofstream(dir / "bad.json") << "{ not json";
  CHECK_THROWS_AS(app::load_simulation_config(dir / "bad.json"), ConfigError);
  CHECK_THROWS_AS(app::load_simulation_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("exit codes") {
  CHECK(app::exit_code_for(ConfigError("x")) == 2);
  CHECK(app::exit_code_for(RangeError("x")) == 2);
  CHECK(app::exit_code_for(DataError("x")) == 3);
  CHECK(app::exit_code_for(DimensionError("x")) == 3);
}

TEST_CASE("schedule CSV") {
  ScheduleConfig cfg;
  cfg.total_iters = 10;
  std::ostringstream out;
  app::write_schedule_csv(out, cfg);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "iteration,eta");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    CHECK(std::stoul(line.substr(0, comma)) == rows);
    CHECK(std::stod(line.substr(comma + 1)) == eta_at(cfg, rows));
    ++rows;
  }
  CHECK(rows == 11);
}

TEST_CASE("mix command writes the composed sample") {
  const auto dir = fresh_dir("mix");
  std::mt19937_64 rng(91);
  const Shape s{6, 5};
  const LabeledImage donor{oracle::random_image(s, rng), oracle::random_labels(s, 4, rng)};
  const LabeledImage follower{oracle::random_image(s, rng), oracle::random_labels(s, 4, rng)};
  io::write_ppm(dir / "a.ppm", donor.image);
  io::write_pgm_labels(dir / "a.pgm", donor.labels);
  io::write_ppm(dir / "b.ppm", follower.image);
  io::write_csv_labels(dir / "b.csv", follower.labels);
  EcsState ecs(4, 0.0);
  ecs.update(Domain::Source, {0.9, 0.2, 0.5, 0.7});
  write_ecs_csv(dir / "ecs.csv", ecs);

  app::MixOptions opts;
  opts.donor_image = dir / "a.ppm";
  opts.donor_labels = dir / "a.pgm";
  opts.follower_image = dir / "b.ppm";
  opts.follower_labels = dir / "b.csv";
  opts.ecs = dir / "ecs.csv";
  opts.eta = 0.5;
  opts.out_dir = dir / "out";
  app::run_mix(opts);

  const auto mask = io::read_pgm_mask(dir / "out" / "mask.pgm");
  const auto y = io::read_labels(dir / "out" / "y_m.pgm", 4);
  const auto x = io::read_ppm(dir / "out" / "x_m.ppm");
  const auto donor_q = io::read_ppm(dir / "a.ppm");
  const auto follower_q = io::read_ppm(dir / "b.ppm");
  CHECK(y == masked_blend(donor.labels, follower.labels, mask));
  CHECK(x == masked_blend(donor_q, follower_q, mask));

  const auto record = nlohmann::json::parse(slurp(dir / "out" / "mix.json"));
  const auto want = mix(donor, follower, MixStrategy{}, ecs, 0.5, 0).selected_classes;
  CHECK(record["selected_classes"].get<std::vector<int>>() == want);
  CHECK(record["k"] == 2);

  opts.ecs.reset();
  CHECK_THROWS_AS(app::run_mix(opts), ConfigError);
  opts.strategy.sampler = Sampler::ClassMix;
  opts.donor_labels = dir / "missing.pgm";
  CHECK_THROWS_AS(app::run_mix(opts), DataError);
}

TEST_CASE("simulate and report commands") {
  const auto dir = fresh_dir("sim");
  auto cfg = tiny_config();
  std::vector<fs::path> runs;
  for (std::uint64_t seed : {1, 2}) {
    cfg.train.seed = seed;
    const auto run_dir = dir / ("run" + std::to_string(seed));
    const auto result = app::run_simulate(cfg, run_dir);
    for (const char* name : {"metrics.csv", "iou.csv", "ecs_history.csv", "final_ecs.csv", "model.bin", "manifest.json"}) {
      CHECK(fs::exists(run_dir / name));
    }
    CHECK(app::final_target_ecs(run_dir / "metrics.csv") == result.run.metrics.back().ecs_target);
    CHECK(read_model(run_dir / "model.bin") == result.run.final_state.student);
    const auto manifest = nlohmann::json::parse(slurp(run_dir / "manifest.json"));
    CHECK(manifest["outputs"]["metrics.csv"] == git_blob_digest(slurp(run_dir / "metrics.csv")));
    runs.push_back(run_dir);
  }

  app::ReportOptions ro;
  ro.run_dirs = runs;
  ro.bins = 5;
  ro.out_dir = dir / "report";
  app::run_report(ro);
  const auto summary = nlohmann::json::parse(slurp(dir / "report" / "report.json"));
  CHECK(summary["runs"].size() == 2);
  CHECK(summary["pairs"].get<int>() > 0);
  CHECK(fs::exists(dir / "report" / "reliability.csv"));

  ro.run_dirs = {dir / "nowhere"};
  CHECK_THROWS_AS(app::run_report(ro), DataError);
}

TEST_CASE("ablate command writes one row per cell") {
  const auto dir = fresh_dir("ablate");
  app::AblateOptions opts;
  opts.base = tiny_config();
  opts.base.train.iterations = 20;
  opts.seeds = 2;
  opts.ratio_grid = false;
  const auto cells = app::run_ablate(opts, dir);
  CHECK(cells.size() == kAblationTaus.size() + 1);
  for (const auto& c : cells) CHECK(c.miou.size() == 2);
  std::ifstream in(dir / "ablation.csv");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == cells.size() + 1);
}

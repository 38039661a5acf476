// SPDX-License-Identifier: Apache-2.0
//
// ida: informed class-mix toolkit.
//
//   ida mix       compose a mixed sample from two labelled images
//   ida schedule  print the allocation-ratio schedule as CSV
//   ida simulate  run one self-training simulation
//   ida ablate    multi-seed ratio / smoothness grids
//   ida report    reliability bins and ECS-IoU correlation over runs
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ida/app.hpp"
#include "ida/errors.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App cli{"Informed class-mix domain adaptation toolkit"};
  cli.require_subcommand(1);
  cli.fallthrough();

  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string config_path;
  std::string out_dir = "out";
  cli.add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { seed = v; seed_given = true; },
                                         "Root RNG seed")
      ->configurable(false);
  cli.add_option("--config", config_path, "JSON simulation config");
  cli.add_option("--out", out_dir, "Output directory");

  // mix
  ida::app::MixOptions mix_opts;
  std::string order = "sstf", kind = "under", sampler = "imix", ecs_path;
  auto* mix = cli.add_subcommand("mix", "Compose x_m / y_m from a donor and a follower sample");
  mix->add_option("--donor-image", mix_opts.donor_image, "Donor image (PPM)")->required();
  mix->add_option("--donor-labels", mix_opts.donor_labels, "Donor labels (PGM or CSV)")->required();
  mix->add_option("--follower-image", mix_opts.follower_image, "Follower image (PPM)")->required();
  mix->add_option("--follower-labels", mix_opts.follower_labels, "Follower labels (PGM or CSV)")->required();
  mix->add_option("--ecs", ecs_path, "ECS table (class,source_ecs,target_ecs)");
  mix->add_option("--classes", mix_opts.num_classes, "Number of classes (default: from the ECS table)");
  mix->add_option("--order", order, "sstf|tssf")->check(CLI::IsMember({"sstf", "tssf"}));
  mix->add_option("--kind", kind, "well|under")->check(CLI::IsMember({"well", "under"}));
  mix->add_option("--sampler", sampler, "classmix|imix")->check(CLI::IsMember({"classmix", "imix"}));
  mix->add_option("--eta", mix_opts.eta, "Allocation ratio in [0, 1]");

  // schedule
  ida::ScheduleConfig sched;
  auto* schedule = cli.add_subcommand("schedule", "Emit the allocation-ratio schedule as CSV (iteration, eta)");
  schedule->add_option("--a", sched.a, "Kumaraswamy shape a");
  schedule->add_option("--b", sched.b, "Kumaraswamy shape b");
  schedule->add_option("--reversed", sched.reversed, "Use the decreasing (reversed) curve");
  schedule->add_option("--eta-min", sched.eta_min, "Lower truncation bound");
  schedule->add_option("--eta-max", sched.eta_max, "Upper truncation bound");
  schedule->add_option("--k", sched.total_iters, "Total iterations K");
  schedule->add_option("--phase1", sched.phase1_end, "End of the first plateau, fraction of K");
  schedule->add_option("--phase3", sched.phase3_start, "Start of the final plateau, fraction of K");

  // simulate
  auto* simulate = cli.add_subcommand("simulate", "Run one self-training simulation");

  // ablate
  ida::app::AblateOptions ablate_opts;
  std::string grids = "all";
  auto* ablate = cli.add_subcommand("ablate", "Strategy x ratio and smoothness grids over several seeds");
  ablate->add_option("--seeds", ablate_opts.seeds, "Number of seeds per cell");
  ablate->add_option("--grid", grids, "ratio|smoothness|all")->check(CLI::IsMember({"ratio", "smoothness", "all"}));
  std::size_t iterations_override = 0;
  ablate->add_option("--iterations", iterations_override, "Override train.iterations");

  // report
  ida::app::ReportOptions report_opts;
  std::vector<std::string> run_dirs;
  auto* report = cli.add_subcommand("report", "Reliability bins and correlation from simulate outputs");
  report->add_option("runs", run_dirs, "Run directories produced by `simulate`")->required();
  report->add_option("--bins", report_opts.bins, "Number of equal-width ECS bins");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors are configuration errors; --help still exits 0.
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    auto load_config = [&] {
      ida::SimulationConfig cfg = config_path.empty() ? ida::SimulationConfig{}
                                                      : ida::app::load_simulation_config(config_path);
      if (seed_given) cfg.train.seed = seed;
      return cfg;
    };

    if (*mix) {
      mix_opts.strategy = {ida::parse_order(order), ida::parse_kind(kind), ida::parse_sampler(sampler)};
      if (!ecs_path.empty()) mix_opts.ecs = ecs_path;
      mix_opts.seed = seed;
      mix_opts.out_dir = out_dir;
      ida::app::run_mix(mix_opts);
    } else if (*schedule) {
      if (cli.get_option("--out")->count() > 0) {
        fs::create_directories(out_dir);
        std::ofstream out(fs::path(out_dir) / "schedule.csv");
        if (!out) throw ida::DataError("cannot write schedule.csv");
        ida::app::write_schedule_csv(out, sched);
      } else {
        ida::app::write_schedule_csv(std::cout, sched);
      }
    } else if (*simulate) {
      const auto result = ida::app::run_simulate(load_config(), out_dir);
      std::cout << "mIoU " << result.evaluation.iou.miou << " -> " << out_dir << '\n';
    } else if (*ablate) {
      ablate_opts.base = load_config();
      if (iterations_override > 0) ablate_opts.base.train.iterations = iterations_override;
      ablate_opts.first_seed = ablate_opts.base.train.seed;
      ablate_opts.ratio_grid = grids != "smoothness";
      ablate_opts.smoothness_grid = grids != "ratio";
      ida::app::run_ablate(ablate_opts, out_dir);
      std::cout << "wrote " << (fs::path(out_dir) / "ablation.csv").string() << '\n';
    } else if (*report) {
      for (const auto& d : run_dirs) report_opts.run_dirs.emplace_back(d);
      report_opts.out_dir = out_dir;
      ida::app::run_report(report_opts);
      std::cout << "wrote " << (fs::path(out_dir) / "reliability.csv").string() << '\n';
    }
  } catch (const ida::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ida::app::exit_code_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

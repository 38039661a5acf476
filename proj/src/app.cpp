// SPDX-License-Identifier: Apache-2.0
#include "ida/app.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "ida/errors.hpp"
#include "ida/image_io.hpp"
#include "ida/report.hpp"

namespace ida::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Shortest representation that round-trips exactly.
std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
}

void write_json(const fs::path& path, const json& j) { open_out(path) << j.dump(2) << '\n'; }

// Reads `key` into `dst` when present and removes it from the pending set.
template <typename T>
void take(const json& obj, std::set<std::string>& pending, const char* key, T& dst) {
  if (!obj.contains(key)) return;
  pending.erase(key);
  try {
    dst = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

std::set<std::string> keys_of(const json& obj, const char* section) {
  if (!obj.is_object()) throw ConfigError(std::string("config section '") + section + "' must be an object");
  std::set<std::string> keys;
  for (const auto& item : obj.items()) keys.insert(item.key());
  return keys;
}

void reject_unknown(const std::set<std::string>& pending, const char* section) {
  if (!pending.empty()) throw ConfigError(std::string("unknown key '") + *pending.begin() + "' in " + section);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

double parse_number(const std::string& s, const fs::path& path) {
  try {
    return std::stod(s);
  } catch (const std::logic_error&) {
    throw DataError(path.string() + ": non-numeric value '" + s + "'");
  }
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const RangeError*>(&e)) return 2;
  return 3;
}

json to_json(const SimulationConfig& cfg) {
  const auto& d = cfg.domain;
  const auto& t = cfg.train;
  const auto& s = t.schedule;
  return {
      {"domain",
       {{"num_classes", d.num_classes},
        {"height", d.image.height},
        {"width", d.image.width},
        {"regions", d.regions},
        {"rare_classes", d.rare_classes},
        {"rare_presence", d.rare_presence},
        {"rare_radius", d.rare_radius},
        {"noise", d.noise},
        {"target_offset", d.target_offset},
        {"target_noise_scale", d.target_noise_scale}}},
      {"dataset",
       {{"source_images", cfg.dataset.source_images},
        {"target_images", cfg.dataset.target_images},
        {"eval_images", cfg.dataset.eval_images}}},
      {"train",
       {{"iterations", t.iterations},
        {"learning_rate", t.learning_rate},
        {"tau", t.tau},
        {"alpha", t.alpha},
        {"mix_weight", t.mix_weight},
        {"init_scale", t.init_scale},
        {"seed", t.seed},
        {"strategy",
         {{"sampler", to_string(t.strategy.sampler)},
          {"order", to_string(t.strategy.order)},
          {"kind", to_string(t.strategy.kind)}}},
        {"schedule",
         {{"a", s.a},
          {"b", s.b},
          {"reversed", s.reversed},
          {"eta_min", s.eta_min},
          {"eta_max", s.eta_max},
          {"phase1_end", s.phase1_end},
          {"phase3_start", s.phase3_start}}}}},
  };
}

SimulationConfig simulation_config_from_json(const json& j) {
  SimulationConfig cfg;
  auto top = keys_of(j, "config");
  if (j.contains("domain")) {
    top.erase("domain");
    const auto& o = j.at("domain");
    auto keys = keys_of(o, "domain");
    auto& d = cfg.domain;
    take(o, keys, "num_classes", d.num_classes);
    take(o, keys, "height", d.image.height);
    take(o, keys, "width", d.image.width);
    take(o, keys, "regions", d.regions);
    take(o, keys, "rare_classes", d.rare_classes);
    take(o, keys, "rare_presence", d.rare_presence);
    take(o, keys, "rare_radius", d.rare_radius);
    take(o, keys, "noise", d.noise);
    take(o, keys, "target_offset", d.target_offset);
    take(o, keys, "target_noise_scale", d.target_noise_scale);
    reject_unknown(keys, "domain");
  }
  if (j.contains("dataset")) {
    top.erase("dataset");
    const auto& o = j.at("dataset");
    auto keys = keys_of(o, "dataset");
    take(o, keys, "source_images", cfg.dataset.source_images);
    take(o, keys, "target_images", cfg.dataset.target_images);
    take(o, keys, "eval_images", cfg.dataset.eval_images);
    reject_unknown(keys, "dataset");
  }
  if (j.contains("train")) {
    top.erase("train");
    const auto& o = j.at("train");
    auto keys = keys_of(o, "train");
    auto& t = cfg.train;
    take(o, keys, "iterations", t.iterations);
    take(o, keys, "learning_rate", t.learning_rate);
    take(o, keys, "tau", t.tau);
    take(o, keys, "alpha", t.alpha);
    take(o, keys, "mix_weight", t.mix_weight);
    take(o, keys, "init_scale", t.init_scale);
    take(o, keys, "seed", t.seed);
    if (o.contains("strategy")) {
      keys.erase("strategy");
      const auto& so = o.at("strategy");
      auto skeys = keys_of(so, "train.strategy");
      std::string sampler(to_string(t.strategy.sampler));
      std::string order(to_string(t.strategy.order));
      std::string kind(to_string(t.strategy.kind));
      take(so, skeys, "sampler", sampler);
      take(so, skeys, "order", order);
      take(so, skeys, "kind", kind);
      reject_unknown(skeys, "train.strategy");
      t.strategy = {parse_order(order), parse_kind(kind), parse_sampler(sampler)};
    }
    if (o.contains("schedule")) {
      keys.erase("schedule");
      const auto& so = o.at("schedule");
      auto skeys = keys_of(so, "train.schedule");
      auto& s = t.schedule;
      take(so, skeys, "a", s.a);
      take(so, skeys, "b", s.b);
      take(so, skeys, "reversed", s.reversed);
      take(so, skeys, "eta_min", s.eta_min);
      take(so, skeys, "eta_max", s.eta_max);
      take(so, skeys, "phase1_end", s.phase1_end);
      take(so, skeys, "phase3_start", s.phase3_start);
      reject_unknown(skeys, "train.schedule");
    }
    reject_unknown(keys, "train");
  }
  reject_unknown(top, "config");
  cfg.train.schedule.total_iters = cfg.train.iterations;
  cfg.validate();
  return cfg;
}

SimulationConfig load_simulation_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return simulation_config_from_json(j);
}

void run_mix(const MixOptions& opts) {
  int nc = opts.num_classes;
  std::optional<EcsState> ecs;
  if (opts.ecs) {
    ecs = read_ecs_csv(*opts.ecs);
    if (nc == 0) nc = ecs->num_classes();
  } else if (opts.strategy.sampler == Sampler::IMix) {
    throw ConfigError("mix: the informed sampler needs an ECS table (--ecs)");
  }

  LabelMap donor_labels = io::read_labels(opts.donor_labels, nc);
  LabelMap follower_labels = io::read_labels(opts.follower_labels, nc);
  if (nc == 0) {
    nc = std::max(donor_labels.num_classes(), follower_labels.num_classes());
    donor_labels = io::read_labels(opts.donor_labels, nc);
    follower_labels = io::read_labels(opts.follower_labels, nc);
  }
  if (!ecs) ecs.emplace(nc, 0.0);

  const LabeledImage donor{io::read_ppm(opts.donor_image), std::move(donor_labels)};
  const LabeledImage follower{io::read_ppm(opts.follower_image), std::move(follower_labels)};
  const MixedSample mixed = mix(donor, follower, opts.strategy, *ecs, opts.eta, opts.seed);

  ensure_dir(opts.out_dir);
  io::write_ppm(opts.out_dir / "x_m.ppm", mixed.image);
  io::write_pgm_labels(opts.out_dir / "y_m.pgm", mixed.labels);
  io::write_pgm_mask(opts.out_dir / "mask.pgm", mixed.mask);

  json inputs = {{"donor_image", git_blob_digest_file(opts.donor_image)},
                 {"donor_labels", git_blob_digest_file(opts.donor_labels)},
                 {"follower_image", git_blob_digest_file(opts.follower_image)},
                 {"follower_labels", git_blob_digest_file(opts.follower_labels)}};
  if (opts.ecs) inputs["ecs"] = git_blob_digest_file(*opts.ecs);
  json record = {{"selected_classes", mixed.selected_classes},
                 {"sampler", to_string(opts.strategy.sampler)},
                 {"order", to_string(opts.strategy.order)},
                 {"kind", to_string(opts.strategy.kind)},
                 {"eta", opts.eta},
                 {"seed", opts.seed},
                 {"num_classes", nc},
                 {"mask_pixels", mixed.mask.count()},
                 {"input_digests", inputs}};
  if (opts.strategy.sampler == Sampler::IMix) record["k"] = informed_class_count(opts.eta, nc);
  write_json(opts.out_dir / "mix.json", record);
}

void write_schedule_csv(std::ostream& out, const ScheduleConfig& cfg) {
  cfg.validate();
  out << "iteration,eta\n";
  for (std::size_t it = 0; it <= cfg.total_iters; ++it) out << it << ',' << fmt_double(eta_at(cfg, it)) << '\n';
}

void write_metrics_csv(const fs::path& path, const std::vector<IterationMetrics>& metrics) {
  auto out = open_out(path);
  const std::size_t nc = metrics.empty() ? 0 : metrics.front().ecs_source.size();
  out << "iteration,L_S,L_M,eta";
  for (std::size_t c = 0; c < nc; ++c) out << ",ecs_source_" << c;
  for (std::size_t c = 0; c < nc; ++c) out << ",ecs_target_" << c;
  out << '\n';
  for (const auto& m : metrics) {
    out << m.iteration << ',' << fmt_double(m.source_loss) << ',' << fmt_double(m.mix_loss) << ','
        << fmt_double(m.eta);
    for (double v : m.ecs_source) out << ',' << fmt_double(v);
    for (double v : m.ecs_target) out << ',' << fmt_double(v);
    out << '\n';
  }
}

SimulationResult run_simulate(const SimulationConfig& cfg, const fs::path& out_dir) {
  auto result = simulate(cfg);
  ensure_dir(out_dir);
  write_metrics_csv(out_dir / "metrics.csv", result.run.metrics);
  result.run.ecs_history.write_csv(out_dir / "ecs_history.csv");
  write_ecs_csv(out_dir / "final_ecs.csv", result.run.final_state.ecs);
  write_model(out_dir / "model.bin", result.run.final_state.student);
  {
    auto out = open_out(out_dir / "iou.csv");
    out << "class,iou,present\n";
    const auto& iou = result.evaluation.iou;
    for (std::size_t c = 0; c < iou.iou.size(); ++c) {
      out << c << ',' << fmt_double(iou.iou[c]) << ',' << (iou.present[c] ? 1 : 0) << '\n';
    }
  }

  const json config = to_json(cfg);
  json outputs;
  for (const char* name : {"metrics.csv", "iou.csv", "ecs_history.csv", "final_ecs.csv", "model.bin"}) {
    outputs[name] = git_blob_digest_file(out_dir / name);
  }
  write_json(out_dir / "manifest.json", {{"command", "simulate"},
                                         {"seed", cfg.train.seed},
                                         {"config_hash", git_blob_digest(config.dump())},
                                         {"config", config},
                                         {"miou", result.evaluation.iou.miou},
                                         {"outputs", outputs}});
  return result;
}

std::vector<CellResult> run_ablate(const AblateOptions& opts, const fs::path& out_dir) {
  std::vector<AblationCell> cells;
  if (opts.baseline) cells.push_back(classmix_baseline());
  if (opts.ratio_grid) {
    for (auto& c : ratio_grid()) cells.push_back(c);
  }
  if (opts.smoothness_grid) {
    for (auto& c : smoothness_grid()) cells.push_back(c);
  }
  if (cells.empty()) throw ConfigError("ablate: no grid selected");
  auto results = run_cells(opts.base, cells, opts.first_seed, opts.seeds);

  ensure_dir(out_dir);
  {
    auto out = open_out(out_dir / "ablation.csv");
    out << "grid,strategy,eta,tau,n,mean_miou,std_miou";
    for (std::size_t s = 0; s < opts.seeds; ++s) out << ",miou_seed_" << opts.first_seed + s;
    out << '\n';
    for (const auto& r : results) {
      out << r.cell.grid << ',' << label(r.cell.strategy) << ',' << r.cell.eta_label() << ','
          << fmt_double(r.cell.tau) << ',' << r.miou.size() << ',' << fmt_double(r.mean) << ','
          << fmt_double(r.stddev);
      for (double v : r.miou) out << ',' << fmt_double(v);
      out << '\n';
    }
  }
  const json config = to_json(opts.base);
  write_json(out_dir / "manifest.json", {{"command", "ablate"},
                                         {"first_seed", opts.first_seed},
                                         {"seeds", opts.seeds},
                                         {"config_hash", git_blob_digest(config.dump())},
                                         {"config", config},
                                         {"outputs", {{"ablation.csv", git_blob_digest_file(out_dir / "ablation.csv")}}}});
  return results;
}

std::vector<double> final_target_ecs(const fs::path& metrics_csv) {
  std::ifstream in(metrics_csv);
  if (!in) throw DataError("cannot open " + metrics_csv.string());
  std::string header;
  if (!std::getline(in, header)) throw DataError(metrics_csv.string() + ": empty file");
  std::string line;
  std::string last;
  while (std::getline(in, line)) {
    if (!line.empty()) last = line;
  }
  if (last.empty()) throw DataError(metrics_csv.string() + ": no metric rows");
  const auto names = split_csv_line(header);
  const auto cells = split_csv_line(last);
  if (names.size() != cells.size()) throw DataError(metrics_csv.string() + ": ragged last row");
  std::vector<double> ecs;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].rfind("ecs_target_", 0) == 0) ecs.push_back(parse_number(cells[i], metrics_csv));
  }
  if (ecs.empty()) throw DataError(metrics_csv.string() + ": no ecs_target columns");
  return ecs;
}

void run_report(const ReportOptions& opts) {
  if (opts.run_dirs.empty()) throw ConfigError("report: no run directories given");
  std::vector<EcsIouPair> pairs;
  json runs = json::array();
  for (const auto& dir : opts.run_dirs) {
    const auto ecs = final_target_ecs(dir / "metrics.csv");
    std::ifstream in(dir / "iou.csv");
    if (!in) throw DataError("cannot open " + (dir / "iou.csv").string());
    std::string line;
    std::getline(in, line);
    std::vector<EcsIouPair> run_pairs;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto cells = split_csv_line(line);
      if (cells.size() != 3) throw DataError((dir / "iou.csv").string() + ": expected class,iou,present");
      const auto cls = static_cast<std::size_t>(parse_number(cells[0], dir / "iou.csv"));
      if (cls >= ecs.size()) throw DataError((dir / "iou.csv").string() + ": class beyond metrics columns");
      if (cells[2] != "1") continue;
      run_pairs.push_back({ecs[cls], parse_number(cells[1], dir / "iou.csv")});
    }
    json entry = {{"run", dir.string()}, {"classes", run_pairs.size()}};
    try {
      entry["pearson"] = correlation(run_pairs);
    } catch (const Error&) {
      entry["pearson"] = nullptr;
    }
    runs.push_back(entry);
    pairs.insert(pairs.end(), run_pairs.begin(), run_pairs.end());
  }

  const auto bins = reliability(pairs, opts.bins);
  ensure_dir(opts.out_dir);
  {
    auto out = open_out(opts.out_dir / "reliability.csv");
    out << "ecs_low,ecs_high,count,mean_iou\n";
    for (const auto& b : bins) {
      out << fmt_double(b.ecs_low) << ',' << fmt_double(b.ecs_high) << ',' << b.count << ',';
      if (!b.empty()) out << fmt_double(b.mean_iou);
      out << '\n';
    }
  }
  json summary = {{"pairs", pairs.size()}, {"bins", opts.bins}, {"runs", runs}};
  try {
    summary["pearson"] = correlation(pairs);
  } catch (const UndefinedCorrelationError&) {
    summary["pearson"] = nullptr;
  }
  write_json(opts.out_dir / "report.json", summary);
}

}  // namespace ida::app

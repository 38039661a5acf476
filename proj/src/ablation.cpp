// SPDX-License-Identifier: Apache-2.0
#include "ida/ablation.hpp"

#include <cmath>
#include <cstdio>
#include <exception>

#include "ida/errors.hpp"

namespace ida {

SimulationConfig AblationCell::apply(const SimulationConfig& base) const {
  SimulationConfig cfg = base;
  cfg.train.strategy = strategy;
  cfg.train.tau = tau;
  if (fixed_eta) {
    cfg.train.schedule.eta_min = *fixed_eta;
    cfg.train.schedule.eta_max = *fixed_eta;
  }
  return cfg;
}

std::string AblationCell::eta_label() const {
  if (strategy.sampler == Sampler::ClassMix) return "half";
  if (!fixed_eta) return "dynamic";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", *fixed_eta);
  return buf;
}

std::vector<AblationCell> ratio_grid() {
  std::vector<AblationCell> cells;
  for (auto order : {MixOrder::SSTF, MixOrder::TSSF}) {
    for (auto kind : {ClassKind::Well, ClassKind::Under}) {
      const MixStrategy s{order, kind, Sampler::IMix};
      for (double eta : kAblationRatios) cells.push_back({"ratio", s, eta, 0.999});
      cells.push_back({"ratio", s, std::nullopt, 0.999});
    }
  }
  return cells;
}

std::vector<AblationCell> smoothness_grid() {
  std::vector<AblationCell> cells;
  for (double tau : kAblationTaus) {
    cells.push_back({"smoothness", MixStrategy{MixOrder::SSTF, ClassKind::Under, Sampler::IMix}, std::nullopt, tau});
  }
  return cells;
}

AblationCell classmix_baseline() {
  return {"baseline", MixStrategy{MixOrder::SSTF, ClassKind::Under, Sampler::ClassMix}, std::nullopt, 0.999};
}

std::vector<CellResult> run_cells(const SimulationConfig& base, const std::vector<AblationCell>& cells,
                                  std::uint64_t first_seed, std::size_t num_seeds) {
  if (num_seeds == 0) throw ConfigError("ablation: need at least one seed");
  for (const auto& c : cells) c.apply(base).validate();

  const std::size_t jobs = cells.size() * num_seeds;
  std::vector<double> miou(jobs, 0.0);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(jobs); ++j) {
    const auto job = static_cast<std::size_t>(j);
    try {
      SimulationConfig cfg = cells[job / num_seeds].apply(base);
      cfg.train.seed = first_seed + job % num_seeds;
      miou[job] = simulate(cfg).evaluation.iou.miou;
    } catch (...) {
#pragma omp critical(ida_ablation_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<CellResult> out;
  out.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellResult r{cells[c], std::vector<double>(miou.begin() + static_cast<std::ptrdiff_t>(c * num_seeds),
                                               miou.begin() + static_cast<std::ptrdiff_t>((c + 1) * num_seeds))};
    double sum = 0.0;
    for (double v : r.miou) sum += v;
    r.mean = sum / static_cast<double>(num_seeds);
    double ss = 0.0;
    for (double v : r.miou) ss += (v - r.mean) * (v - r.mean);
    r.stddev = num_seeds > 1 ? std::sqrt(ss / static_cast<double>(num_seeds - 1)) : 0.0;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ida

// SPDX-License-Identifier: Apache-2.0
#include "ida/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ida/errors.hpp"

namespace ida {

namespace {

void check_domain(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0)) throw RangeError("kumaraswamy: x = " + std::to_string(x) + " outside [0, 1]");
  if (!(a > 0.0) || !(b > 0.0)) throw RangeError("kumaraswamy: shape parameters must be > 0");
}

}  // namespace

double kcdf(double x, double a, double b) {
  check_domain(x, a, b);
  return 1.0 - std::pow(1.0 - std::pow(x, a), b);
}

double rkcdf(double x, double a, double b) {
  check_domain(x, a, b);
  return std::pow(1.0 - std::pow(x, a), b);
}

void ScheduleConfig::validate() const {
  if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("schedule: a and b must be > 0");
  if (!(eta_min >= 0.0 && eta_min <= eta_max && eta_max <= 1.0)) {
    throw ConfigError("schedule: require 0 <= eta_min <= eta_max <= 1");
  }
  if (!(phase1_end >= 0.0 && phase1_end <= phase3_start && phase3_start <= 1.0)) {
    throw ConfigError("schedule: require 0 <= phase1_end <= phase3_start <= 1");
  }
  if (total_iters < 1) throw ConfigError("schedule: total_iters must be >= 1");
}

ScheduleConfig ScheduleConfig::fixed(double eta, std::size_t total_iters) {
  ScheduleConfig cfg;
  cfg.eta_min = eta;
  cfg.eta_max = eta;
  cfg.total_iters = total_iters;
  return cfg;
}

double eta_at(const ScheduleConfig& cfg, std::size_t iter) {
  cfg.validate();
  if (iter > cfg.total_iters) {
    throw RangeError("eta_at: iteration " + std::to_string(iter) + " beyond K = " + std::to_string(cfg.total_iters));
  }
  const double high = cfg.reversed ? cfg.eta_max : cfg.eta_min;
  const double low = cfg.reversed ? cfg.eta_min : cfg.eta_max;
  const double x = static_cast<double>(iter) / static_cast<double>(cfg.total_iters);
  if (x < cfg.phase1_end) return high;
  if (x >= cfg.phase3_start) return low;

  const double t = std::clamp((x - cfg.phase1_end) / (cfg.phase3_start - cfg.phase1_end), 0.0, 1.0);
  const double span = cfg.eta_max - cfg.eta_min;
  const double eta = cfg.reversed ? cfg.eta_min + span * rkcdf(t, cfg.a, cfg.b)
                                  : cfg.eta_min + span * kcdf(t, cfg.a, cfg.b);
  return std::clamp(eta, cfg.eta_min, cfg.eta_max);
}

}  // namespace ida

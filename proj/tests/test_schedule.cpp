// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "ida/errors.hpp"
#include "ida/schedule.hpp"

using namespace ida;

namespace {

ScheduleConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> shape(0.2, 6.0), u(0.0, 1.0);
  ScheduleConfig cfg;
  cfg.a = shape(rng);
  cfg.b = shape(rng);
  cfg.eta_min = 0.5 * u(rng);
  cfg.eta_max = cfg.eta_min + (1.0 - cfg.eta_min) * u(rng);
  cfg.total_iters = 1 + rng() % 3000;
  cfg.phase1_end = 0.45 * u(rng);
  cfg.phase3_start = cfg.phase1_end + (1.0 - cfg.phase1_end) * u(rng);
  return cfg;
}

}  // namespace

TEST_CASE("kcdf and rkcdf examples") {
  for (double a : {0.5, 1.0, 2.0, 5.0})
    for (double b : {0.5, 1.0, 2.0, 5.0}) {
      CHECK(kcdf(0.0, a, b) == 0.0);
      CHECK(kcdf(1.0, a, b) == 1.0);
      CHECK(rkcdf(0.0, a, b) == 1.0);
      CHECK(rkcdf(1.0, a, b) == 0.0);
    }
  CHECK(kcdf(0.5, 2, 2) == 0.4375);
  CHECK(rkcdf(0.5, 2, 2) == 0.5625);
  for (int i = 0; i <= 1000; ++i) CHECK(std::abs(kcdf(i / 1000.0, 1, 1) - i / 1000.0) < 1e-12);

  CHECK_THROWS_AS(kcdf(-0.1, 2, 2), RangeError);
  CHECK_THROWS_AS(kcdf(1.1, 2, 2), RangeError);
  CHECK_THROWS_AS(rkcdf(0.5, 0.0, 2), RangeError);
  CHECK_THROWS_AS(kcdf(0.5, 2, -1), RangeError);
}

TEST_CASE("eta_at examples") {
  ScheduleConfig cfg;
  cfg.total_iters = 2000;
  CHECK(eta_at(cfg, 0) == cfg.eta_max);
  CHECK(eta_at(cfg, 2000) == cfg.eta_min);
  CHECK(eta_at(cfg, 1000) == doctest::Approx(0.3 + 0.4 * 0.5625).epsilon(1e-12));
  CHECK(eta_at(cfg, 1000) == doctest::Approx(0.525).epsilon(1e-12));
  CHECK_THROWS_AS(eta_at(cfg, 2001), RangeError);

  const auto fixed = ScheduleConfig::fixed(0.4, 50);
  for (std::size_t i = 0; i <= 50; ++i) CHECK(eta_at(fixed, i) == 0.4);

  ScheduleConfig bad;
  bad.eta_min = 0.8;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = ScheduleConfig{};
  bad.phase1_end = 0.9;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("property: kcdf monotone and complementary") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> shape(0.1, 8.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = shape(rng), b = shape(rng);
    double prev = 0.0;
    for (int i = 0; i <= 500; ++i) {
      const double x = i / 500.0;
      const double y = kcdf(x, a, b);
      CHECK(y >= prev);
      CHECK(std::abs(y + rkcdf(x, a, b) - 1.0) < 1e-12);
      prev = y;
    }
  }
}

TEST_CASE("property: eta_at monotone, bounded and continuous") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const auto cfg = random_config(rng);
    double prev = cfg.eta_max;
    for (std::size_t it = 0; it <= cfg.total_iters; ++it) {
      const double eta = eta_at(cfg, it);
      CHECK(eta <= prev);
      CHECK(eta >= cfg.eta_min);
      CHECK(eta <= cfg.eta_max);
      prev = eta;
    }
  }

  // Just inside phase two the curve starts at eta_max and ends at eta_min.
  ScheduleConfig cfg;
  cfg.total_iters = 1'000'000;
  const auto p1 = static_cast<std::size_t>(cfg.phase1_end * cfg.total_iters);
  const auto p3 = static_cast<std::size_t>(cfg.phase3_start * cfg.total_iters);
  CHECK(std::abs(eta_at(cfg, p1) - cfg.eta_max) < 1e-5);
  CHECK(std::abs(eta_at(cfg, p3 - 1) - cfg.eta_min) < 1e-5);
}

TEST_CASE("rising schedule mirrors the decreasing one") {
  ScheduleConfig down;
  down.total_iters = 100;
  ScheduleConfig up = down;
  up.reversed = false;
  CHECK(eta_at(up, 0) == up.eta_min);
  CHECK(eta_at(up, 100) == up.eta_max);
  for (std::size_t it = 0; it <= 100; ++it) {
    CHECK(eta_at(up, it) + eta_at(down, it) == doctest::Approx(down.eta_min + down.eta_max).epsilon(1e-12));
  }
}

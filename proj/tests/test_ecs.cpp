// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "ida/ecs.hpp"
#include "ida/errors.hpp"
#include "oracles.hpp"

using namespace ida;

TEST_CASE("measure_ecs examples") {
  const Shape s{2, 3};
  std::mt19937_64 rng(31);
  const auto membership = oracle::random_labels(s, 4, rng);
  const auto uniform = measure_ecs(ProbMap::uniform(s, 4), membership);
  for (int c : membership.present_classes()) CHECK(*uniform[static_cast<std::size_t>(c)] == 0.25);

  const auto confident = measure_ecs(ProbMap::one_hot(membership), membership);
  for (int c = 0; c < 4; ++c) {
    const auto& v = confident[static_cast<std::size_t>(c)];
    const auto hist = membership.histogram();
    CHECK(v.has_value() == (hist[static_cast<std::size_t>(c)] > 0));
    if (v) CHECK(*v == 1.0);
  }

  // Two class-0 pixels at 0.6 and 0.8, one class-1 pixel.
  ProbMap p(Shape{1, 3}, 3, std::vector<double>{0.6, 0.3, 0.1, 0.1, 0.8, 0.1, 0.2, 0.3, 0.5});
  LabelMap m(Shape{1, 3}, 3, std::vector<int>{0, 0, 1});
  const auto raw = measure_ecs(p, m);
  CHECK(*raw[0] == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(*raw[1] == 0.5);
  CHECK_FALSE(raw[2].has_value());

  CHECK_THROWS_AS(measure_ecs(ProbMap::uniform(Shape{2, 2}, 3), LabelMap(Shape{2, 3}, 3, 0)), DimensionError);
  CHECK_THROWS_AS(measure_ecs(ProbMap::uniform(s, 3), LabelMap(s, 4, 0)), DimensionError);
}

TEST_CASE("update examples") {
  EcsState st(3, 0.9);
  st.update(Domain::Source, {0.5, std::nullopt, std::nullopt});  // first sight replaces 1/C
  st.update(Domain::Source, {0.7, std::nullopt, std::nullopt});
  CHECK(st.snapshot(Domain::Source)[0] == doctest::Approx(0.52).epsilon(1e-15));

  EcsState raw_only(3, 0.0);
  raw_only.update(Domain::Target, {0.3, 0.1, std::nullopt});
  raw_only.update(Domain::Target, {0.6, std::nullopt, std::nullopt});
  CHECK(raw_only.snapshot(Domain::Target)[0] == 0.6);
  CHECK(raw_only.snapshot(Domain::Target)[1] == 0.1);  // carried forward

  EcsState carry(2, 0.5);
  carry.update(Domain::Source, {0.4, 0.9});
  carry.update(Domain::Source, {std::nullopt, 0.9});
  CHECK(carry.snapshot(Domain::Source)[0] == 0.4);

  CHECK_THROWS_AS(EcsState(3, 1.0), ConfigError);
  CHECK_THROWS_AS(EcsState(3, -0.1), ConfigError);
  CHECK_THROWS_AS(st.update(Domain::Source, {0.1, 0.2}), DimensionError);
}

TEST_CASE("snapshot examples") {
  EcsState st(5, 0.0);
  for (double v : st.snapshot(Domain::Source)) CHECK(v == 0.2);
  for (double v : st.snapshot(Domain::Target)) CHECK(v == 0.2);
  st.update(Domain::Source, {std::nullopt, std::nullopt, 0.9, std::nullopt, std::nullopt});
  const auto& snap = st.snapshot(Domain::Source);
  CHECK(snap[2] == 0.9);
  for (int c : {0, 1, 3, 4}) CHECK(snap[static_cast<std::size_t>(c)] == 0.2);
  CHECK(st.seen(Domain::Source)[2]);
  CHECK_FALSE(st.seen(Domain::Target)[2]);
}

TEST_CASE("functional update leaves the input untouched") {
  const EcsState st(2, 0.5);
  const auto next = update(st, Domain::Target, {0.8, std::nullopt});
  CHECK(st.snapshot(Domain::Target)[0] == 0.5);
  CHECK(next.snapshot(Domain::Target)[0] == 0.8);
}

TEST_CASE("property: geometric convergence to a constant raw value") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double tau = u(rng) * 0.99;
    const double c = u(rng);
    const double s0 = u(rng);
    EcsState st(1, tau);
    st.update(Domain::Source, {s0});
    double tj = 1.0;
    for (int j = 1; j <= 200; ++j) {
      st.update(Domain::Source, {c});
      tj *= tau;
      CHECK(std::abs(st.snapshot(Domain::Source)[0] - c) <= tj * std::abs(s0 - c) + 1e-12);
    }
  }
}

TEST_CASE("property: tau 0.999 moves each class by at most 0.001 per update") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  EcsState st(4, 0.999);
  st.update(Domain::Target, {0.5, 0.5, 0.5, 0.5});
  for (int step = 0; step < 2000; ++step) {
    const auto before = st.snapshot(Domain::Target);
    RawEcs raw(4);
    for (auto& r : raw) if (u(rng) < 0.8) r = u(rng);
    st.update(Domain::Target, raw);
    for (std::size_t c = 0; c < 4; ++c) CHECK(std::abs(st.snapshot(Domain::Target)[c] - before[c]) <= 0.001 + 1e-15);
  }
}

TEST_CASE("property: per-class independence within one update") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    RawEcs raw(5);
    for (auto& r : raw) if (u(rng) < 0.7) r = u(rng);
    EcsState all(5, 0.7);
    all.update(Domain::Source, raw);
    EcsState one_by_one(5, 0.7);
    for (std::size_t c = 5; c-- > 0;) {
      RawEcs single(5);
      single[c] = raw[c];
      one_by_one.update(Domain::Source, single);
    }
    CHECK(all.snapshot(Domain::Source) == one_by_one.snapshot(Domain::Source));
  }
}

TEST_CASE("property: measure_ecs matches the per-pixel oracle and lies in [1/C, 1]") {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 200; ++trial) {
    const Shape s{1 + rng() % 9, 1 + rng() % 9};
    const int nc = 2 + static_cast<int>(rng() % 9);
    const auto p = oracle::random_probs(s, nc, rng);
    const auto m = oracle::random_labels(s, nc, rng);
    const auto got = measure_ecs(p, m);
    const auto want = oracle::brute_force_ecs(p, m);
    REQUIRE(got.size() == want.size());
    for (std::size_t c = 0; c < got.size(); ++c) {
      REQUIRE(got[c].has_value() == want[c].has_value());
      if (!got[c]) continue;
      CHECK(std::abs(*got[c] - *want[c]) < 1e-12);
      CHECK(*got[c] >= 1.0 / nc - 1e-12);
      CHECK(*got[c] <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("ECS table and history round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "ida_test_ecs";
  std::filesystem::create_directories(dir);
  EcsState st(3, 0.0);
  st.update(Domain::Source, {0.125, 0.3, std::nullopt});
  st.update(Domain::Target, {std::nullopt, 0.9, 0.45});
  write_ecs_csv(dir / "ecs.csv", st);
  const auto back = read_ecs_csv(dir / "ecs.csv");
  CHECK(back.snapshot(Domain::Source) == st.snapshot(Domain::Source));
  CHECK(back.snapshot(Domain::Target) == st.snapshot(Domain::Target));

  EcsHistory h;
  h.record(0, Domain::Source, {0.125, std::nullopt, std::nullopt}, st);
  CHECK(h.rows().size() == 1);
  CHECK(h.rows()[0].cls == 0);
  h.write_csv(dir / "hist.csv");
  CHECK(std::filesystem::file_size(dir / "hist.csv") > 0);
}

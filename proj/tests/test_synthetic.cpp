// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <map>

#include "ida/errors.hpp"
#include "ida/synthetic.hpp"

using namespace ida;

TEST_CASE("generate_pair is deterministic") {
  const DomainPairConfig cfg;
  const auto a = generate_pair(cfg, 5);
  const auto b = generate_pair(cfg, 5);
  CHECK(a.source.image == b.source.image);
  CHECK(a.source.labels == b.source.labels);
  CHECK(a.target.image == b.target.image);
  CHECK(a.target.hidden_labels == b.target.hidden_labels);
  CHECK_FALSE(generate_pair(cfg, 6).source.labels == a.source.labels);
}

TEST_CASE("zero shift and zero noise give identical per-class colours") {
  DomainPairConfig cfg;
  cfg.noise = 0.0;
  cfg.target_offset = {0.0, 0.0, 0.0};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pair = generate_pair(cfg, seed);
    std::map<int, std::array<double, 3>> colour;
    auto visit = [&](const ImageGrid& img, const LabelMap& lab) {
      for (std::size_t p = 0; p < lab.shape().pixels(); ++p) {
        const std::array<double, 3> rgb{img.at(p, 0), img.at(p, 1), img.at(p, 2)};
        auto [it, inserted] = colour.emplace(lab[p], rgb);
        CHECK(it->second == rgb);
      }
    };
    visit(pair.source.image, pair.source.labels);
    visit(pair.target.image, pair.target.hidden_labels);
  }
}

TEST_CASE("rare classes stay under five percent of pixels") {
  const DomainPairConfig cfg;
  std::vector<std::size_t> counts(static_cast<std::size_t>(cfg.num_classes), 0);
  std::size_t total = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto pair = generate_pair(cfg, seed);
    for (const auto* labels : {&pair.source.labels, &pair.target.hidden_labels}) {
      const auto h = labels->histogram();
      for (std::size_t c = 0; c < h.size(); ++c) counts[c] += h[c];
      total += labels->shape().pixels();
    }
  }
  for (int c = cfg.common_classes(); c < cfg.num_classes; ++c) {
    const double share = static_cast<double>(counts[static_cast<std::size_t>(c)]) / static_cast<double>(total);
    CHECK(share > 0.0);
    CHECK(share < 0.05);
  }
  for (int c = 0; c < cfg.common_classes(); ++c) CHECK(counts[static_cast<std::size_t>(c)] > 0);
}

TEST_CASE("infeasible geometry is rejected") {
  DomainPairConfig cfg;
  cfg.regions = 2;
  CHECK_THROWS_AS(generate_pair(cfg, 0), ConfigError);
  cfg = DomainPairConfig{};
  cfg.num_classes = 13;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = DomainPairConfig{};
  cfg.rare_radius = 40;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = DomainPairConfig{};
  cfg.image = Shape{16, 16};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("build_dataset sizes and determinism") {
  DomainPairConfig domain;
  domain.image = Shape{32, 32};
  domain.rare_radius = 3;
  const DatasetConfig sizes{5, 4, 3};
  const auto d = build_dataset(domain, sizes, 1);
  CHECK(d.source.size() == 5);
  CHECK(d.target.size() == 4);
  CHECK(d.eval.size() == 3);
  CHECK(build_dataset(domain, sizes, 1).eval[2].image == d.eval[2].image);
  CHECK_THROWS_AS(build_dataset(domain, DatasetConfig{0, 1, 1}, 1), ConfigError);
}

// SPDX-License-Identifier: Apache-2.0
#include "ida/synthetic.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "ida/errors.hpp"
#include "ida/seed.hpp"

namespace ida {

namespace {

constexpr std::array<std::array<double, 3>, 12> kPalette{{
    {0.25, 0.25, 0.28},
    {0.55, 0.38, 0.30},
    {0.30, 0.58, 0.30},
    {0.45, 0.55, 0.80},
    {0.72, 0.68, 0.28},
    {0.78, 0.30, 0.38},
    {0.20, 0.40, 0.55},
    {0.60, 0.60, 0.60},
    {0.85, 0.55, 0.20},
    {0.35, 0.20, 0.50},
    {0.10, 0.70, 0.65},
    {0.90, 0.85, 0.80},
}};

enum Stream : std::uint64_t { kSourceLayout = 1, kTargetLayout = 2, kSourceTrain = 10, kTargetTrain = 11, kEval = 12 };

LabelMap make_layout(const DomainPairConfig& cfg, std::mt19937_64& rng) {
  const std::size_t h = cfg.image.height;
  const std::size_t w = cfg.image.width;
  const int common = cfg.common_classes();

  // Cell classes: a shuffled pass over every common class, then uniform picks.
  std::vector<int> cell_class(static_cast<std::size_t>(cfg.regions));
  std::vector<int> order(static_cast<std::size_t>(common));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_int_distribution<int> any_common(0, common - 1);
  for (std::size_t i = 0; i < cell_class.size(); ++i) {
    cell_class[i] = i < order.size() ? order[i] : any_common(rng);
  }

  std::uniform_real_distribution<double> ux(0.0, static_cast<double>(w));
  std::uniform_real_distribution<double> uy(0.0, static_cast<double>(h));
  std::vector<std::array<double, 2>> centres(cell_class.size());
  for (auto& c : centres) c = {uy(rng), ux(rng)};

  std::vector<int> data(h * w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double y = static_cast<double>(r) + 0.5;
      const double x = static_cast<double>(c) + 0.5;
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < centres.size(); ++k) {
        const double d = (centres[k][0] - y) * (centres[k][0] - y) + (centres[k][1] - x) * (centres[k][1] - x);
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      data[r * w + c] = cell_class[best];
    }
  }

  // Rare discs, fully inside the image.
  const int rad = cfg.rare_radius;
  std::bernoulli_distribution present(cfg.rare_presence);
  std::uniform_int_distribution<int> cy(rad, static_cast<int>(h) - 1 - rad);
  std::uniform_int_distribution<int> cx(rad, static_cast<int>(w) - 1 - rad);
  for (int cls = common; cls < cfg.num_classes; ++cls) {
    if (!present(rng)) continue;
    const int y0 = cy(rng);
    const int x0 = cx(rng);
    for (int dy = -rad; dy <= rad; ++dy) {
      for (int dx = -rad; dx <= rad; ++dx) {
        if (dy * dy + dx * dx > rad * rad) continue;
        data[static_cast<std::size_t>(y0 + dy) * w + static_cast<std::size_t>(x0 + dx)] = cls;
      }
    }
  }
  return LabelMap(cfg.image, cfg.num_classes, std::move(data));
}

ImageGrid render(const LabelMap& labels, const std::array<double, 3>& offset, double noise_std,
                 std::mt19937_64& rng) {
  ImageGrid image(labels.shape(), 3);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t p = 0; p < labels.shape().pixels(); ++p) {
    const auto& base = kPalette[static_cast<std::size_t>(labels[p])];
    for (std::size_t ch = 0; ch < 3; ++ch) {
      const double eps = noise_std > 0.0 ? noise_std * normal(rng) : 0.0;
      image.set(p, ch, base[ch] + offset[ch] + eps);
    }
  }
  return image;
}

}  // namespace

void DomainPairConfig::validate() const {
  if (num_classes < 2) throw ConfigError("domain: num_classes must be >= 2");
  if (num_classes > static_cast<int>(kPalette.size())) {
    throw ConfigError("domain: at most " + std::to_string(kPalette.size()) + " classes are supported");
  }
  if (rare_classes < 0 || rare_classes >= num_classes) throw ConfigError("domain: need at least one common class");
  if (regions < common_classes()) {
    throw ConfigError("domain: " + std::to_string(common_classes()) + " common classes do not fit in " +
                      std::to_string(regions) + " regions");
  }
  if (image.height < 2 || image.width < 2) throw ConfigError("domain: image must be at least 2x2");
  if (rare_classes > 0) {
    if (rare_radius < 0) throw ConfigError("domain: rare_radius must be >= 0");
    const auto side = static_cast<std::size_t>(2 * rare_radius + 1);
    if (side > image.height || side > image.width) throw ConfigError("domain: rare disc does not fit in the image");
    // Each rare class must stay under 5% of an image's pixels even in the worst case.
    if (static_cast<double>(side * side) >= 0.05 * static_cast<double>(image.pixels())) {
      throw ConfigError("domain: rare disc would cover 5% or more of the image");
    }
  }
  if (!(rare_presence >= 0.0 && rare_presence <= 1.0)) throw ConfigError("domain: rare_presence must lie in [0, 1]");
  if (!(noise >= 0.0) || !(target_noise_scale >= 0.0)) throw ConfigError("domain: noise must be >= 0");
}

std::array<double, 3> class_color(int cls) {
  if (cls < 0 || cls >= static_cast<int>(kPalette.size())) throw ConfigError("class_color: class out of range");
  return kPalette[static_cast<std::size_t>(cls)];
}

DomainPair generate_pair(const DomainPairConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 src_rng(derive_seed(seed, kSourceLayout));
  std::mt19937_64 tgt_rng(derive_seed(seed, kTargetLayout));
  auto src_labels = make_layout(cfg, src_rng);
  auto tgt_labels = make_layout(cfg, tgt_rng);
  auto src_image = render(src_labels, {0.0, 0.0, 0.0}, cfg.noise, src_rng);
  auto tgt_image = render(tgt_labels, cfg.target_offset, cfg.noise * cfg.target_noise_scale, tgt_rng);
  return {{std::move(src_image), std::move(src_labels)}, {std::move(tgt_image), std::move(tgt_labels)}};
}

Dataset build_dataset(const DomainPairConfig& domain, const DatasetConfig& sizes, std::uint64_t seed) {
  if (sizes.source_images == 0 || sizes.target_images == 0) throw ConfigError("dataset: training pools must be non-empty");
  if (sizes.eval_images == 0) throw ConfigError("dataset: evaluation set must be non-empty");
  Dataset ds;
  ds.source.reserve(sizes.source_images);
  ds.target.reserve(sizes.target_images);
  ds.eval.reserve(sizes.eval_images);
  for (std::size_t i = 0; i < sizes.source_images; ++i) {
    ds.source.push_back(generate_pair(domain, derive_seed(seed, kSourceTrain, i)).source);
  }
  for (std::size_t i = 0; i < sizes.target_images; ++i) {
    ds.target.push_back(generate_pair(domain, derive_seed(seed, kTargetTrain, i)).target);
  }
  for (std::size_t i = 0; i < sizes.eval_images; ++i) {
    ds.eval.push_back(generate_pair(domain, derive_seed(seed, kEval, i)).target);
  }
  return ds;
}

}  // namespace ida

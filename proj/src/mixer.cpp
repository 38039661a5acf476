// SPDX-License-Identifier: Apache-2.0
#include "ida/mixer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "ida/errors.hpp"

namespace ida {

std::string_view to_string(MixOrder v) { return v == MixOrder::SSTF ? "sstf" : "tssf"; }
std::string_view to_string(ClassKind v) { return v == ClassKind::Well ? "well" : "under"; }
std::string_view to_string(Sampler v) { return v == Sampler::ClassMix ? "classmix" : "imix"; }

std::string label(const MixStrategy& s) {
  std::string out(to_string(s.sampler));
  out += '-';
  out += to_string(s.order);
  if (s.sampler == Sampler::IMix) {
    out += '-';
    out += to_string(s.kind);
  }
  return out;
}

MixOrder parse_order(std::string_view s) {
  if (s == "sstf") return MixOrder::SSTF;
  if (s == "tssf") return MixOrder::TSSF;
  throw ConfigError("unknown mix order '" + std::string(s) + "' (expected sstf|tssf)");
}

ClassKind parse_kind(std::string_view s) {
  if (s == "well") return ClassKind::Well;
  if (s == "under") return ClassKind::Under;
  throw ConfigError("unknown class kind '" + std::string(s) + "' (expected well|under)");
}

Sampler parse_sampler(std::string_view s) {
  if (s == "classmix") return Sampler::ClassMix;
  if (s == "imix") return Sampler::IMix;
  throw ConfigError("unknown sampler '" + std::string(s) + "' (expected classmix|imix)");
}

ClassSelection class_sample(const LabelMap& donor_labels, std::uint64_t seed) {
  if (donor_labels.shape().pixels() == 0) throw DegenerateInputError("class_sample: empty donor label map");
  auto present = donor_labels.present_classes();
  const std::size_t take = present.size() / 2;

  // Partial Fisher-Yates: the first `take` slots become a uniform draw
  // without replacement.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < take; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, present.size() - 1);
    std::swap(present[i], present[pick(rng)]);
  }
  std::vector<int> chosen(present.begin(), present.begin() + static_cast<std::ptrdiff_t>(take));
  std::sort(chosen.begin(), chosen.end());
  auto mask = MixMask::from_classes(donor_labels, chosen);
  return {std::move(mask), std::move(chosen)};
}

std::size_t informed_class_count(double eta, int num_classes) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("allocation ratio must lie in [0, 1]");
  const auto k = std::lround(eta * static_cast<double>(num_classes));
  return static_cast<std::size_t>(std::max<long>(1, k));
}

ClassSelection i_sample(const LabelMap& donor_labels, std::span<const double> ecs, double eta, ClassKind kind) {
  if (ecs.size() != static_cast<std::size_t>(donor_labels.num_classes())) {
    throw ConfigError("i_sample: ECS vector length " + std::to_string(ecs.size()) + " != C = " +
                      std::to_string(donor_labels.num_classes()));
  }
  const std::size_t k = informed_class_count(eta, donor_labels.num_classes());
  auto present = donor_labels.present_classes();
  if (present.empty()) throw DegenerateInputError("i_sample: donor label map has no pixels");

  // present is ascending, so a stable sort keeps lower indices first on ties.
  std::stable_sort(present.begin(), present.end(), [&](int x, int y) {
    const double ex = ecs[static_cast<std::size_t>(x)];
    const double ey = ecs[static_cast<std::size_t>(y)];
    return kind == ClassKind::Under ? ex < ey : ex > ey;
  });
  present.resize(std::min(k, present.size()));
  std::sort(present.begin(), present.end());
  auto mask = MixMask::from_classes(donor_labels, present);
  return {std::move(mask), std::move(present)};
}

MixedSample mix(const LabeledImage& donor, const LabeledImage& follower, const MixStrategy& strategy,
                const EcsState& ecs, double eta, std::uint64_t seed) {
  const int nc = donor.labels.num_classes();
  if (follower.labels.num_classes() != nc || ecs.num_classes() != nc) {
    throw ConfigError("mix: donor, follower and ECS state disagree on the class count");
  }
  if (donor.image.shape() != donor.labels.shape() || follower.image.shape() != follower.labels.shape() ||
      donor.image.shape() != follower.image.shape()) {
    throw DimensionError("mix: donor and follower images/labels must share one shape");
  }

  ClassSelection sel;
  if (strategy.sampler == Sampler::ClassMix) {
    sel = class_sample(donor.labels, seed);
  } else {
    const Domain selecting = strategy.order == MixOrder::SSTF ? Domain::Source : Domain::Target;
    sel = i_sample(donor.labels, ecs.snapshot(selecting), eta, strategy.kind);
  }

  MixedSample out;
  out.image = masked_blend(donor.image, follower.image, sel.mask);
  out.labels = masked_blend(donor.labels, follower.labels, sel.mask);
  out.mask = std::move(sel.mask);
  out.selected_classes = std::move(sel.classes);
  return out;
}

}  // namespace ida

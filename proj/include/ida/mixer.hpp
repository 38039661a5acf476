// SPDX-License-Identifier: Apache-2.0
//
// Cross-domain class-region mixing: random ClassMix selection and the
// ECS-informed selection, composed into a mixed image/label pair.
#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ida/ecs.hpp"
#include "ida/grid.hpp"

namespace ida {

/// Which domain donates the selected class regions.
enum class MixOrder {
  SSTF,  // source selects, target follows
  TSSF,  // target selects, source follows
};
/// Which end of the ECS ranking informed selection takes.
enum class ClassKind { Well, Under };
enum class Sampler { ClassMix, IMix };

struct MixStrategy {
  MixOrder order = MixOrder::SSTF;
  ClassKind kind = ClassKind::Under;
  Sampler sampler = Sampler::IMix;

  friend bool operator==(const MixStrategy&, const MixStrategy&) = default;
};

std::string_view to_string(MixOrder v);
std::string_view to_string(ClassKind v);
std::string_view to_string(Sampler v);
/// e.g. "imix-sstf-under" or "classmix-sstf".
std::string label(const MixStrategy& s);

/// Throw ConfigError on unknown names.
MixOrder parse_order(std::string_view s);
ClassKind parse_kind(std::string_view s);
Sampler parse_sampler(std::string_view s);

struct ClassSelection {
  MixMask mask;
  std::vector<int> classes;  // ascending
};

/// floor(P / 2) distinct classes drawn uniformly without replacement from the
/// P classes present in `donor_labels`. Throws DegenerateInputError on an
/// empty map.
ClassSelection class_sample(const LabelMap& donor_labels, std::uint64_t seed);

/// Number of classes informed selection asks for: max(1, round(eta * C)).
std::size_t informed_class_count(double eta, int num_classes);

/// Ranks the classes present in `donor_labels` by `ecs` (ascending for Under,
/// descending for Well, lower index first on ties) and keeps the first
/// min(k, P) with k = informed_class_count(eta, C).
ClassSelection i_sample(const LabelMap& donor_labels, std::span<const double> ecs, double eta, ClassKind kind);

struct LabeledImage {
  ImageGrid image;
  LabelMap labels;
};

struct MixedSample {
  ImageGrid image;
  LabelMap labels;
  MixMask mask;
  std::vector<int> selected_classes;
};

/// Composes donor regions onto the follower. Under SSTF the donor is the
/// source sample (ground truth) and ranking uses source ECS; under TSSF the
/// donor is the target sample (pseudo-label) and ranking uses target ECS.
MixedSample mix(const LabeledImage& donor, const LabeledImage& follower, const MixStrategy& strategy,
                const EcsState& ecs, double eta, std::uint64_t seed);

}  // namespace ida

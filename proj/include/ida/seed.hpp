// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace ida {

/// Independent sub-seed for (stream, index) under a root seed (splitmix64 finaliser).
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index = 0) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (stream * 0x100000001b3ULL + index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace ida

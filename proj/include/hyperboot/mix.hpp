/*
Copyright 2026 The hyperboot Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstdint>
#include <span>

namespace hyperboot {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// Keyed 64-bit mix: finalize(key ^ finalize(value + golden)).
/// Bit-stable; used for edge presence and for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t key, std::uint64_t value) noexcept {
  return splitmix64_finalize(key ^ splitmix64_finalize(value + kGolden));
}

/// Positional fold of an ascending vertex sequence. Vertex i (0-based position)
/// enters as (v + 1) * golden * (2i + 1), chained through the finalizer so that
/// both the values and their positions matter.
constexpr std::uint64_t fold_vertices(std::span<const std::uint32_t> vertices) noexcept {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::uint64_t mult = kGolden * (2 * static_cast<std::uint64_t>(i) + 1);
    acc = splitmix64_finalize(acc + (static_cast<std::uint64_t>(vertices[i]) + 1) * mult);
  }
  return acc;
}

}  // namespace hyperboot

// Copyright 2026 The rsa2 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSA2_RNG_HPP_
#define RSA2_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace rsa2 {

// Seeded randomness used across the library. The mappings below are written
// out by hand instead of using <random> distributions, whose outputs differ
// across standard library implementations; this keeps seeded runs and golden
// files stable across platforms.

inline double uniform_unit(std::mt19937_64& rng) {
  // 53 uniform bits -> [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % n;
}

template <typename T>
void seeded_shuffle(std::vector<T>& values, std::mt19937_64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[uniform_below(rng, i)]);
  }
}

// Stable 64-bit content hash (FNV-1a), used for replay-cache keys and
// mock-provider scoring.
inline std::uint64_t fnv1a(const std::string& text,
                           std::uint64_t seed = 1469598103934665603ull) {
  std::uint64_t hash = seed;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace rsa2

#endif  // RSA2_RNG_HPP_

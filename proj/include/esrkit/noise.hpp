/* Copyright 2026 The Esrkit Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef ESRKIT_NOISE_HPP
#define ESRKIT_NOISE_HPP

#include <cstdint>
#include <vector>

#include "esrkit/mathutil.hpp"

namespace esrkit {

/// Counter-based deterministic noise: sample i depends only on (seed, i),
/// never on call order, so parallel and serial generation agree byte for
/// byte.
namespace noise {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform in (0, 1), strictly excluding the endpoints.
inline double uniform(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ index);
  return (static_cast<double>(bits >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

/// Standard normal deviate for counter index under the given seed.
inline double gaussian(std::uint64_t seed, std::uint64_t index) {
  return normal_quantile(uniform(seed, index));
}

/// Adds N(0, sigma^2) to each amplitude, keyed by (seed, index).
inline void add_gaussian(std::vector<double>& amplitudes, double sigma, std::uint64_t seed) {
  if (sigma == 0.0) return;
  for (std::size_t i = 0; i < amplitudes.size(); ++i)
    amplitudes[i] += sigma * gaussian(seed, static_cast<std::uint64_t>(i));
}

/// Uniform in (-1, 1).
inline double symmetric_uniform(std::uint64_t seed, std::uint64_t index) {
  return 2.0 * uniform(seed, index) - 1.0;
}

}  // namespace noise
}  // namespace esrkit

#endif  // ESRKIT_NOISE_HPP

// Copyright 2026 The semeq Authors
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

#ifndef SEMEQ_RANDOM_H_
#define SEMEQ_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <utility>

namespace semeq {

// All stochastic code paths take this engine explicitly.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives a child seed from a base seed and a list of indices. The result
// depends only on the values, never on call order or thread scheduling.
inline uint64_t DeriveSeed(uint64_t base,
                           std::initializer_list<uint64_t> keys) {
  uint64_t h = Mix64(base);
  for (uint64_t k : keys) h = Mix64(h ^ Mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

// Uniform double in [0, 1) from the top 53 bits of one engine draw. Used
// instead of std::uniform_real_distribution so sequences do not depend on
// the standard library implementation.
inline double UnitUniform(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Two independent standard normal draws (Marsaglia polar method).
inline std::pair<double, double> StandardNormalPair(Rng& rng) {
  for (;;) {
    const double u = 2.0 * UnitUniform(rng) - 1.0;
    const double v = 2.0 * UnitUniform(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      const double f = std::sqrt(-2.0 * std::log(s) / s);
      return {u * f, v * f};
    }
  }
}

// Uniform integer in [0, n).
inline int UniformIndex(Rng& rng, int n) {
  return static_cast<int>(UnitUniform(rng) * n);
}

}  // namespace semeq

#endif  // SEMEQ_RANDOM_H_

/**
 * \file coinvest/rng.hpp
 *
 * \brief Counter-based deterministic random streams.
 *
 * Every draw is a pure function of (seed, purpose, player, epoch, index),
 * so adding players, epochs, or draw sites never perturbs existing
 * streams, and results are identical regardless of evaluation order.
 *
 * <hr/>
 *
 * Copyright 2026 The coinvest authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef COINVEST_RNG_HPP
#define COINVEST_RNG_HPP

#include <cstdint>

namespace coinvest {

/// Stream purposes; part of the stream key so draw sites never collide.
enum class StreamPurpose : std::uint64_t {
  OpportunityCost = 0x01,
  LoadNoise = 0x02,
  RunSeed = 0x03,
  TestScratch = 0x7f,
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Mixes key components into a single 64-bit word.
inline std::uint64_t stream_word(std::uint64_t seed, StreamPurpose purpose,
                                 std::uint64_t a = 0, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  std::uint64_t h = detail::splitmix64(static_cast<std::uint64_t>(purpose));
  h = detail::splitmix64(h ^ a);
  h = detail::splitmix64(h ^ b);
  h = detail::splitmix64(h ^ c);
  return detail::splitmix64(seed ^ h);
}

/// Uniform draw in [0, 1) from the keyed stream; bit-stable across platforms.
inline double uniform01(std::uint64_t seed, StreamPurpose purpose,
                        std::uint64_t a = 0, std::uint64_t b = 0,
                        std::uint64_t c = 0) {
  const std::uint64_t w = stream_word(seed, purpose, a, b, c);
  return static_cast<double>(w >> 11) * 0x1.0p-53;
}

/// Uniform draw in [lo, hi].
inline double uniform(double lo, double hi, std::uint64_t seed,
                      StreamPurpose purpose, std::uint64_t a = 0,
                      std::uint64_t b = 0, std::uint64_t c = 0) {
  return lo + (hi - lo) * uniform01(seed, purpose, a, b, c);
}

}  // namespace coinvest

#endif  // COINVEST_RNG_HPP

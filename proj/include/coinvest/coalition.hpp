/**
 * \file coinvest/coalition.hpp
 *
 * \brief Coalition bitmask helpers. Bit 0 is the InP, bit i is SP_i.
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

#ifndef COINVEST_COALITION_HPP
#define COINVEST_COALITION_HPP

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace coinvest {

using Mask = std::uint32_t;

inline constexpr Mask kInPBit = 1u;

inline constexpr Mask player_bit(int player_index) {
  return Mask{1} << player_index;
}

inline constexpr bool mask_contains(Mask m, int player_index) {
  return (m & player_bit(player_index)) != 0;
}

inline constexpr bool has_inp(Mask m) { return (m & kInPBit) != 0; }

inline constexpr int sp_count(Mask m) {
  return std::popcount(m & ~kInPBit);
}

inline constexpr int member_count(Mask m) { return std::popcount(m); }

/// True when the coalition can generate value: InP plus at least one SP.
inline constexpr bool valid_coalition(Mask m) {
  return has_inp(m) && sp_count(m) > 0;
}

inline constexpr Mask full_mask(int num_players) {
  return (Mask{1} << num_players) - 1;
}

inline std::vector<int> mask_members(Mask m) {
  std::vector<int> out;
  for (int p = 0; m != 0; ++p, m >>= 1) {
    if (m & 1u) out.push_back(p);
  }
  return out;
}

std::string mask_to_string(Mask m);

}  // namespace coinvest

#endif  // COINVEST_COALITION_HPP

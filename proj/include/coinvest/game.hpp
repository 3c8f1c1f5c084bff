/**
 * \file coinvest/game.hpp
 *
 * \brief Coalitional-game layer: exact Shapley allocation and stability
 *        verification (coalitional, group, and strong individual
 *        rationality), plus a supermodularity diagnostic.
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

#ifndef COINVEST_GAME_HPP
#define COINVEST_GAME_HPP

#include <functional>
#include <span>
#include <vector>

#include "coinvest/coalition.hpp"

namespace coinvest {

using ValueFn = std::function<double(Mask)>;

/// Payoff split of one coalition's value; payoffs of non-members are zero.
struct Allocation {
  Mask coalition = 0;
  int epoch = 0;
  double value = 0.0;               // v(coalition)
  std::vector<double> payoffs;      // indexed by player

  bool empty() const { return coalition == 0; }
  double payoff(int player) const {
    return payoffs.empty() ? 0.0 : payoffs[static_cast<std::size_t>(player)];
  }
};

/// Outcome of the stability checks; all findings are fields, not faults.
struct StabilityReport {
  bool cr_ok = true;
  bool gr_ok = true;
  bool sir_ok = true;
  bool supermodular_ok = true;  // diagnostic only, never vetoes

  Mask worst_cr_subset = 0;
  double worst_cr_slack = 0.0;  // min over subsets of sum(x) - v(subset)
  double gr_gap = 0.0;          // sum(x) - v(S)
  std::vector<double> sir_slack;  // per player x_i - v_out_i; 0 for non-members

  Mask worst_sm_small = 0;  // R
  Mask worst_sm_large = 0;  // S in the supermodularity inequality
  int worst_sm_player = -1;
  double worst_sm_slack = 0.0;

  bool strongly_stable() const { return cr_ok && gr_ok && sir_ok; }
};

/// Exact subset-formula Shapley split of v over the coalition's members.
/// Empty coalition yields an empty allocation. Coalitions beyond 20
/// players are rejected (exhaustive enumeration bound).
Allocation shapley(Mask coalition, int num_players, const ValueFn& value_fn);

/// Verifies CR over all subsets, GR as an equality within tolerance, and
/// SIR against per-player opportunity costs; runs the supermodularity scan
/// (exhaustive up to 6 members, deterministically sampled above).
StabilityReport check_stability(const Allocation& alloc, const ValueFn& value_fn,
                                std::span<const double> v_out);

}  // namespace coinvest

#endif  // COINVEST_GAME_HPP

/**
 * \file coinvest/baselines.hpp
 *
 * \brief Static-participation benchmark schemes: one-shot capacity
 *        (static) and per-epoch capacity updates (update), both with a
 *        coalition fixed for the whole horizon.
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

#ifndef COINVEST_BASELINES_HPP
#define COINVEST_BASELINES_HPP

#include <vector>

#include "coinvest/coalition.hpp"
#include "coinvest/model.hpp"
#include "coinvest/parallel.hpp"

namespace coinvest {

enum class Scheme { Static, Update, Dynamic };

const char* scheme_name(Scheme s);

struct BaselineResult {
  Scheme scheme = Scheme::Static;
  Mask coalition = 0;
  bool participated = false;
  std::vector<double> capacities;    // per epoch; constant for Static
  std::vector<double> epoch_values;  // per epoch; Static spreads evenly
  double total_value = 0.0;
  /// Horizon Shapley split; filled by select_baseline_coalition.
  std::vector<double> per_player_cumulative;
  /// [epoch][player] payoffs; filled by select_baseline_coalition.
  std::vector<std::vector<double>> per_epoch_payoffs;
};

/// One capacity deployed up front and never reconfigured: maximizes
/// welfare over the whole horizon minus d*C + gamma*[C>0] + d'*K*Delta*C.
BaselineResult solve_static(const Scenario& scenario, Mask coalition,
                            Exec exec = Exec::Serial);

/// Fixed coalition, capacity re-optimized every epoch with the previous
/// epoch's capacity threaded through (greedy chain from zero).
BaselineResult solve_update(const Scenario& scenario, Mask coalition,
                            Exec exec = Exec::Serial);

/// Ex-post participation: over all coalitions with the InP and at least
/// one SP, keeps those whose horizon Shapley split passes CR/GR and gives
/// every member at least their cumulative realized opportunity cost, then
/// returns the best survivor. participated == false when none survives.
/// realized_v_out is [epoch][player].
BaselineResult select_baseline_coalition(
    Scheme scheme, const Scenario& scenario,
    const std::vector<std::vector<double>>& realized_v_out,
    Exec exec = Exec::Serial);

}  // namespace coinvest

#endif  // COINVEST_BASELINES_HPP

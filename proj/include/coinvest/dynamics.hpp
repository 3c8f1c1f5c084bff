/**
 * \file coinvest/dynamics.hpp
 *
 * \brief Per-epoch coalition formation with dynamic participation:
 *        candidate enumeration, transfer computation with the slack
 *        parameter epsilon, regulator selection, and the epoch loop.
 *
 * Transfers tie consecutive epochs together. An entrant pays a fee
 * f = (1-eps)*(x - v_out); a leaver pays a penalty
 * p = (1-eps)*(v_out - x_cf), where x_cf is the counterfactual payoff had
 * the previous coalition persisted. Persistent players receive
 * compensations covering their reconfiguration loss and opportunity gap;
 * totals balance exactly. eps in [0,1] tunes severity without affecting
 * which transitions are feasible.
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

#ifndef COINVEST_DYNAMICS_HPP
#define COINVEST_DYNAMICS_HPP

#include <optional>
#include <span>
#include <vector>

#include "coinvest/game.hpp"
#include "coinvest/planner.hpp"

namespace coinvest {

/// Budget-balanced transfer bundle for one epoch transition.
struct Transfers {
  std::vector<double> entry_fees;      // per player; entrants only
  std::vector<double> exit_penalties;  // per player; leavers only
  std::vector<double> compensations;   // per player; persistent only
  double epsilon = 1.0;
  double required_floor_total = 0.0;  // R: sum of compensation floors
  double pot_total = 0.0;             // T(eps) = fees + penalties

  double fee_total() const;
  double penalty_total() const;
  double compensation_total() const;
};

enum class Fallback { None, SustainedByInP, Dismantled };

/// One row of the per-epoch candidate diagnostics.
struct CandidateDiagnostics {
  Mask mask = 0;
  double value = 0.0;
  bool sir_ok = false;
  bool cr_ok = false;
  bool gr_ok = false;
  bool transfers_feasible = false;
};

/// A dynamic-compatible candidate, fully evaluated.
struct CompatibleCandidate {
  Mask mask = 0;
  Allocation allocation;
  Transfers transfers;
  StabilityReport stability;
  double value = 0.0;
};

/// Everything the engine decided at one epoch.
struct EpochOutcome {
  int epoch = 0;
  Mask coalition = 0;  // empty when no compatible coalition formed
  PlanResult plan;
  Allocation allocation;
  Allocation counterfactual;  // previous coalition re-planned at this epoch
  Transfers transfers;
  StabilityReport stability;
  Fallback fallback = Fallback::None;
  double inp_ledger = 0.0;  // off-coalition sustain/dismantle money
  double c_prev = 0.0;
  double c_next = 0.0;
  std::vector<double> opportunity;  // realized v_out per player
  std::vector<double> net_payoffs;  // x - f + c for members, -p for leavers
  std::vector<CandidateDiagnostics> candidates;
  std::vector<Mask> compatible;  // the feasible set F_k, ascending mask order
};

/// Full trajectory of one dynamic-scheme run.
struct DynamicRun {
  std::vector<EpochOutcome> epochs;
  double v_dyn = 0.0;           // sum of selected coalition values
  double ledger_total = 0.0;    // off-coalition InP money
  std::vector<double> cumulative_net;  // per player, transfers included
};

/// Shapley payoffs the previous coalition's members would receive if it
/// persisted at this epoch; empty when there is no previous coalition.
Allocation counterfactual_payoffs(Mask prev_coalition,
                                  const EpochValueTable& table);

/// Fee/penalty/compensation bundle for the transition prev -> next, or
/// nullopt when no budget-balanced bundle exists (a value, not a fault).
/// With no compensation floor the slack parameter is exactly 1 and all
/// transfers vanish.
std::optional<Transfers> candidate_transfers(Mask next, Mask prev,
                                             const Allocation& x_new,
                                             const Allocation& x_prev_cf,
                                             std::span<const double> v_out,
                                             const EpsilonPolicy& policy);

/// Evaluates every candidate coalition (InP plus at least one SP) for
/// stability and transfer feasibility. Returns the dynamic-compatible
/// set; fills per-candidate diagnostics if requested.
std::vector<CompatibleCandidate> enumerate_compatible(
    const Scenario& scenario, const EpochValueTable& table, Mask prev,
    const Allocation& x_prev_cf, std::span<const double> v_out, Exec exec,
    std::vector<CandidateDiagnostics>* diagnostics = nullptr);

/// Regulator choice: highest value, ties to the larger coalition, then to
/// the smaller bitmask. On an empty feasible set the InP picks the cheaper
/// of sustaining or dismantling the installed capacity (ties sustain).
EpochOutcome select_coalition(const std::vector<CompatibleCandidate>& feasible,
                              const Scenario& scenario,
                              const EpochValueTable& table, double c_prev);

/// Runs the epoch loop over the whole horizon.
DynamicRun run_dynamic(const Scenario& scenario, Exec exec = Exec::Serial);

}  // namespace coinvest

#endif  // COINVEST_DYNAMICS_HPP

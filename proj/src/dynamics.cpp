/**
 * \file dynamics.cpp
 *
 * \brief Coalition formation with dynamic participation.
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

#include "coinvest/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coinvest/loadgen.hpp"

namespace coinvest {

namespace {

double vec_total(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

double Transfers::fee_total() const { return vec_total(entry_fees); }
double Transfers::penalty_total() const { return vec_total(exit_penalties); }
double Transfers::compensation_total() const {
  return vec_total(compensations);
}

Allocation counterfactual_payoffs(Mask prev_coalition,
                                  const EpochValueTable& table) {
  if (prev_coalition == 0) {
    return Allocation{};
  }
  return shapley(prev_coalition, table.num_players,
                 [&table](Mask m) { return table.value(m); });
}

std::optional<Transfers> candidate_transfers(Mask next, Mask prev,
                                             const Allocation& x_new,
                                             const Allocation& x_prev_cf,
                                             std::span<const double> v_out,
                                             const EpsilonPolicy& policy) {
  const std::size_t n = v_out.size();
  Transfers t;
  t.entry_fees.assign(n, 0.0);
  t.exit_penalties.assign(n, 0.0);
  t.compensations.assign(n, 0.0);

  const double tol = tol_for(x_new.value);

  // Fee and penalty bases. An entrant whose payoff falls short of their
  // opportunity cost, or a leaver whose outside option falls short of the
  // counterfactual, makes the transition irrational: no bundle exists.
  std::vector<int> entrants, leavers, persistent;
  double pot_base = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const int player = static_cast<int>(p);
    const bool in_next = mask_contains(next, player);
    const bool in_prev = mask_contains(prev, player);
    if (in_next && in_prev) {
      persistent.push_back(player);
    } else if (in_next) {
      double base = x_new.payoff(player) - v_out[p];
      if (base < -tol) return std::nullopt;
      entrants.push_back(player);
      t.entry_fees[p] = std::max(base, 0.0);
      pot_base += t.entry_fees[p];
    } else if (in_prev) {
      double base = v_out[p] - x_prev_cf.payoff(player);
      if (base < -tol) return std::nullopt;
      leavers.push_back(player);
      t.exit_penalties[p] = std::max(base, 0.0);
      pot_base += t.exit_penalties[p];
    }
  }

  // Compensation floors: reconfiguration loss and opportunity gap.
  double floor_total = 0.0;
  std::vector<double> floors(n, 0.0);
  for (int player : persistent) {
    const std::size_t p = static_cast<std::size_t>(player);
    const double floor =
        std::max({0.0, x_prev_cf.payoff(player) - x_new.payoff(player),
                  v_out[p] - x_new.payoff(player)});
    floors[p] = floor;
    floor_total += floor;
  }
  t.required_floor_total = floor_total;

  if (floor_total <= tol) {
    // Nobody needs compensating: eps is exactly 1 and nothing is charged.
    t.epsilon = 1.0;
    std::fill(t.entry_fees.begin(), t.entry_fees.end(), 0.0);
    std::fill(t.exit_penalties.begin(), t.exit_penalties.end(), 0.0);
    t.required_floor_total = 0.0;
    t.pot_total = 0.0;
    return t;
  }

  if (pot_base + tol < floor_total) {
    return std::nullopt;  // fees and penalties cannot cover the floors
  }

  const double eps_max =
      std::clamp(1.0 - floor_total / pot_base, 0.0, 1.0);
  double eps = 0.0;
  switch (policy.mode) {
    case EpsilonMode::MidpointOfFeasible:
      eps = 0.5 * eps_max;  // average of the feasible bounds [0, eps_max]
      break;
    case EpsilonMode::Fixed:
      eps = std::clamp(policy.fixed_value, 0.0, eps_max);
      break;
  }
  t.epsilon = eps;

  double pot = 0.0;
  for (int player : entrants) {
    const std::size_t p = static_cast<std::size_t>(player);
    t.entry_fees[p] *= (1.0 - eps);
    pot += t.entry_fees[p];
  }
  for (int player : leavers) {
    const std::size_t p = static_cast<std::size_t>(player);
    t.exit_penalties[p] *= (1.0 - eps);
    pot += t.exit_penalties[p];
  }
  t.pot_total = pot;

  // Floors first, then the leftover pot split equally among persistent
  // players, so the balance holds as an equality.
  const double surplus_each =
      (pot - floor_total) / static_cast<double>(persistent.size());
  for (int player : persistent) {
    const std::size_t p = static_cast<std::size_t>(player);
    t.compensations[p] = floors[p] + surplus_each;
  }
  return t;
}

std::vector<CompatibleCandidate> enumerate_compatible(
    const Scenario& scenario, const EpochValueTable& table, Mask prev,
    const Allocation& x_prev_cf, std::span<const double> v_out, Exec exec,
    std::vector<CandidateDiagnostics>* diagnostics) {
  const int n_sps = scenario.num_sps();
  const std::size_t n_candidates = (std::size_t{1} << n_sps) - 1;

  struct Evaluated {
    CandidateDiagnostics diag;
    std::optional<CompatibleCandidate> compatible;
  };
  std::vector<Evaluated> rows(n_candidates);

  const ValueFn value_fn = [&table](Mask m) { return table.value(m); };

  for_each_index(n_candidates, exec, [&](std::size_t idx) {
    const Mask mask = kInPBit | (static_cast<Mask>(idx + 1) << 1);
    Evaluated& row = rows[idx];
    row.diag.mask = mask;
    row.diag.value = table.value(mask);

    Allocation alloc =
        shapley(mask, scenario.num_players(), value_fn);
    alloc.epoch = table.epoch;
    const StabilityReport stab = check_stability(alloc, value_fn, v_out);
    row.diag.sir_ok = stab.sir_ok;
    row.diag.cr_ok = stab.cr_ok;
    row.diag.gr_ok = stab.gr_ok;
    if (!stab.strongly_stable()) {
      return;
    }
    std::optional<Transfers> transfers = candidate_transfers(
        mask, prev, alloc, x_prev_cf, v_out, scenario.epsilon_policy);
    row.diag.transfers_feasible = transfers.has_value();
    if (!transfers) {
      return;
    }
    CompatibleCandidate c;
    c.mask = mask;
    c.allocation = std::move(alloc);
    c.transfers = std::move(*transfers);
    c.stability = stab;
    c.value = row.diag.value;
    row.compatible = std::move(c);
  });

  std::vector<CompatibleCandidate> feasible;
  for (Evaluated& row : rows) {  // ascending mask order
    if (diagnostics != nullptr) diagnostics->push_back(row.diag);
    if (row.compatible) feasible.push_back(std::move(*row.compatible));
  }
  return feasible;
}

EpochOutcome select_coalition(const std::vector<CompatibleCandidate>& feasible,
                              const Scenario& scenario,
                              const EpochValueTable& table, double c_prev) {
  EpochOutcome out;
  out.epoch = table.epoch;
  out.c_prev = c_prev;
  const std::size_t n = static_cast<std::size_t>(scenario.num_players());
  out.net_payoffs.assign(n, 0.0);
  out.transfers.entry_fees.assign(n, 0.0);
  out.transfers.exit_penalties.assign(n, 0.0);
  out.transfers.compensations.assign(n, 0.0);

  const CompatibleCandidate* best = nullptr;
  for (const CompatibleCandidate& c : feasible) {
    if (best == nullptr) {
      best = &c;
      continue;
    }
    if (c.value > best->value ||
        (c.value == best->value &&
         (member_count(c.mask) > member_count(best->mask) ||
          (member_count(c.mask) == member_count(best->mask) &&
           c.mask < best->mask)))) {
      best = &c;
    }
  }

  if (best != nullptr) {
    out.coalition = best->mask;
    out.plan = table.plan(best->mask);
    out.allocation = best->allocation;
    out.transfers = best->transfers;
    out.stability = best->stability;
    out.c_next = out.plan.capacity;
    for (std::size_t p = 0; p < n; ++p) {
      const int player = static_cast<int>(p);
      if (mask_contains(best->mask, player)) {
        out.net_payoffs[p] = best->allocation.payoff(player) -
                             best->transfers.entry_fees[p] +
                             best->transfers.compensations[p];
      } else {
        out.net_payoffs[p] = 0.0 - best->transfers.exit_penalties[p];
      }
    }
    return out;
  }

  // No compatible coalition: the InP keeps or clears the installed
  // capacity, whichever costs less; ties sustain (no intervention).
  const double sustain = 0.0 - scenario.cost.maintenance_rate() * c_prev;
  const double dismantle = 0.0 - cost(0.0, c_prev, scenario.cost);
  if (dismantle > sustain) {
    out.fallback = Fallback::Dismantled;
    out.inp_ledger = dismantle;
    out.c_next = 0.0;
  } else {
    out.fallback = Fallback::SustainedByInP;
    out.inp_ledger = sustain;
    out.c_next = c_prev;
  }
  return out;
}

DynamicRun run_dynamic(const Scenario& scenario, Exec exec) {
  scenario.validate();
  DynamicRun run;
  run.cumulative_net.assign(static_cast<std::size_t>(scenario.num_players()),
                            0.0);
  Mask prev = 0;
  double c_prev = 0.0;
  for (int epoch = 1; epoch <= scenario.grid.epochs; ++epoch) {
    const LoadMatrix loads = generate_loads(scenario, epoch);
    const std::vector<double> v_out = sample_opportunity_costs(scenario, epoch);
    const EpochValueTable table =
        evaluate_all_coalitions(scenario, loads, epoch, c_prev, exec);
    const Allocation x_cf = counterfactual_payoffs(prev, table);

    std::vector<CandidateDiagnostics> diags;
    std::vector<CompatibleCandidate> feasible =
        enumerate_compatible(scenario, table, prev, x_cf, v_out, exec, &diags);

    EpochOutcome outcome = select_coalition(feasible, scenario, table, c_prev);
    outcome.counterfactual = x_cf;
    outcome.opportunity = v_out;
    outcome.candidates = std::move(diags);
    outcome.compatible.reserve(feasible.size());
    for (const CompatibleCandidate& c : feasible) {
      outcome.compatible.push_back(c.mask);
    }

    if (outcome.coalition != 0) {
      run.v_dyn += outcome.plan.value;
    }
    run.ledger_total += outcome.inp_ledger;
    for (std::size_t p = 0; p < outcome.net_payoffs.size(); ++p) {
      run.cumulative_net[p] += outcome.net_payoffs[p];
    }

    prev = outcome.coalition;
    c_prev = outcome.c_next;
    run.epochs.push_back(std::move(outcome));
  }
  return run;
}

}  // namespace coinvest

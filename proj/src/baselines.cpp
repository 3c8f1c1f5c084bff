/**
 * \file baselines.cpp
 *
 * \brief Static and update benchmark schemes.
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

#include "coinvest/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "coinvest/game.hpp"
#include "coinvest/loadgen.hpp"
#include "coinvest/planner.hpp"

namespace coinvest {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Static: return "static";
    case Scheme::Update: return "update";
    case Scheme::Dynamic: return "dynamic";
  }
  return "?";
}

namespace {

constexpr int kMaxIterations = 200;

void require_valid(Mask coalition, const char* what) {
  if (!valid_coalition(coalition)) {
    throw std::domain_error(std::string(what) +
                            ": coalition needs the InP and at least one SP");
  }
}

std::vector<LoadMatrix> all_epoch_loads(const Scenario& scenario) {
  std::vector<LoadMatrix> loads;
  loads.reserve(static_cast<std::size_t>(scenario.grid.epochs));
  for (int k = 1; k <= scenario.grid.epochs; ++k) {
    loads.push_back(generate_loads(scenario, k));
  }
  return loads;
}

// Capacity where the summed welfare slope crosses theta (zero when it
// starts below theta already).
double slope_target(const std::vector<CoalitionSlots>& slots, double theta,
                    Exec exec) {
  auto slope = [&](double c) {
    double s = 0.0;
    for (const CoalitionSlots& cs : slots) s += cs.slope(c, exec);
    return s;
  };
  if (slope(0.0) <= theta) return 0.0;
  double hi = 1.0;
  for (int i = 0; i < 60 && slope(hi) > theta; ++i) hi *= 2.0;
  double lo = 0.0;
  const double cap_tol = 1e-6 * std::max(1.0, hi);
  int iters = 0;
  while (hi - lo > cap_tol && ++iters <= kMaxIterations) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > theta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BaselineResult solve_static(const Scenario& scenario, Mask coalition,
                            Exec exec) {
  require_valid(coalition, "solve_static");
  const int K = scenario.grid.epochs;
  const CostParams& cp = scenario.cost;
  const double horizon_maint = cp.maintenance_rate() * K;

  const std::vector<LoadMatrix> loads = all_epoch_loads(scenario);
  std::vector<CoalitionSlots> slots;
  slots.reserve(loads.size());
  for (const LoadMatrix& m : loads) {
    slots.emplace_back(scenario, m, coalition);
  }

  auto horizon_welfare = [&](double c) {
    double w = 0.0;
    for (const CoalitionSlots& cs : slots) w += cs.welfare(c, exec);
    return w;
  };

  BaselineResult out;
  out.scheme = Scheme::Static;
  out.coalition = coalition;
  out.capacities.assign(static_cast<std::size_t>(K), 0.0);
  out.epoch_values.assign(static_cast<std::size_t>(K), 0.0);

  double capacity = 0.0;
  double value = 0.0;  // no deployment: no cost, no intervention
  const double c_star = slope_target(slots, cp.d + horizon_maint, exec);
  if (c_star > 0.0) {
    const double v_star =
        horizon_welfare(c_star) -
        (cp.d * c_star + cp.gamma + horizon_maint * c_star);
    if (v_star > value) {  // deploying must strictly beat staying out
      capacity = c_star;
      value = v_star;
    }
  }

  std::fill(out.capacities.begin(), out.capacities.end(), capacity);
  for (int k = 0; k < K; ++k) {
    out.epoch_values[static_cast<std::size_t>(k)] = value / K;
  }
  out.total_value = value;
  return out;
}

BaselineResult solve_update(const Scenario& scenario, Mask coalition,
                            Exec exec) {
  require_valid(coalition, "solve_update");
  const int K = scenario.grid.epochs;
  const CostParams& cp = scenario.cost;
  const double maint = cp.maintenance_rate();

  const std::vector<LoadMatrix> loads = all_epoch_loads(scenario);
  std::vector<CoalitionSlots> slots;
  slots.reserve(loads.size());
  for (const LoadMatrix& m : loads) {
    slots.emplace_back(scenario, m, coalition);
  }

  // Horizon-coupled capacity trajectory. Candidate levels: each epoch's
  // stationary targets for the build/hold/release marginals, the best
  // constant level, the myopic chain's levels, and zero. The optimal
  // trajectory is then an exact DP over these; holding the constant level
  // reproduces the static plan, so the update scheme never falls below it.
  std::vector<double> candidates{0.0};
  candidates.push_back(slope_target(slots, cp.d + K * maint, exec));
  for (int k = 0; k < K; ++k) {
    const std::vector<CoalitionSlots> one{slots[static_cast<std::size_t>(k)]};
    candidates.push_back(slope_target(one, cp.d + maint, exec));
    candidates.push_back(slope_target(one, cp.kappa + maint, exec));
    candidates.push_back(slope_target(one, std::max(maint, 1e-12), exec));
  }
  {
    double c_prev = 0.0;
    for (int k = 1; k <= K; ++k) {
      const PlanResult plan = optimize_capacity(
          scenario, loads[static_cast<std::size_t>(k - 1)], coalition, c_prev,
          exec);
      candidates.push_back(plan.capacity);
      c_prev = plan.capacity;
    }
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<double> levels;
  for (double c : candidates) {
    if (levels.empty() || c > levels.back() + 1e-9 * std::max(1.0, c)) {
      levels.push_back(c);
    }
  }

  const std::size_t n_levels = levels.size();
  std::vector<std::vector<double>> welfare(
      static_cast<std::size_t>(K), std::vector<double>(n_levels, 0.0));
  for (int k = 0; k < K; ++k) {
    for (std::size_t v = 0; v < n_levels; ++v) {
      welfare[static_cast<std::size_t>(k)][v] =
          slots[static_cast<std::size_t>(k)].welfare(levels[v], exec);
    }
  }

  constexpr double kNegInf = -1e300;
  std::vector<std::vector<double>> best(
      static_cast<std::size_t>(K) + 1, std::vector<double>(n_levels, kNegInf));
  std::vector<std::vector<int>> from(
      static_cast<std::size_t>(K) + 1, std::vector<int>(n_levels, -1));
  const std::size_t start =
      static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(),
                                                0.0) -
                               levels.begin());
  best[0][start] = 0.0;
  for (int k = 1; k <= K; ++k) {
    for (std::size_t v = 0; v < n_levels; ++v) {
      double b = kNegInf;
      int arg = -1;
      for (std::size_t u = 0; u < n_levels; ++u) {
        if (best[static_cast<std::size_t>(k - 1)][u] <= kNegInf) continue;
        const double val = best[static_cast<std::size_t>(k - 1)][u] +
                           welfare[static_cast<std::size_t>(k - 1)][v] -
                           cost(levels[v], levels[u], cp);
        if (val > b) {
          b = val;
          arg = static_cast<int>(u);
        }
      }
      best[static_cast<std::size_t>(k)][v] = b;
      from[static_cast<std::size_t>(k)][v] = arg;
    }
  }

  std::size_t end = 0;
  for (std::size_t v = 1; v < n_levels; ++v) {
    if (best[static_cast<std::size_t>(K)][v] >
        best[static_cast<std::size_t>(K)][end]) {
      end = v;
    }
  }
  std::vector<double> trajectory(static_cast<std::size_t>(K), 0.0);
  {
    std::size_t v = end;
    for (int k = K; k >= 1; --k) {
      trajectory[static_cast<std::size_t>(k - 1)] = levels[v];
      v = static_cast<std::size_t>(from[static_cast<std::size_t>(k)][v]);
    }
  }

  BaselineResult out;
  out.scheme = Scheme::Update;
  out.coalition = coalition;
  out.capacities = trajectory;
  out.epoch_values.assign(static_cast<std::size_t>(K), 0.0);

  // Report epoch values through the planner's own accounting (gross from
  // allocations) so single-epoch results match optimize_capacity bit for
  // bit.
  const double scale = scenario.grid.scale_factor();
  double c_prev = 0.0;
  for (int k = 0; k < K; ++k) {
    const double c = trajectory[static_cast<std::size_t>(k)];
    PlanResult at_level;
    at_level.capacity = c;
    slots[static_cast<std::size_t>(k)].fill_allocations(c, exec, &at_level);
    double gross = 0.0;
    const LoadMatrix& m = loads[static_cast<std::size_t>(k)];
    for (int i = 1; i <= m.num_sps; ++i) {
      if (!mask_contains(coalition, i)) continue;
      const UtilityParams& u = scenario.sp(i).utility;
      for (int t = 0; t < m.num_slots; ++t) {
        gross += utility(u.beta, u.xi, m.at(i, t), at_level.allocation(i, t));
      }
    }
    const double value = scale * gross - cost(c, c_prev, cp);
    out.epoch_values[static_cast<std::size_t>(k)] = value;
    out.total_value += value;
    c_prev = c;
  }
  return out;
}

BaselineResult select_baseline_coalition(
    Scheme scheme, const Scenario& scenario,
    const std::vector<std::vector<double>>& realized_v_out, Exec exec) {
  if (scheme != Scheme::Static && scheme != Scheme::Update) {
    throw std::invalid_argument("select_baseline_coalition: not a baseline");
  }
  const int K = scenario.grid.epochs;
  const int n = scenario.num_players();
  const int n_sps = scenario.num_sps();
  if (static_cast<int>(realized_v_out.size()) != K) {
    throw std::invalid_argument(
        "select_baseline_coalition: need opportunity costs for every epoch");
  }

  // Horizon characteristic function per SP subset.
  const std::size_t n_masks = std::size_t{1} << n_sps;
  std::vector<BaselineResult> table(n_masks);
  for_each_index(n_masks, exec, [&](std::size_t spm) {
    if (spm == 0) return;  // degenerate: worth zero
    const Mask coalition = kInPBit | (static_cast<Mask>(spm) << 1);
    table[spm] = (scheme == Scheme::Static)
                     ? solve_static(scenario, coalition, Exec::Serial)
                     : solve_update(scenario, coalition, Exec::Serial);
  });
  const ValueFn horizon_value = [&table](Mask m) {
    if (!valid_coalition(m)) return 0.0;
    return table[(m & ~kInPBit) >> 1].total_value;
  };

  std::vector<double> cumulative_out(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < K; ++k) {
    for (int p = 0; p < n; ++p) {
      cumulative_out[static_cast<std::size_t>(p)] +=
          realized_v_out[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)];
    }
  }

  // Keep coalitions whose horizon split passes CR/GR and beats every
  // member's cumulative opportunity cost; pick the most valuable.
  Mask best_mask = 0;
  double best_value = 0.0;
  Allocation best_split;
  for (std::size_t spm = 1; spm < n_masks; ++spm) {
    const Mask mask = kInPBit | (static_cast<Mask>(spm) << 1);
    Allocation split = shapley(mask, n, horizon_value);
    const StabilityReport rep =
        check_stability(split, horizon_value, cumulative_out);
    if (!rep.strongly_stable()) continue;
    const double v = split.value;
    const bool wins =
        best_mask == 0 || v > best_value ||
        (v == best_value && (member_count(mask) > member_count(best_mask) ||
                             (member_count(mask) == member_count(best_mask) &&
                              mask < best_mask)));
    if (wins) {
      best_mask = mask;
      best_value = v;
      best_split = std::move(split);
    }
  }

  if (best_mask == 0) {
    BaselineResult none;
    none.scheme = scheme;
    none.participated = false;
    none.capacities.assign(static_cast<std::size_t>(K), 0.0);
    none.epoch_values.assign(static_cast<std::size_t>(K), 0.0);
    none.per_player_cumulative.assign(static_cast<std::size_t>(n), 0.0);
    none.per_epoch_payoffs.assign(static_cast<std::size_t>(K),
                                  std::vector<double>(static_cast<std::size_t>(n), 0.0));
    return none;
  }

  BaselineResult out = table[(best_mask & ~kInPBit) >> 1];
  out.participated = true;
  out.per_player_cumulative = best_split.payoffs;
  out.per_epoch_payoffs.assign(static_cast<std::size_t>(K),
                               std::vector<double>(static_cast<std::size_t>(n), 0.0));
  if (scheme == Scheme::Static) {
    // The up-front agreement spreads the horizon split evenly.
    for (int k = 0; k < K; ++k) {
      for (int p = 0; p < n; ++p) {
        out.per_epoch_payoffs[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)] =
            best_split.payoff(p) / K;
      }
    }
  } else {
    // Per-epoch Shapley of the chain's epoch games; these sum exactly to
    // the horizon split by additivity.
    for (int k = 0; k < K; ++k) {
      const ValueFn epoch_value = [&table, k](Mask m) {
        if (!valid_coalition(m)) return 0.0;
        return table[(m & ~kInPBit) >> 1]
            .epoch_values[static_cast<std::size_t>(k)];
      };
      const Allocation split_k = shapley(best_mask, n, epoch_value);
      out.per_epoch_payoffs[static_cast<std::size_t>(k)] = split_k.payoffs;
    }
  }
  return out;
}

}  // namespace coinvest

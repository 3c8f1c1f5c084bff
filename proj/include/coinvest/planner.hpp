/**
 * \file coinvest/planner.hpp
 *
 * \brief Per-epoch capacity planning: KKT water-filling slot allocation
 *        and the three-branch capacity optimizer.
 *
 * The slot subproblem maximizes sum_i beta_i*l_i*(1 - exp(-xi_i*h_i))
 * subject to sum h_i <= C, h >= 0. Its KKT solution is water-filling:
 * h_i = max(0, ln(w_i/lambda)/xi_i) with w_i the marginal utility at
 * h_i = 0 and lambda the common multiplier found by bisection.
 *
 * The capacity objective W(C) - Cost(C, C_prev) is discontinuous at
 * C = C_prev because of the fixed intervention charge, so the optimizer
 * evaluates the keep / increase / decrease branches independently and
 * returns the best, resolving ties to "keep".
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

#ifndef COINVEST_PLANNER_HPP
#define COINVEST_PLANNER_HPP

#include <span>
#include <vector>

#include "coinvest/coalition.hpp"
#include "coinvest/loadgen.hpp"
#include "coinvest/model.hpp"
#include "coinvest/parallel.hpp"

namespace coinvest {

/// Solver diagnostic bits; never silent.
enum PlanFlags : int {
  kLambdaIterationCap = 1,
  kCapacityIterationCap = 2,
};

/// Optimal plan of one coalition at one epoch.
struct PlanResult {
  double capacity = 0.0;  // C*
  /// Row-major |SPs| x slots allocation; rows of non-members are zero.
  std::vector<double> allocations;
  int num_slots = 0;
  double gross_utility = 0.0;  // scaled sum of per-slot revenues
  double total_cost = 0.0;     // Cost(C*, C_prev)
  double value = 0.0;          // gross_utility - total_cost
  int solver_flags = 0;

  double allocation(int sp_index, int slot) const {
    return allocations[static_cast<std::size_t>(sp_index - 1) *
                           static_cast<std::size_t>(num_slots) +
                       static_cast<std::size_t>(slot)];
  }
};

/// Water-filling result for a single slot.
struct SlotAllocation {
  std::vector<double> h;  // aligned with the input weights
  double lambda = 0.0;    // common multiplier; max weight when capacity == 0
  double welfare = 0.0;   // sum_i (w_i/xi_i)*(1 - lambda/w_i) over active i
  bool iteration_capped = false;
};

/// Allocates `capacity` across recipients with marginal scales `weights`
/// (the marginal utility at h = 0, any common scaling included by the
/// caller) and saturation rates `xis`. Degenerate inputs (zero capacity,
/// all-zero weights) fall to zero allocations.
SlotAllocation allocate_slot(std::span<const double> weights,
                             std::span<const double> xis, double capacity);

/// Precomputed per-slot water-filling inputs for one coalition's SPs.
/// Weights are scaled by the grid's scale factor, so welfare() returns
/// full-interval dollars directly.
class CoalitionSlots {
 public:
  CoalitionSlots(const Scenario& scenario, const LoadMatrix& loads,
                 Mask coalition);

  /// W(C), optionally with the slope dW/dC (the per-slot multiplier sum).
  /// Deterministic for any Exec: per-slot results are reduced in slot order.
  double welfare(double capacity, Exec exec, double* slope = nullptr,
                 int* flags = nullptr) const;

  /// dW/dC alone.
  double slope(double capacity, Exec exec, int* flags = nullptr) const;

  /// Fills a |SPs| x slots allocation matrix at the given capacity.
  void fill_allocations(double capacity, Exec exec, PlanResult* out) const;

  int num_slots() const { return num_slots_; }
  bool empty() const { return total_weight_ == 0.0; }

 private:
  struct Slot {
    std::vector<double> w;    // scaled marginal weights, > 0
    std::vector<double> lw;   // ln(w)
    std::vector<double> xi;
    std::vector<int> sp;      // SP index per entry
    double wmax = 0.0;
    double lwmax = 0.0;
    int argmax = -1;
  };

  struct SlotSolve {
    double lambda = 0.0;
    double log_lambda = 0.0;  // valid only when lambda came from bisection
    double welfare = 0.0;
    bool interior = false;    // bisection ran; log_lambda usable
    bool capped = false;
  };

  static SlotSolve solve(const Slot& slot, double capacity);

  friend SlotAllocation allocate_slot(std::span<const double> weights,
                                      std::span<const double> xis,
                                      double capacity);

  std::vector<Slot> slots_;
  int num_slots_ = 0;
  int num_sps_ = 0;
  double total_weight_ = 0.0;
};

/// Solves the planning problem for a coalition that contains the InP and
/// at least one SP; throws std::domain_error otherwise.
PlanResult optimize_capacity(const Scenario& scenario, const LoadMatrix& loads,
                             Mask coalition, double c_prev,
                             Exec exec = Exec::Serial);

/// Characteristic value of any coalition. Coalitions without the InP or
/// without any SP are worth exactly zero (capacity 0, no cost charged
/// here; off-coalition teardown is accounted by the dynamics ledger).
PlanResult plan_value(const Scenario& scenario, const LoadMatrix& loads,
                      Mask coalition, double c_prev, Exec exec = Exec::Serial);

/// Dense per-epoch characteristic-function table, keyed by coalition
/// bitmask at a fixed previous capacity. Shapley and the epoch enumeration
/// reuse it; building it is the parallel kernel of an epoch.
struct EpochValueTable {
  int epoch = 0;
  double c_prev = 0.0;
  int num_players = 0;
  std::vector<PlanResult> by_sp_mask;  // indexed by SP-only mask

  const PlanResult& plan(Mask coalition) const;
  double value(Mask coalition) const {
    return valid_coalition(coalition) ? plan(coalition).value : 0.0;
  }
};

EpochValueTable evaluate_all_coalitions(const Scenario& scenario,
                                        const LoadMatrix& loads, int epoch,
                                        double c_prev, Exec exec);

}  // namespace coinvest

#endif  // COINVEST_PLANNER_HPP

/**
 * \file planner.cpp
 *
 * \brief Water-filling slot allocation and capacity optimization.
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

#include "coinvest/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coinvest {

namespace {

constexpr int kMaxIterations = 200;

// Sum of h_i(lambda) = max(0, (lw_i - llambda)/xi_i) in the log domain.
double allocation_sum(const std::vector<double>& lw,
                      const std::vector<double>& xi, double llambda) {
  double sum = 0.0;
  for (std::size_t i = 0; i < lw.size(); ++i) {
    if (lw[i] > llambda) {
      sum += (lw[i] - llambda) / xi[i];
    }
  }
  return sum;
}

}  // namespace

CoalitionSlots::CoalitionSlots(const Scenario& scenario,
                               const LoadMatrix& loads, Mask coalition) {
  num_slots_ = loads.num_slots;
  num_sps_ = loads.num_sps;
  const double scale = scenario.grid.scale_factor();
  slots_.resize(static_cast<std::size_t>(num_slots_));
  for (int t = 0; t < num_slots_; ++t) {
    Slot& slot = slots_[static_cast<std::size_t>(t)];
    for (int i = 1; i <= num_sps_; ++i) {
      if (!mask_contains(coalition, i)) continue;
      const UtilityParams& u = scenario.sp(i).utility;
      const double w = scale * u.beta * loads.at(i, t) * u.xi;
      if (w <= 0.0) continue;
      slot.w.push_back(w);
      slot.lw.push_back(std::log(w));
      slot.xi.push_back(u.xi);
      slot.sp.push_back(i);
      if (w > slot.wmax) {
        slot.wmax = w;
        slot.lwmax = slot.lw.back();
        slot.argmax = static_cast<int>(slot.w.size()) - 1;
      }
      total_weight_ += w;
    }
  }
}

CoalitionSlots::SlotSolve CoalitionSlots::solve(const Slot& slot,
                                                double capacity) {
  SlotSolve out;
  if (slot.w.empty()) {
    return out;  // lambda 0, welfare 0
  }
  if (capacity <= 0.0) {
    // One-sided derivative at zero capacity: the steepest marginal wins.
    out.lambda = slot.wmax;
    return out;
  }

  // Bracket: at llambda = lwmax the allocation sum is zero; lowering
  // llambda so the steepest component alone absorbs the full capacity
  // guarantees the sum is at least the capacity.
  double lo = slot.lwmax - slot.xi[static_cast<std::size_t>(slot.argmax)] *
                               capacity;
  double hi = slot.lwmax;
  const double residual_tol = 1e-9 * std::max(1.0, capacity);
  double mid = 0.5 * (lo + hi);
  int iters = 0;
  while (true) {
    mid = 0.5 * (lo + hi);
    const double sum = allocation_sum(slot.lw, slot.xi, mid);
    if (std::abs(sum - capacity) <= residual_tol) break;
    if (hi - lo <= 1e-12) break;  // lambda pinned to 1e-12 relative
    if (++iters >= kMaxIterations) {
      out.capped = true;
      break;
    }
    if (sum > capacity) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  const double lambda = std::exp(mid);
  out.lambda = lambda;
  out.log_lambda = mid;
  out.interior = true;
  for (std::size_t i = 0; i < slot.w.size(); ++i) {
    if (slot.lw[i] > mid) {
      out.welfare += (slot.w[i] - lambda) / slot.xi[i];
    }
  }
  return out;
}

double CoalitionSlots::welfare(double capacity, Exec exec, double* slope,
                               int* flags) const {
  std::vector<SlotSolve> solves(slots_.size());
  for_each_index(slots_.size(), exec, [&](std::size_t t) {
    solves[t] = solve(slots_[t], capacity);
  });
  double w = 0.0;
  double s = 0.0;
  bool capped = false;
  for (const SlotSolve& sv : solves) {  // fixed slot order
    w += sv.welfare;
    s += sv.lambda;
    capped = capped || sv.capped;
  }
  if (slope != nullptr) *slope = s;
  if (flags != nullptr && capped) *flags |= kLambdaIterationCap;
  return w;
}

double CoalitionSlots::slope(double capacity, Exec exec, int* flags) const {
  double s = 0.0;
  welfare(capacity, exec, &s, flags);
  return s;
}

void CoalitionSlots::fill_allocations(double capacity, Exec exec,
                                      PlanResult* out) const {
  out->num_slots = num_slots_;
  out->allocations.assign(static_cast<std::size_t>(num_sps_) *
                              static_cast<std::size_t>(num_slots_),
                          0.0);
  if (capacity <= 0.0) return;
  for_each_index(slots_.size(), exec, [&](std::size_t t) {
    const Slot& slot = slots_[t];
    if (slot.w.empty()) return;
    const SlotSolve sv = solve(slot, capacity);
    const double llambda = sv.interior ? sv.log_lambda : slot.lwmax;
    double sum = 0.0;
    std::vector<double> h(slot.w.size(), 0.0);
    for (std::size_t i = 0; i < slot.w.size(); ++i) {
      if (slot.lw[i] > llambda) {
        h[i] = (slot.lw[i] - llambda) / slot.xi[i];
        sum += h[i];
      }
    }
    // Project onto the budget if bisection noise left a tiny excess.
    if (sum > capacity && sum > 0.0) {
      const double shrink = capacity / sum;
      for (double& v : h) v *= shrink;
    }
    for (std::size_t i = 0; i < slot.w.size(); ++i) {
      out->allocations[static_cast<std::size_t>(slot.sp[i] - 1) *
                           static_cast<std::size_t>(num_slots_) +
                       t] = h[i];
    }
  });
}

SlotAllocation allocate_slot(std::span<const double> weights,
                             std::span<const double> xis, double capacity) {
  if (weights.size() != xis.size()) {
    throw std::invalid_argument("allocate_slot: weights/xis size mismatch");
  }
  SlotAllocation out;
  out.h.assign(weights.size(), 0.0);

  CoalitionSlots::Slot slot;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0 || xis[i] <= 0.0) continue;
    slot.w.push_back(weights[i]);
    slot.lw.push_back(std::log(weights[i]));
    slot.xi.push_back(xis[i]);
    slot.sp.push_back(static_cast<int>(i));
    if (weights[i] > slot.wmax) {
      slot.wmax = weights[i];
      slot.lwmax = slot.lw.back();
      slot.argmax = static_cast<int>(slot.w.size()) - 1;
    }
  }

  const CoalitionSlots::SlotSolve sv = CoalitionSlots::solve(slot, capacity);
  out.lambda = sv.lambda;
  out.welfare = sv.welfare;
  out.iteration_capped = sv.capped;
  if (capacity <= 0.0 || slot.w.empty()) {
    return out;
  }
  const double llambda = sv.interior ? sv.log_lambda : slot.lwmax;
  double sum = 0.0;
  for (std::size_t i = 0; i < slot.w.size(); ++i) {
    if (slot.lw[i] > llambda) {
      const double h = (slot.lw[i] - llambda) / slot.xi[i];
      out.h[static_cast<std::size_t>(slot.sp[i])] = h;
      sum += h;
    }
  }
  if (sum > capacity && sum > 0.0) {
    const double shrink = capacity / sum;
    for (double& v : out.h) v *= shrink;
  }
  return out;
}

namespace {

// Stationary point of the concave branch objective: W'(C) = theta on
// [lo, hi], assuming W'(lo) >= theta >= W'(hi).
double bisect_capacity(const CoalitionSlots& cs, double lo, double hi,
                       double theta, double cap_tol, Exec exec, int* flags) {
  int iters = 0;
  while (hi - lo > cap_tol) {
    if (++iters > kMaxIterations) {
      if (flags != nullptr) *flags |= kCapacityIterationCap;
      break;
    }
    const double mid = 0.5 * (lo + hi);
    if (cs.slope(mid, exec, flags) > theta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct BranchCandidate {
  double capacity = 0.0;
  double objective = 0.0;  // W(C) - Cost(C, c_prev)
  bool present = false;
};

}  // namespace

PlanResult optimize_capacity(const Scenario& scenario, const LoadMatrix& loads,
                             Mask coalition, double c_prev, Exec exec) {
  if (!valid_coalition(coalition)) {
    throw std::domain_error(
        "optimize_capacity: coalition needs the InP and at least one SP");
  }
  if (c_prev < 0.0) {
    throw std::domain_error("optimize_capacity: negative previous capacity");
  }

  const CostParams& cp = scenario.cost;
  const double maint = cp.maintenance_rate();
  const CoalitionSlots cs(scenario, loads, coalition);
  int flags = 0;

  // Keep branch: identical capacity by value copy, no intervention charge.
  BranchCandidate keep;
  keep.present = true;
  keep.capacity = c_prev;
  keep.objective = cs.welfare(c_prev, exec, nullptr, &flags) - maint * c_prev;

  const double slope0 = cs.slope(0.0, exec, &flags);
  const double slope_prev =
      (c_prev > 0.0) ? cs.slope(c_prev, exec, &flags) : slope0;

  // Search ceiling: marginal welfare below pure maintenance can never pay.
  const double ceiling_threshold = std::max(maint, 1e-12 * std::max(1.0, slope0));
  double c_hi = std::max(1.0, c_prev);
  for (int i = 0; i < 60 && cs.slope(c_hi, exec, &flags) > ceiling_threshold;
       ++i) {
    c_hi *= 2.0;
  }
  const double cap_tol = 1e-6 * std::max(1.0, c_hi);

  BranchCandidate increase;
  const double theta_up = cp.d + maint;
  if (slope_prev > theta_up) {
    increase.present = true;
    increase.capacity =
        bisect_capacity(cs, c_prev, c_hi, theta_up, cap_tol, exec, &flags);
    increase.objective =
        cs.welfare(increase.capacity, exec, nullptr, &flags) -
        (cp.d * (increase.capacity - c_prev) + cp.gamma +
         maint * increase.capacity);
  }

  BranchCandidate decrease;
  const double theta_down = cp.kappa + maint;
  if (c_prev > 0.0 && slope_prev < theta_down) {
    decrease.present = true;
    if (slope0 <= theta_down) {
      decrease.capacity = 0.0;  // corner: dismantle entirely
    } else {
      decrease.capacity =
          bisect_capacity(cs, 0.0, c_prev, theta_down, cap_tol, exec, &flags);
    }
    decrease.objective =
        cs.welfare(decrease.capacity, exec, nullptr, &flags) -
        (-cp.kappa * (c_prev - decrease.capacity) + cp.gamma +
         maint * decrease.capacity);
  }

  // Ties resolve to keep: an intervention must strictly beat it.
  double vmax = keep.objective;
  for (const BranchCandidate* b : {&increase, &decrease}) {
    if (b->present) vmax = std::max(vmax, b->objective);
  }
  const BranchCandidate* chosen = &keep;
  if (keep.objective < vmax - tol_for(vmax)) {
    chosen = (increase.present &&
              (!decrease.present || increase.objective >= decrease.objective))
                 ? &increase
                 : &decrease;
  }

  PlanResult out;
  out.capacity = chosen->capacity;
  out.solver_flags = flags;
  cs.fill_allocations(out.capacity, exec, &out);

  // Gross utility recomputed from the stored allocations so the result is
  // self-consistent; branch comparison noise stays within solver tolerance.
  const double scale = scenario.grid.scale_factor();
  double gross = 0.0;
  for (int i = 1; i <= loads.num_sps; ++i) {
    if (!mask_contains(coalition, i)) continue;
    const UtilityParams& u = scenario.sp(i).utility;
    for (int t = 0; t < loads.num_slots; ++t) {
      gross += utility(u.beta, u.xi, loads.at(i, t), out.allocation(i, t));
    }
  }
  out.gross_utility = scale * gross;
  out.total_cost = cost(out.capacity, c_prev, cp);
  out.value = out.gross_utility - out.total_cost;
  return out;
}

PlanResult plan_value(const Scenario& scenario, const LoadMatrix& loads,
                      Mask coalition, double c_prev, Exec exec) {
  if (!valid_coalition(coalition)) {
    PlanResult zero;
    zero.num_slots = loads.num_slots;
    zero.allocations.assign(static_cast<std::size_t>(loads.num_sps) *
                                static_cast<std::size_t>(loads.num_slots),
                            0.0);
    return zero;
  }
  return optimize_capacity(scenario, loads, coalition, c_prev, exec);
}

const PlanResult& EpochValueTable::plan(Mask coalition) const {
  const Mask spm = (coalition & ~kInPBit) >> 1;
  return by_sp_mask[spm];
}

EpochValueTable evaluate_all_coalitions(const Scenario& scenario,
                                        const LoadMatrix& loads, int epoch,
                                        double c_prev, Exec exec) {
  EpochValueTable table;
  table.epoch = epoch;
  table.c_prev = c_prev;
  table.num_players = scenario.num_players();
  const std::size_t n_masks = std::size_t{1} << scenario.num_sps();
  table.by_sp_mask.resize(n_masks);
  for_each_index(n_masks, exec, [&](std::size_t spm) {
    const Mask coalition = kInPBit | (static_cast<Mask>(spm) << 1);
    table.by_sp_mask[spm] =
        plan_value(scenario, loads, coalition, c_prev, Exec::Serial);
  });
  return table;
}

}  // namespace coinvest

/**
 * \file coinvest/loadgen.hpp
 *
 * \brief Deterministic per-SP per-slot traffic loads and per-epoch
 *        opportunity-cost draws.
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

#ifndef COINVEST_LOADGEN_HPP
#define COINVEST_LOADGEN_HPP

#include <cstddef>
#include <vector>

#include "coinvest/model.hpp"

namespace coinvest {

/// Row-major |SPs| x slots_per_epoch matrix of requests per slot.
struct LoadMatrix {
  int num_sps = 0;
  int num_slots = 0;
  std::vector<double> values;
  int clamp_count = 0;  // slots clamped to zero because harmonics dipped below

  double at(int sp_index, int slot) const {
    return values[static_cast<std::size_t>(sp_index - 1) *
                      static_cast<std::size_t>(num_slots) +
                  static_cast<std::size_t>(slot)];
  }
  double row_sum(int sp_index) const;
};

/// Diurnal baseline a0 + sum_m a_m*sin(2*pi*m*(hour - t_m)/24).
double diurnal_baseline(const LoadParams& params, double slot_hour);

/// l = B*S*L*rho for every SP and slot of the epoch, clamped at zero.
/// Deterministic given (scenario, seed, epoch).
LoadMatrix generate_loads(const Scenario& scenario, int epoch);

/// Per-player opportunity costs for the epoch; index 0 is the InP.
/// Each SP draws independently from its U(a, b) keyed by (seed, player,
/// epoch); an InP with fixed_zero_for_inp gets exactly zero.
std::vector<double> sample_opportunity_costs(const Scenario& scenario,
                                             int epoch);

}  // namespace coinvest

#endif  // COINVEST_LOADGEN_HPP

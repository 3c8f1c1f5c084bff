/**
 * \file test_scenarios.hpp
 *
 * \brief Small randomized scenarios for solver and dynamics tests.
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

#ifndef COINVEST_TESTS_TEST_SCENARIOS_HPP
#define COINVEST_TESTS_TEST_SCENARIOS_HPP

#include <cstdint>

#include "coinvest/model.hpp"
#include "coinvest/rng.hpp"

namespace coinvest::testing {

/// Desk-size scenario with production cost ratios: one-year intervals
/// represented by a handful of slots (large scale factor), so money
/// magnitudes and the maintenance-dominated cost structure match the
/// shipped defaults. Opportunity ranges are caller-chosen so coalition
/// churn actually happens.
inline Scenario small_scenario(int sps, int epochs, int slots,
                               std::uint64_t salt, double opp_lo = 0.0,
                               double opp_hi = 0.0) {
  Scenario s;
  s.seed = 9000 + salt;
  s.grid.epochs = epochs;
  s.grid.slots_per_epoch = slots;
  s.grid.rho_hours = 1.0;
  s.grid.delta_hours = 8760.0;
  s.cost = CostParams{};  // production defaults

  PlayerProfile inp;
  inp.id = PlayerId{PlayerKind::InP, 0};
  inp.opportunity.fixed_zero_for_inp = true;
  s.players.push_back(inp);

  for (int i = 1; i <= sps; ++i) {
    PlayerProfile sp;
    sp.id = PlayerId{PlayerKind::SP, i};
    sp.utility.beta = 6e-6;
    sp.utility.xi = 0.03;
    for (int k = 0; k < epochs; ++k) {
      sp.load.traffic_level.push_back(
          3e6 + 2e7 * uniform01(salt, StreamPurpose::TestScratch, i, 51 + k));
    }
    sp.load.diurnal_a0 = 1.0;
    sp.load.harmonics = {
        Harmonic{0.3 * uniform01(salt, StreamPurpose::TestScratch, i, 60),
                 24.0 * uniform01(salt, StreamPurpose::TestScratch, i, 61)}};
    sp.opportunity = OpportunityCostModel{opp_lo, opp_hi, false};
    s.players.push_back(sp);
  }
  return s;
}

/// Like small_scenario, but demand follows a production-shaped trajectory
/// (jittered base level with a pronounced mid-horizon dip) instead of
/// independent per-epoch draws.
inline Scenario trajectory_scenario(int sps, int epochs, int slots,
                                    std::uint64_t salt, double opp_lo = 0.0,
                                    double opp_hi = 0.0) {
  Scenario s = small_scenario(sps, epochs, slots, salt, opp_lo, opp_hi);
  for (int i = 1; i <= sps; ++i) {
    const double base =
        8e6 + 1.4e7 * uniform01(salt, StreamPurpose::TestScratch, i, 70);
    auto& levels = s.players[static_cast<std::size_t>(i)].load.traffic_level;
    for (int k = 0; k < epochs; ++k) {
      const double jitter =
          0.85 + 0.3 * uniform01(salt, StreamPurpose::TestScratch, i, 71 + k);
      const bool dip = epochs >= 3 && k == epochs / 2;
      levels[static_cast<std::size_t>(k)] = base * jitter * (dip ? 0.5 : 1.0);
    }
  }
  return s;
}

}  // namespace coinvest::testing

#endif  // COINVEST_TESTS_TEST_SCENARIOS_HPP

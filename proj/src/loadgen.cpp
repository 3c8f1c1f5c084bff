/**
 * \file loadgen.cpp
 *
 * \brief Traffic-load and opportunity-cost generation.
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

#include "coinvest/loadgen.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "coinvest/rng.hpp"

namespace coinvest {

double LoadMatrix::row_sum(int sp_index) const {
  double total = 0.0;
  for (int t = 0; t < num_slots; ++t) {
    total += at(sp_index, t);
  }
  return total;
}

double diurnal_baseline(const LoadParams& params, double slot_hour) {
  double level = params.diurnal_a0;
  int m = 0;
  for (const Harmonic& h : params.harmonics) {
    ++m;
    level += h.amplitude *
             std::sin(2.0 * std::numbers::pi * m * (slot_hour - h.phase_hours) /
                      24.0);
  }
  return level;
}

namespace {

double seasonal_multiplier(const Seasonal& s, long global_slot) {
  if (s.period_slots <= 0 || s.amplitude == 0.0) {
    return 1.0;
  }
  return 1.0 + s.amplitude * std::sin(2.0 * std::numbers::pi *
                                      static_cast<double>(global_slot) /
                                      static_cast<double>(s.period_slots));
}

void check_epoch(const Scenario& scenario, int epoch) {
  if (epoch < 1 || epoch > scenario.grid.epochs) {
    throw std::out_of_range("epoch out of range");
  }
}

}  // namespace

LoadMatrix generate_loads(const Scenario& scenario, int epoch) {
  check_epoch(scenario, epoch);
  const TimeGrid& grid = scenario.grid;
  LoadMatrix m;
  m.num_sps = scenario.num_sps();
  m.num_slots = grid.slots_per_epoch;
  m.values.assign(static_cast<std::size_t>(m.num_sps) *
                      static_cast<std::size_t>(m.num_slots),
                  0.0);

  for (int i = 1; i <= m.num_sps; ++i) {
    const LoadParams& lp = scenario.sp(i).load;
    const double base = lp.traffic_level[static_cast<std::size_t>(epoch - 1)];
    for (int t = 0; t < m.num_slots; ++t) {
      const long global_slot =
          static_cast<long>(epoch - 1) * grid.slots_per_epoch + t;
      double traffic = base;
      if (lp.noise_amplitude > 0.0) {
        const double u = uniform01(scenario.seed, StreamPurpose::LoadNoise,
                                   static_cast<std::uint64_t>(i),
                                   static_cast<std::uint64_t>(epoch),
                                   static_cast<std::uint64_t>(t));
        traffic *= 1.0 + lp.noise_amplitude * (2.0 * u - 1.0);
      }
      const double hour = std::fmod(static_cast<double>(t) * grid.rho_hours, 24.0);
      double load = traffic * seasonal_multiplier(lp.seasonal, global_slot) *
                    diurnal_baseline(lp, hour) * grid.rho_hours;
      if (load < 0.0) {
        load = 0.0;
        ++m.clamp_count;
      }
      m.values[static_cast<std::size_t>(i - 1) *
                   static_cast<std::size_t>(m.num_slots) +
               static_cast<std::size_t>(t)] = load;
    }
  }
  return m;
}

std::vector<double> sample_opportunity_costs(const Scenario& scenario,
                                             int epoch) {
  check_epoch(scenario, epoch);
  std::vector<double> out(static_cast<std::size_t>(scenario.num_players()), 0.0);
  for (int p = 0; p < scenario.num_players(); ++p) {
    const PlayerProfile& prof = scenario.players[static_cast<std::size_t>(p)];
    if (prof.id.is_inp() && prof.opportunity.fixed_zero_for_inp) {
      out[static_cast<std::size_t>(p)] = 0.0;
      continue;
    }
    out[static_cast<std::size_t>(p)] =
        uniform(prof.opportunity.lower, prof.opportunity.upper, scenario.seed,
                StreamPurpose::OpportunityCost, static_cast<std::uint64_t>(p),
                static_cast<std::uint64_t>(epoch));
  }
  return out;
}

}  // namespace coinvest

/**
 * \file coinvest/model.hpp
 *
 * \brief Domain types, default parameters, and the capacity-cost and
 *        SP-utility primitives.
 *
 * Money is double-precision dollars throughout; capacity is in vcores.
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

#ifndef COINVEST_MODEL_HPP
#define COINVEST_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace coinvest {

/// Absolute tolerance scaled by the magnitude of the quantity checked.
inline double tol_for(double scale, double eps = 1e-9) {
  return eps * std::max(1.0, std::abs(scale));
}

enum class PlayerKind { InP, SP };

/// Player identity. Exactly one InP per scenario; SP indices are 1-based
/// and contiguous.
struct PlayerId {
  PlayerKind kind = PlayerKind::SP;
  int index = 0;  // SP number; 0 for the InP

  bool is_inp() const { return kind == PlayerKind::InP; }
  std::string name() const {
    return is_inp() ? "inp" : "sp" + std::to_string(index);
  }
  friend bool operator==(const PlayerId&, const PlayerId&) = default;
};

/// Revenue-side parameters of one SP's utility curve.
struct UtilityParams {
  double beta = 6e-6;  // $/request
  double xi = 0.03;    // 1/vcore saturation rate
};

/// Capacity cost parameters. kappa <= d keeps the adjusted cost convex.
struct CostParams {
  double d = 10.94;          // $/vcore added
  double kappa = 0.6 * 10.94;  // $/vcore released
  double gamma = 2000.0;     // $ per technical intervention
  double d_prime = 0.0225;   // $/(hour*vcore) maintenance
  double delta_hours = 8760.0;  // interval duration in hours

  double maintenance_rate() const { return d_prime * delta_hours; }
};

/// Epoch/slot layout. Simulated slots are representative: the per-slot
/// utility sum is multiplied by scale_factor so that a reduced slot count
/// stays calibrated against the full-interval maintenance cost.
struct TimeGrid {
  int epochs = 5;           // K
  int slots_per_epoch = 168;
  double rho_hours = 1.0;   // slot duration
  double delta_hours = 8760.0;

  double scale_factor() const {
    return delta_hours / (static_cast<double>(slots_per_epoch) * rho_hours);
  }
};

/// Per-epoch opportunity-cost distribution U(lower, upper).
struct OpportunityCostModel {
  double lower = 0.0;
  double upper = 0.0;
  bool fixed_zero_for_inp = false;
};

/// One diurnal harmonic: amplitude * sin(2*pi*m*(t - phase)/24).
struct Harmonic {
  double amplitude = 0.0;
  double phase_hours = 0.0;
};

/// Seasonal multiplier 1 + amplitude*sin(2*pi*slot/period); identity by
/// default.
struct Seasonal {
  double amplitude = 0.0;
  int period_slots = 0;
};

/// Traffic model of one SP: per-epoch base levels B, seasonal S, diurnal L.
struct LoadParams {
  std::vector<double> traffic_level;  // per-epoch B, size K
  double noise_amplitude = 0.0;       // optional per-slot +-amp*B, off by default
  Seasonal seasonal;
  double diurnal_a0 = 1.0;
  std::vector<Harmonic> harmonics;
};

struct PlayerProfile {
  PlayerId id;
  UtilityParams utility;
  LoadParams load;
  OpportunityCostModel opportunity;
};

enum class EpsilonMode { MidpointOfFeasible, Fixed };

struct EpsilonPolicy {
  EpsilonMode mode = EpsilonMode::MidpointOfFeasible;
  double fixed_value = 0.5;  // used when mode == Fixed
};

/// A full simulation scenario: players (InP first), cost model, time grid,
/// transfer slack policy, and the base seed.
struct Scenario {
  std::vector<PlayerProfile> players;
  CostParams cost;
  TimeGrid grid;
  EpsilonPolicy epsilon_policy;
  std::uint64_t seed = 0;

  int num_players() const { return static_cast<int>(players.size()); }
  int num_sps() const { return num_players() - 1; }
  const PlayerProfile& sp(int sp_index) const {
    return players[static_cast<std::size_t>(sp_index)];
  }

  /// Throws std::invalid_argument if structural invariants fail.
  void validate() const;
};

/// Capacity adjustment + maintenance cost of moving from c_prev to c_new.
///
/// d*[c_new - c_prev]^+ - kappa*[c_prev - c_new]^+ + gamma*[c_new != c_prev]
/// + d'*Delta*c_new. The intervention indicator compares decision values
/// exactly: planners emit c_new == c_prev only by copying the value.
double cost(double c_new, double c_prev, const CostParams& params);

/// SP revenue beta*load*(1 - exp(-xi*h)) from h allocated vcores.
double utility(double beta, double xi, double load, double h);

/// Default 1 InP + 5 SP scenario (SP5 lowest demand, epoch-3 demand dip).
Scenario default_scenario();

}  // namespace coinvest

#endif  // COINVEST_MODEL_HPP

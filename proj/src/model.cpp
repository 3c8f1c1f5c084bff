/**
 * \file model.cpp
 *
 * \brief Cost and utility primitives plus the shipped default scenario.
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

#include "coinvest/model.hpp"

#include <cmath>
#include <stdexcept>

namespace coinvest {

double cost(double c_new, double c_prev, const CostParams& params) {
  if (c_new < 0.0 || c_prev < 0.0) {
    throw std::domain_error("cost: capacity must be non-negative");
  }
  const double add = std::max(c_new - c_prev, 0.0);
  const double release = std::max(c_prev - c_new, 0.0);
  const double intervention = (c_new != c_prev) ? params.gamma : 0.0;
  return params.d * add - params.kappa * release + intervention +
         params.maintenance_rate() * c_new;
}

double utility(double beta, double xi, double load, double h) {
  if (h < 0.0) {
    throw std::domain_error("utility: allocation must be non-negative");
  }
  if (load < 0.0) {
    throw std::domain_error("utility: load must be non-negative");
  }
  return beta * load * (1.0 - std::exp(-xi * h));
}

void Scenario::validate() const {
  if (players.empty() || !players.front().id.is_inp()) {
    throw std::invalid_argument("scenario: players[0] must be the InP");
  }
  for (std::size_t i = 1; i < players.size(); ++i) {
    const PlayerId& id = players[i].id;
    if (id.is_inp()) {
      throw std::invalid_argument("scenario: exactly one InP allowed");
    }
    if (id.index != static_cast<int>(i)) {
      throw std::invalid_argument("scenario: SP indices must be 1..N in order");
    }
    if (players[i].utility.beta <= 0.0 || players[i].utility.xi <= 0.0) {
      throw std::invalid_argument("scenario: beta and xi must be positive");
    }
    if (static_cast<int>(players[i].load.traffic_level.size()) != grid.epochs) {
      throw std::invalid_argument(
          "scenario: traffic_level must have one entry per epoch");
    }
    const OpportunityCostModel& o = players[i].opportunity;
    if (o.lower < 0.0 || o.lower > o.upper) {
      throw std::invalid_argument(
          "scenario: opportunity range must satisfy 0 <= lower <= upper");
    }
  }
  if (cost.kappa > cost.d) {
    throw std::invalid_argument("scenario: kappa must not exceed d");
  }
  if (cost.d < 0.0 || cost.kappa < 0.0 || cost.gamma < 0.0 ||
      cost.d_prime < 0.0 || cost.delta_hours < 0.0) {
    throw std::invalid_argument("scenario: cost parameters must be >= 0");
  }
  if (grid.epochs < 1 || grid.slots_per_epoch < 1 || grid.rho_hours <= 0.0) {
    throw std::invalid_argument("scenario: degenerate time grid");
  }
  if (grid.delta_hours != cost.delta_hours) {
    throw std::invalid_argument(
        "scenario: grid and cost interval durations disagree");
  }
  const double recon =
      grid.slots_per_epoch * grid.rho_hours * grid.scale_factor();
  if (std::abs(recon - grid.delta_hours) > 1e-9 * grid.delta_hours) {
    throw std::invalid_argument("scenario: slot layout does not tile Delta");
  }
}

Scenario default_scenario() {
  Scenario s;
  s.seed = 42;
  s.grid = TimeGrid{};
  s.cost = CostParams{};
  s.epsilon_policy = EpsilonPolicy{};

  PlayerProfile inp;
  inp.id = PlayerId{PlayerKind::InP, 0};
  inp.opportunity = OpportunityCostModel{0.0, 0.0, true};
  s.players.push_back(inp);

  // Per-epoch traffic levels (requests/hour). Every SP dips in epoch 3 and
  // softens in epoch 5; SP5 carries the lowest demand throughout. Sizes are
  // spread so per-epoch payoffs straddle the opportunity-cost regimes:
  // SP4 large enough to attract even high outside offers, SP1 mid-sized so
  // moderate offers cause churn, SP5 small and opportunistic.
  const std::vector<std::vector<double>> levels = {
      {0.86e7, 0.91e7, 0.43e7, 0.96e7, 0.79e7},  // SP1
      {1.19e7, 1.25e7, 0.59e7, 1.32e7, 1.12e7},  // SP2
      {1.06e7, 1.12e7, 0.53e7, 1.25e7, 0.99e7},  // SP3
      {1.35e7, 1.42e7, 0.75e7, 1.47e7, 1.27e7},  // SP4
      {0.40e7, 0.42e7, 0.38e7, 0.44e7, 0.36e7}   // SP5
  };

  for (int i = 1; i <= 5; ++i) {
    PlayerProfile sp;
    sp.id = PlayerId{PlayerKind::SP, i};
    sp.utility = UtilityParams{};
    sp.load.traffic_level = levels[static_cast<std::size_t>(i - 1)];
    sp.load.diurnal_a0 = 1.0;
    // Distinct phases and amplitudes per SP to keep load patterns
    // heterogeneous; amplitudes sum below a0 so loads stay positive.
    sp.load.harmonics = {
        Harmonic{0.22 + 0.03 * i, 13.0 + 1.5 * i},
        Harmonic{0.08, 5.0 + 0.7 * i},
    };
    // Moderate opportunity-cost regime by default.
    sp.opportunity = OpportunityCostModel{135000.0, 255000.0, false};
    s.players.push_back(sp);
  }
  return s;
}

}  // namespace coinvest

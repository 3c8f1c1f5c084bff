/**
 * \file coinvest/harness.hpp
 *
 * \brief Seeded Monte-Carlo orchestration across schemes and
 *        opportunity-cost regimes, figure-ready CSV emission, sensitivity
 *        sweeps, and runtime invariant verification.
 *
 * All randomness derives from (base seed, run index, player, epoch), so
 * scheduling and worker count never affect results, and the same uniform
 * draw backs every regime: raising the regime raises each realized
 * opportunity cost monotonically.
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

#ifndef COINVEST_HARNESS_HPP
#define COINVEST_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "coinvest/baselines.hpp"
#include "coinvest/dynamics.hpp"
#include "coinvest/model.hpp"

namespace coinvest {

struct RegimeSpec {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
};

/// The four presets (means 135k/195k/315k/375k $, symmetric half-width).
std::vector<RegimeSpec> default_regimes(double half_width = 60000.0);
RegimeSpec regime_from_name(const std::string& name,
                            double half_width = 60000.0);

/// Scenario with every SP's opportunity range replaced by the regime's.
Scenario apply_regime(const Scenario& scenario, const RegimeSpec& regime);

/// Per-run scenario: regime applied and the seed re-keyed by run index
/// (regime deliberately absent from the key).
Scenario run_scenario(const Scenario& base, const RegimeSpec& regime,
                      std::uint64_t base_seed, int run_index);

struct ExperimentConfig {
  Scenario scenario;
  std::vector<Scheme> schemes{Scheme::Static, Scheme::Update, Scheme::Dynamic};
  std::vector<RegimeSpec> regimes = default_regimes();
  int runs = 20;
  std::uint64_t base_seed = 0;  // 0: use scenario.seed
  std::string out_dir;          // empty: nothing written
  int parallel = 1;
};

/// One (scheme, regime, run) trajectory, CSV-facing.
struct RunRecord {
  Scheme scheme = Scheme::Dynamic;
  std::string regime;
  int run_index = 0;
  std::uint64_t run_seed = 0;
  bool participated = false;
  double total_value = 0.0;
  std::vector<double> capacities;          // per epoch
  std::vector<Mask> coalitions;            // per epoch
  std::vector<double> epoch_values;        // per epoch
  std::vector<std::vector<double>> gross;  // [epoch][player]
  std::vector<std::vector<double>> net;    // [epoch][player]
  std::optional<DynamicRun> dynamic;       // full detail, dynamic scheme only
};

struct TotalsRow {
  std::string regime;
  Scheme scheme = Scheme::Dynamic;
  double mean_total = 0.0;
  double std_total = 0.0;
  int runs = 0;
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // fixed (scheme, regime, run) order
  std::vector<std::string> files;  // paths written, when out_dir was set
};

/// Runs every (scheme, regime, run) job, aggregates, and emits the CSV
/// and JSON-lines outputs. Deterministic for any parallel level.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Mean/stddev of run totals per (regime, scheme), in emission order.
std::vector<TotalsRow> totals_table(const ExperimentConfig& config,
                                    const std::vector<RunRecord>& records);

struct SweepRow {
  std::string parameter;  // "kappa" or "gamma"
  double value = 0.0;
  Scheme scheme = Scheme::Dynamic;
  double mean_total = 0.0;
  int runs = 0;
};

/// Re-runs the experiment on the moderate regime for every grid value of
/// kappa and gamma; emits sweep_kappa.csv / sweep_gamma.csv when out_dir
/// is set. Empty grids are a no-op.
std::vector<SweepRow> sweep_sensitivity(const ExperimentConfig& config,
                                        const std::vector<double>& kappa_grid,
                                        const std::vector<double>& gamma_grid);

/// Checks every emitted epoch of a dynamic run against the transfer and
/// selection contracts (budget balance, rationality under the selected
/// and 20 sampled slack values, compensation floors, veto, argmax).
/// Returns human-readable violations; empty means clean.
std::vector<std::string> verify_run_invariants(const Scenario& run_scenario,
                                               const DynamicRun& run);

/// True when the per-epoch compatible sets coincide under slack policies
/// fixed-0, fixed-0.5, and the scenario's own policy.
bool verify_epsilon_invariance(const Scenario& run_scenario,
                               Exec exec = Exec::Serial);

/// Shortest round-trip decimal form; the single formatter behind every
/// CSV so outputs are byte-stable.
std::string format_double(double v);

}  // namespace coinvest

#endif  // COINVEST_HARNESS_HPP

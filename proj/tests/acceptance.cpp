/**
 * \file acceptance.cpp
 *
 * \brief Acceptance suite: every release gate checked end to end, one
 *        pass/fail line per criterion. Exit code is the failure count.
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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "coinvest/baselines.hpp"
#include "coinvest/dynamics.hpp"
#include "coinvest/game.hpp"
#include "coinvest/harness.hpp"
#include "coinvest/loadgen.hpp"
#include "coinvest/planner.hpp"
#include "coinvest/rng.hpp"
#include "oracles.hpp"
#include "test_scenarios.hpp"

using namespace coinvest;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------------------
// 1. Planner vs exhaustive grid search on small instances.

Scenario oracle_instance(int sps, int slots, std::uint64_t salt) {
  Scenario s;
  s.seed = 40000 + salt;
  s.grid.epochs = 1;
  s.grid.slots_per_epoch = slots;
  s.grid.rho_hours = 1.0;
  s.grid.delta_hours = static_cast<double>(slots);
  s.cost.delta_hours = s.grid.delta_hours;
  s.cost.d = 10.94;
  s.cost.kappa = 0.6 * 10.94;
  s.cost.gamma = 40.0;
  s.cost.d_prime = 0.0225;
  PlayerProfile inp;
  inp.id = PlayerId{PlayerKind::InP, 0};
  inp.opportunity.fixed_zero_for_inp = true;
  s.players.push_back(inp);
  for (int i = 1; i <= sps; ++i) {
    PlayerProfile sp;
    sp.id = PlayerId{PlayerKind::SP, i};
    sp.utility.beta = 6e-6;
    sp.utility.xi =
        0.15 + 0.2 * uniform01(salt, StreamPurpose::TestScratch, i, 1);
    sp.load.traffic_level = {
        1e6 + 8e6 * uniform01(salt, StreamPurpose::TestScratch, i, 2)};
    sp.load.diurnal_a0 = 1.0;
    sp.load.harmonics = {
        Harmonic{0.4 * uniform01(salt, StreamPurpose::TestScratch, i, 3),
                 24.0 * uniform01(salt, StreamPurpose::TestScratch, i, 4)}};
    s.players.push_back(sp);
  }
  return s;
}

void criterion_1() {
  const auto t0 = clock_type::now();
  int checked = 0;
  double worst = 0.0;
  bool ok = true;
  for (std::uint64_t inst = 0; inst < 50; ++inst) {
    const int sps = 1 + static_cast<int>(inst % 3);
    const int slots = 2 + static_cast<int>((inst / 3) % 3);
    const Scenario s = oracle_instance(sps, slots, inst);
    const LoadMatrix loads = generate_loads(s, 1);
    const double c_prev =
        (inst % 2 == 0) ? 0.0
                        : 40.0 * uniform01(inst, StreamPurpose::TestScratch, 9);
    const Mask coalition = full_mask(s.num_players());
    const PlanResult plan = optimize_capacity(s, loads, coalition, c_prev);
    const oracles::GridPlan grid =
        oracles::grid_plan(s, loads, coalition, c_prev, 0.1, 150.0);
    const double rel = std::abs(plan.value - grid.value) /
                       std::max(1.0, std::abs(grid.value));
    worst = std::max(worst, rel);
    if (rel > 0.005 || plan.capacity > 140.0) ok = false;
    ++checked;
  }
  const double secs = seconds_since(t0);
  if (secs >= 60.0) ok = false;
  report(1, ok,
         "planner within 0.5% of exhaustive grid search on " +
             std::to_string(checked) + " instances (worst rel " + fmt(worst) +
             ", " + fmt(secs) + " s)");
}

// ---------------------------------------------------------------------------
// 2. Convexity of the intervention-adjusted cost.

double adjusted_cost(double c_new, double c_prev, const CostParams& p) {
  const double base = cost(c_new, c_prev, p);
  return c_new == c_prev ? base + p.gamma : base;
}

int jensen_violations(const CostParams& p, std::uint64_t salt) {
  const double c_prev = 100.0;
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double c1 = 400.0 * uniform01(salt, StreamPurpose::TestScratch, i, 1);
    const double c2 = 400.0 * uniform01(salt, StreamPurpose::TestScratch, i, 2);
    const double lam = uniform01(salt, StreamPurpose::TestScratch, i, 3);
    const double lhs = lam * adjusted_cost(c1, c_prev, p) +
                       (1.0 - lam) * adjusted_cost(c2, c_prev, p);
    const double rhs = adjusted_cost(lam * c1 + (1.0 - lam) * c2, c_prev, p);
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (lhs < rhs - 1e-9 * scale) ++violations;
  }
  return violations;
}

void criterion_2() {
  CostParams p;  // production defaults, kappa = 0.6 d
  const int ok_side = jensen_violations(p, 21);
  CostParams bad = p;
  bad.kappa = 1.5 * bad.d;
  const int bad_side = jensen_violations(bad, 22);
  report(2, ok_side == 0 && bad_side > 0,
         "10000 Jensen triples: kappa<=d violations " +
             std::to_string(ok_side) + ", kappa=1.5d violations " +
             std::to_string(bad_side));
}

// ---------------------------------------------------------------------------
// 3. Shapley axioms.

ValueFn random_game(std::uint64_t salt, int n) {
  auto values = std::make_shared<std::map<Mask, double>>();
  for (Mask m = 1; m <= full_mask(n); ++m) {
    (*values)[m] =
        100.0 * uniform01(salt, StreamPurpose::TestScratch, m, 9) *
        member_count(m);
  }
  return [values](Mask m) { return m == 0 ? 0.0 : values->at(m); };
}

void criterion_3() {
  bool ok = true;
  std::string detail;

  // Efficiency and subset-formula vs permutation average, n <= 5.
  for (int n = 1; n <= 5 && ok; ++n) {
    for (std::uint64_t salt = 0; salt < 8 && ok; ++salt) {
      const ValueFn v = random_game(300 + salt * 7 + n, n);
      const Allocation a = shapley(full_mask(n), n, v);
      double sum = 0.0;
      for (int p = 0; p < n; ++p) sum += a.payoff(p);
      if (std::abs(sum - a.value) > 1e-9 * std::max(1.0, std::abs(a.value))) {
        ok = false;
        detail = "efficiency violated";
      }
      const std::vector<double> perm =
          oracles::permutation_shapley(full_mask(n), n, v);
      for (int p = 0; p < n; ++p) {
        const double scale =
            std::max(1.0, std::abs(perm[static_cast<std::size_t>(p)]));
        if (std::abs(a.payoff(p) - perm[static_cast<std::size_t>(p)]) >
            1e-9 * scale) {
          ok = false;
          detail = "subset formula disagrees with permutation average";
        }
      }
    }
  }

  // Symmetry: two identically parameterized SPs split equally.
  {
    Scenario s = testing::small_scenario(3, 1, 8, 4242);
    s.players[2] = s.players[1];
    s.players[2].id = PlayerId{PlayerKind::SP, 2};
    const LoadMatrix loads = generate_loads(s, 1);
    const EpochValueTable table =
        evaluate_all_coalitions(s, loads, 1, 0.0, Exec::Serial);
    const Allocation a = shapley(full_mask(s.num_players()), s.num_players(),
                                 [&](Mask m) { return table.value(m); });
    if (std::abs(a.payoff(1) - a.payoff(2)) >
        1e-9 * std::max(1.0, std::abs(a.payoff(1)))) {
      ok = false;
      detail = "symmetry violated";
    }
  }

  // Null player: an SP with zero load earns nothing.
  {
    Scenario s = testing::small_scenario(2, 1, 8, 4243);
    s.players[2].load.traffic_level = {0.0};
    const LoadMatrix loads = generate_loads(s, 1);
    const EpochValueTable table =
        evaluate_all_coalitions(s, loads, 1, 0.0, Exec::Serial);
    const Allocation a = shapley(full_mask(s.num_players()), s.num_players(),
                                 [&](Mask m) { return table.value(m); });
    if (std::abs(a.payoff(2)) > 1e-9 * std::max(1.0, std::abs(a.value))) {
      ok = false;
      detail = "null player paid";
    }
  }

  report(3, ok,
         ok ? "efficiency, symmetry, null player, permutation equivalence"
            : detail);
}

// ---------------------------------------------------------------------------
// 4. Stability verdicts vs the direct core checker.

void criterion_4() {
  int agreements = 0;
  for (std::uint64_t salt = 0; salt < 100; ++salt) {
    const ValueFn v = random_game(500 + salt, 4);
    const Allocation a = shapley(0b1111, 4, v);
    const std::vector<double> v_out(4, 0.0);
    const StabilityReport rep = check_stability(a, v, v_out);
    const double tol = 1e-9 * std::max(1.0, std::abs(a.value));
    if (rep.cr_ok == oracles::in_core(0b1111, a.payoffs, v, tol)) {
      ++agreements;
    }
  }
  report(4, agreements == 100,
         "stability verdicts agree with brute force on " +
             std::to_string(agreements) + "/100 games");
}

// ---------------------------------------------------------------------------
// 5, 7, 8 share the main experiment.

struct MainExperiment {
  ExperimentConfig config;
  ExperimentResult result;
  double seconds = 0.0;
};

MainExperiment run_main_experiment() {
  MainExperiment m;
  m.config.scenario = default_scenario();
  m.config.scenario.grid.slots_per_epoch = 168;
  m.config.runs = 20;
  const auto t0 = clock_type::now();
  m.result = run_experiment(m.config);
  m.seconds = seconds_since(t0);
  return m;
}

void criterion_5(const MainExperiment& m) {
  int runs_checked = 0;
  std::vector<std::string> violations;
  bool epsilon_ok = true;
  for (const RunRecord& rec : m.result.records) {
    if (!rec.dynamic) continue;
    ++runs_checked;
    const RegimeSpec regime = regime_from_name(rec.regime);
    const Scenario s = run_scenario(m.config.scenario, regime,
                                    m.config.scenario.seed, rec.run_index);
    const auto v = verify_run_invariants(s, *rec.dynamic);
    violations.insert(violations.end(), v.begin(), v.end());
    if (!verify_epsilon_invariance(s)) epsilon_ok = false;
  }
  const bool ok = violations.empty() && epsilon_ok && runs_checked == 80;
  std::string detail = "balance/rationality/floors/epsilon-invariance on " +
                       std::to_string(runs_checked) + " dynamic runs";
  if (!violations.empty()) {
    detail += " -- " + std::to_string(violations.size()) +
              " violations, first: " + violations.front();
  }
  if (!epsilon_ok) detail += " -- feasible set depends on epsilon";
  report(5, ok, detail);
}

void criterion_6() {
  int coalitions = 0;
  double worst = 1e300;
  for (std::uint64_t salt = 0; salt < 20; ++salt) {
    const int sps = 2 + static_cast<int>(salt % 3);
    const int epochs = 3 + static_cast<int>(salt % 3);
    const int slots = 8 + 8 * static_cast<int>(salt % 2);
    const Scenario s =
        testing::trajectory_scenario(sps, epochs, slots, 600 + salt);
    for (Mask spm = 1; spm < (Mask{1} << sps); ++spm) {
      const Mask coalition = kInPBit | (spm << 1);
      const double v_stat = solve_static(s, coalition).total_value;
      const double v_upd = solve_update(s, coalition).total_value;
      worst = std::min(worst, (v_upd - v_stat) /
                                  std::max(1.0, std::abs(v_stat)));
      ++coalitions;
    }
  }
  report(6, worst >= -1e-6,
         "update >= static on " + std::to_string(coalitions) +
             " coalitions over 20 scenarios (worst rel gap " + fmt(worst) +
             ")");
}

void criterion_7(const MainExperiment& m) {
  bool ok = true;
  std::string detail;
  const std::vector<TotalsRow> rows = totals_table(m.config, m.result.records);
  auto mean_of = [&rows](const std::string& regime, Scheme scheme) {
    for (const TotalsRow& r : rows) {
      if (r.regime == regime && r.scheme == scheme) return r.mean_total;
    }
    return 0.0;
  };
  const std::vector<std::string> order{"low", "moderate", "high", "very_high"};
  for (Scheme scheme : {Scheme::Static, Scheme::Update, Scheme::Dynamic}) {
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (mean_of(order[i], scheme) >
          mean_of(order[i - 1], scheme) + 1e-9) {
        ok = false;
        detail += std::string(" non-monotone ") + scheme_name(scheme) + " at " +
                  order[i] + ";";
      }
    }
  }
  const double dyn_high = mean_of("high", Scheme::Dynamic);
  if (dyn_high < mean_of("high", Scheme::Update) ||
      dyn_high < mean_of("high", Scheme::Static)) {
    ok = false;
    detail += " dynamic not dominant at high;";
  }
  int vh_baseline_participations = 0;
  int vh_dynamic_formed = 0;
  for (const RunRecord& r : m.result.records) {
    if (r.regime != "very_high") continue;
    if (r.scheme == Scheme::Dynamic) {
      if (r.participated) ++vh_dynamic_formed;
    } else if (r.participated) {
      ++vh_baseline_participations;
    }
  }
  if (vh_baseline_participations != 0) {
    ok = false;
    detail += " baselines participated at very_high;";
  }
  if (vh_dynamic_formed * 2 < m.config.runs) {
    ok = false;
    detail += " dynamic formed in under half the very_high runs;";
  }
  if (m.seconds > 600.0) {
    ok = false;
    detail += " experiment exceeded 10 minutes;";
  }
  report(7, ok,
         "fig-1 trends over " + std::to_string(m.config.runs) +
             " runs (dynamic@high " + fmt(dyn_high) + ", very_high dynamic " +
             std::to_string(vh_dynamic_formed) + "/20, " + fmt(m.seconds) +
             " s)" + detail);
}

void criterion_8(const MainExperiment& m) {
  int fee_with_compensation = 0;
  int zero_fee_joins = 0;
  for (const RunRecord& rec : m.result.records) {
    if (!rec.dynamic) continue;
    Mask prev = 0;
    for (const EpochOutcome& e : rec.dynamic->epochs) {
      for (int p = 1; p < static_cast<int>(e.net_payoffs.size()); ++p) {
        const bool entered =
            mask_contains(e.coalition, p) && !mask_contains(prev, p);
        if (!entered) continue;
        const std::size_t sp = static_cast<std::size_t>(p);
        if (e.transfers.entry_fees[sp] > 0.0 &&
            e.transfers.compensation_total() > 0.0) {
          ++fee_with_compensation;
        }
        if (e.epoch >= 2 && e.transfers.required_floor_total == 0.0 &&
            e.transfers.entry_fees[sp] == 0.0) {
          ++zero_fee_joins;
        }
      }
      prev = e.coalition;
    }
  }
  report(8, fee_with_compensation > 0 && zero_fee_joins > 0,
         "entry-fee-with-compensation events " +
             std::to_string(fee_with_compensation) +
             ", zero-floor zero-fee joins " + std::to_string(zero_fee_joins));
}

// ---------------------------------------------------------------------------
// 9. Byte-identical outputs across parallelism levels.

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void criterion_9() {
  const auto base =
      std::filesystem::temp_directory_path() / "coinvest_acceptance_det";
  std::filesystem::remove_all(base);
  auto make_config = [&](const std::string& sub, int parallel) {
    ExperimentConfig c;
    c.scenario = default_scenario();
    c.scenario.grid.slots_per_epoch = 96;
    c.runs = 4;
    c.regimes = {regime_from_name("low"), regime_from_name("very_high")};
    c.out_dir = (base / sub).string();
    c.parallel = parallel;
    return c;
  };
  const ExperimentResult a = run_experiment(make_config("a", 1));
  const ExperimentResult b = run_experiment(make_config("b", 4));
  bool ok = a.files.size() == b.files.size();
  std::string mismatch;
  for (std::size_t i = 0; ok && i < a.files.size(); ++i) {
    if (slurp(a.files[i]) != slurp(b.files[i])) {
      ok = false;
      mismatch = std::filesystem::path(a.files[i]).filename().string();
    }
  }
  std::filesystem::remove_all(base);
  report(9, ok,
         ok ? "CSV and JSONL outputs byte-identical at parallelism 1 vs 4"
            : "output mismatch in " + mismatch);
}

}  // namespace

int main() {
  std::printf("coinvest acceptance suite\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();

  std::printf("running the 20-run experiment grid (4 regimes x 3 schemes)...\n");
  std::fflush(stdout);
  const MainExperiment m = run_main_experiment();

  criterion_5(m);
  criterion_6();
  criterion_7(m);
  criterion_8(m);
  criterion_9();

  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}

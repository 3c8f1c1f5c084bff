/**
 * \file harness.cpp
 *
 * \brief Experiment orchestration and output emission.
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

#include "coinvest/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "coinvest/loadgen.hpp"
#include "coinvest/rng.hpp"

namespace coinvest {

namespace {

using json = nlohmann::ordered_json;

std::uint64_t effective_seed(const ExperimentConfig& c) {
  return c.base_seed != 0 ? c.base_seed : c.scenario.seed;
}

std::string player_name(const Scenario& s, int p) {
  return s.players[static_cast<std::size_t>(p)].id.name();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<RegimeSpec> default_regimes(double half_width) {
  auto make = [half_width](const std::string& name, double mean) {
    return RegimeSpec{name, std::max(0.0, mean - half_width),
                      mean + half_width};
  };
  return {make("low", 135000.0), make("moderate", 195000.0),
          make("high", 315000.0), make("very_high", 375000.0)};
}

RegimeSpec regime_from_name(const std::string& name, double half_width) {
  for (const RegimeSpec& r : default_regimes(half_width)) {
    if (r.name == name) return r;
  }
  throw std::invalid_argument("unknown regime '" + name + "'");
}

Scenario apply_regime(const Scenario& scenario, const RegimeSpec& regime) {
  Scenario out = scenario;
  for (PlayerProfile& p : out.players) {
    if (p.id.is_inp()) continue;
    p.opportunity.lower = regime.lower;
    p.opportunity.upper = regime.upper;
  }
  return out;
}

Scenario run_scenario(const Scenario& base, const RegimeSpec& regime,
                      std::uint64_t base_seed, int run_index) {
  Scenario s = apply_regime(base, regime);
  s.seed = stream_word(base_seed, StreamPurpose::RunSeed,
                       static_cast<std::uint64_t>(run_index));
  return s;
}

namespace {

std::vector<std::vector<double>> realized_opportunity(const Scenario& s) {
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(s.grid.epochs));
  for (int k = 1; k <= s.grid.epochs; ++k) {
    out.push_back(sample_opportunity_costs(s, k));
  }
  return out;
}

RunRecord make_dynamic_record(const Scenario& s, const RegimeSpec& regime,
                              int run_index) {
  RunRecord rec;
  rec.scheme = Scheme::Dynamic;
  rec.regime = regime.name;
  rec.run_index = run_index;
  rec.run_seed = s.seed;
  DynamicRun run = run_dynamic(s, Exec::Serial);
  rec.total_value = run.v_dyn;
  for (const EpochOutcome& e : run.epochs) {
    rec.capacities.push_back(e.c_next);
    rec.coalitions.push_back(e.coalition);
    rec.epoch_values.push_back(e.coalition != 0 ? e.plan.value : 0.0);
    std::vector<double> gross(s.players.size(), 0.0);
    for (std::size_t p = 0; p < s.players.size(); ++p) {
      gross[p] = e.allocation.payoff(static_cast<int>(p));
    }
    rec.gross.push_back(std::move(gross));
    rec.net.push_back(e.net_payoffs);
    if (e.coalition != 0) rec.participated = true;
  }
  rec.dynamic = std::move(run);
  return rec;
}

RunRecord make_baseline_record(const Scenario& s, Scheme scheme,
                               const RegimeSpec& regime, int run_index) {
  RunRecord rec;
  rec.scheme = scheme;
  rec.regime = regime.name;
  rec.run_index = run_index;
  rec.run_seed = s.seed;
  const BaselineResult res =
      select_baseline_coalition(scheme, s, realized_opportunity(s));
  rec.participated = res.participated;
  rec.total_value = res.total_value;
  rec.capacities = res.capacities;
  rec.epoch_values = res.epoch_values;
  rec.coalitions.assign(rec.capacities.size(),
                        res.participated ? res.coalition : 0);
  rec.gross = res.per_epoch_payoffs;
  rec.net = res.per_epoch_payoffs;  // no transfers in the baselines
  return rec;
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& body, std::vector<std::string>* files) {
  const std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << body;
  files->push_back(path.string());
}

json transfers_to_json(const Scenario& s, const Transfers& t) {
  json j;
  j["epsilon"] = t.epsilon;
  j["floor_total"] = t.required_floor_total;
  j["pot_total"] = t.pot_total;
  json fees = json::object(), pens = json::object(), comps = json::object();
  for (std::size_t p = 0; p < t.entry_fees.size(); ++p) {
    const std::string name = player_name(s, static_cast<int>(p));
    if (t.entry_fees[p] != 0.0) fees[name] = t.entry_fees[p];
    if (t.exit_penalties[p] != 0.0) pens[name] = t.exit_penalties[p];
    if (t.compensations[p] != 0.0) comps[name] = t.compensations[p];
  }
  j["entry_fees"] = std::move(fees);
  j["exit_penalties"] = std::move(pens);
  j["compensations"] = std::move(comps);
  return j;
}

json record_to_json(const Scenario& base, const RunRecord& rec) {
  json j;
  j["scheme"] = scheme_name(rec.scheme);
  j["regime"] = rec.regime;
  j["run"] = rec.run_index;
  j["seed"] = rec.run_seed;
  j["participated"] = rec.participated;
  j["total_value"] = rec.total_value;
  j["epochs"] = json::array();
  for (std::size_t k = 0; k < rec.capacities.size(); ++k) {
    json ej;
    ej["epoch"] = k + 1;
    ej["coalition"] = mask_to_string(rec.coalitions[k]);
    ej["capacity"] = rec.capacities[k];
    ej["value"] = rec.epoch_values[k];
    json gross = json::object(), net = json::object();
    for (std::size_t p = 0; p < rec.gross[k].size(); ++p) {
      const std::string name = player_name(base, static_cast<int>(p));
      gross[name] = rec.gross[k][p];
      net[name] = rec.net[k][p];
    }
    ej["gross_payoff"] = std::move(gross);
    ej["net_payoff"] = std::move(net);
    if (rec.dynamic) {
      const EpochOutcome& e = rec.dynamic->epochs[k];
      ej["transfers"] = transfers_to_json(base, e.transfers);
      json vout = json::object();
      for (std::size_t p = 0; p < e.opportunity.size(); ++p) {
        vout[player_name(base, static_cast<int>(p))] = e.opportunity[p];
      }
      ej["opportunity"] = std::move(vout);
      ej["fallback"] = e.fallback == Fallback::None
                           ? "none"
                           : (e.fallback == Fallback::SustainedByInP
                                  ? "sustained"
                                  : "dismantled");
      ej["inp_ledger"] = e.inp_ledger;
      ej["candidates_evaluated"] = e.candidates.size();
      json compat = json::array();
      for (Mask m : e.compatible) compat.push_back(mask_to_string(m));
      ej["compatible"] = std::move(compat);
      if (e.coalition != 0) {
        json stab;
        stab["worst_cr_slack"] = e.stability.worst_cr_slack;
        stab["worst_cr_subset"] = mask_to_string(e.stability.worst_cr_subset);
        stab["gr_gap"] = e.stability.gr_gap;
        json sir = json::object();
        for (int p : mask_members(e.coalition)) {
          sir[player_name(base, p)] =
              e.stability.sir_slack[static_cast<std::size_t>(p)];
        }
        stab["sir_slack"] = std::move(sir);
        stab["supermodular_ok"] = e.stability.supermodular_ok;
        stab["worst_sm_slack"] = e.stability.worst_sm_slack;
        ej["stability"] = std::move(stab);
      }
    }
    j["epochs"].push_back(std::move(ej));
  }
  if (rec.dynamic) {
    j["inp_ledger_total"] = rec.dynamic->ledger_total;
    json cum = json::object();
    for (std::size_t p = 0; p < rec.dynamic->cumulative_net.size(); ++p) {
      cum[player_name(base, static_cast<int>(p))] =
          rec.dynamic->cumulative_net[p];
    }
    j["cumulative_net"] = std::move(cum);
  }
  return j;
}

}  // namespace

std::vector<TotalsRow> totals_table(const ExperimentConfig& config,
                                    const std::vector<RunRecord>& records) {
  std::vector<TotalsRow> rows;
  for (const RegimeSpec& regime : config.regimes) {
    for (Scheme scheme : config.schemes) {
      TotalsRow row;
      row.regime = regime.name;
      row.scheme = scheme;
      std::vector<double> totals;
      for (const RunRecord& r : records) {
        if (r.scheme == scheme && r.regime == regime.name) {
          totals.push_back(r.total_value);
        }
      }
      row.runs = static_cast<int>(totals.size());
      if (!totals.empty()) {
        double sum = 0.0;
        for (double t : totals) sum += t;
        row.mean_total = sum / static_cast<double>(totals.size());
        if (totals.size() > 1) {
          double ss = 0.0;
          for (double t : totals) {
            ss += (t - row.mean_total) * (t - row.mean_total);
          }
          row.std_total =
              std::sqrt(ss / static_cast<double>(totals.size() - 1));
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.scenario.validate();
  if (config.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (config.regimes.empty()) {
    throw std::invalid_argument("at least one regime required");
  }
  const std::uint64_t base_seed = effective_seed(config);

  struct Job {
    Scheme scheme;
    const RegimeSpec* regime;
    int run_index;
  };
  std::vector<Job> jobs;
  for (Scheme scheme : config.schemes) {
    for (const RegimeSpec& regime : config.regimes) {
      for (int r = 0; r < config.runs; ++r) {
        jobs.push_back(Job{scheme, &regime, r});
      }
    }
  }

  ExperimentResult result;
  result.records.resize(jobs.size());
  set_threads(config.parallel);
  const Exec exec = config.parallel > 1 ? Exec::OpenMP : Exec::Serial;
  for_each_index(jobs.size(), exec, [&](std::size_t i) {
    const Job& job = jobs[i];
    const Scenario s =
        run_scenario(config.scenario, *job.regime, base_seed, job.run_index);
    result.records[i] =
        job.scheme == Scheme::Dynamic
            ? make_dynamic_record(s, *job.regime, job.run_index)
            : make_baseline_record(s, job.scheme, *job.regime, job.run_index);
  });

  if (config.out_dir.empty()) {
    return result;
  }
  std::filesystem::create_directories(config.out_dir);
  const Scenario& base = config.scenario;
  const int K = base.grid.epochs;
  const int n = base.num_players();

  {  // fig1: total payoff per regime and scheme
    std::ostringstream os;
    os << "regime,scheme,mean_total,std_total,runs\n";
    for (const TotalsRow& row : totals_table(config, result.records)) {
      os << row.regime << ',' << scheme_name(row.scheme) << ','
         << format_double(row.mean_total) << ',' << format_double(row.std_total)
         << ',' << row.runs << '\n';
    }
    write_file(config.out_dir, "fig1_totals.csv", os.str(), &result.files);
  }

  {  // fig2: mean installed capacity per epoch
    std::ostringstream os;
    os << "regime,scheme,epoch,mean_capacity\n";
    for (const RegimeSpec& regime : config.regimes) {
      for (Scheme scheme : config.schemes) {
        for (int k = 0; k < K; ++k) {
          double sum = 0.0;
          int count = 0;
          for (const RunRecord& r : result.records) {
            if (r.scheme != scheme || r.regime != regime.name) continue;
            sum += r.capacities[static_cast<std::size_t>(k)];
            ++count;
          }
          os << regime.name << ',' << scheme_name(scheme) << ',' << (k + 1)
             << ',' << format_double(count > 0 ? sum / count : 0.0) << '\n';
        }
      }
    }
    write_file(config.out_dir, "fig2_capacity.csv", os.str(), &result.files);
  }

  {  // fig3: per-player payoffs per run and epoch
    std::ostringstream os;
    os << "regime,scheme,run,epoch,player,gross_payoff,net_payoff\n";
    for (const RunRecord& r : result.records) {
      for (int k = 0; k < K; ++k) {
        for (int p = 0; p < n; ++p) {
          os << r.regime << ',' << scheme_name(r.scheme) << ',' << r.run_index
             << ',' << (k + 1) << ',' << player_name(base, p) << ','
             << format_double(r.gross[static_cast<std::size_t>(k)]
                                     [static_cast<std::size_t>(p)])
             << ','
             << format_double(r.net[static_cast<std::size_t>(k)]
                                   [static_cast<std::size_t>(p)])
             << '\n';
        }
      }
    }
    write_file(config.out_dir, "fig3_payoffs.csv", os.str(), &result.files);
  }

  {  // fig4: traffic summary of the base scenario (run-0 streams)
    std::ostringstream os;
    os << "epoch,player,mean_slot_load,epoch_total_load\n";
    const Scenario s0 =
        run_scenario(base, config.regimes.front(), base_seed, 0);
    for (int k = 1; k <= K; ++k) {
      const LoadMatrix loads = generate_loads(s0, k);
      for (int i = 1; i <= loads.num_sps; ++i) {
        const double total = loads.row_sum(i);
        os << k << ',' << player_name(base, i) << ','
           << format_double(total / loads.num_slots) << ','
           << format_double(total) << '\n';
      }
    }
    write_file(config.out_dir, "fig4_traffic.csv", os.str(), &result.files);
  }

  {  // per-slot load export (run-0 streams; loads are regime-independent)
    std::ostringstream os;
    os << "epoch,slot,sp_index,load\n";
    const Scenario s0 =
        run_scenario(base, config.regimes.front(), base_seed, 0);
    for (int k = 1; k <= K; ++k) {
      const LoadMatrix loads = generate_loads(s0, k);
      for (int t = 0; t < loads.num_slots; ++t) {
        for (int i = 1; i <= loads.num_sps; ++i) {
          os << k << ',' << t << ',' << i << ','
             << format_double(loads.at(i, t)) << '\n';
        }
      }
    }
    write_file(config.out_dir, "loads.csv", os.str(), &result.files);
  }

  {  // fig5: participation events and transfers (dynamic scheme)
    std::ostringstream os;
    os << "regime,run,epoch,player,role,fee,penalty,compensation,epsilon,"
          "floor_total,persistent_count\n";
    for (const RunRecord& r : result.records) {
      if (!r.dynamic) continue;
      Mask prev = 0;
      for (const EpochOutcome& e : r.dynamic->epochs) {
        const Mask cur = e.coalition;
        const int persistent = member_count(cur & prev);
        for (int p = 0; p < n; ++p) {
          const bool now = mask_contains(cur, p);
          const bool before = mask_contains(prev, p);
          if (!now && !before) continue;
          const char* role = now && before ? "persist" : (now ? "enter" : "leave");
          const std::size_t sp = static_cast<std::size_t>(p);
          os << r.regime << ',' << r.run_index << ',' << e.epoch << ','
             << player_name(base, p) << ',' << role << ','
             << format_double(e.transfers.entry_fees[sp]) << ','
             << format_double(e.transfers.exit_penalties[sp]) << ','
             << format_double(e.transfers.compensations[sp]) << ','
             << format_double(e.transfers.epsilon) << ','
             << format_double(e.transfers.required_floor_total) << ','
             << persistent << '\n';
        }
        prev = cur;
      }
    }
    write_file(config.out_dir, "fig5_transfers.csv", os.str(), &result.files);
  }

  {  // fig6: presence probabilities (dynamic scheme)
    std::ostringstream os;
    os << "regime,player,epoch,presence_probability\n";
    for (const RegimeSpec& regime : config.regimes) {
      for (int p = 0; p < n; ++p) {
        for (int k = 0; k < K; ++k) {
          int present = 0;
          int count = 0;
          for (const RunRecord& r : result.records) {
            if (r.scheme != Scheme::Dynamic || r.regime != regime.name)
              continue;
            ++count;
            if (mask_contains(r.coalitions[static_cast<std::size_t>(k)], p)) {
              ++present;
            }
          }
          os << regime.name << ',' << player_name(base, p) << ',' << (k + 1)
             << ','
             << format_double(count > 0 ? static_cast<double>(present) / count
                                        : 0.0)
             << '\n';
        }
      }
    }
    write_file(config.out_dir, "fig6_presence.csv", os.str(), &result.files);
  }

  {  // raw records for reanalysis
    std::ostringstream os;
    for (const RunRecord& r : result.records) {
      os << record_to_json(base, r).dump() << '\n';
    }
    write_file(config.out_dir, "runs.jsonl", os.str(), &result.files);
  }

  return result;
}

std::vector<SweepRow> sweep_sensitivity(const ExperimentConfig& config,
                                        const std::vector<double>& kappa_grid,
                                        const std::vector<double>& gamma_grid) {
  std::vector<SweepRow> rows;
  RegimeSpec moderate = config.regimes.front();
  for (const RegimeSpec& r : config.regimes) {
    if (r.name == "moderate") moderate = r;
  }

  auto run_point = [&](const std::string& parameter, double value) {
    ExperimentConfig point = config;
    point.regimes = {moderate};
    point.out_dir.clear();
    if (parameter == "kappa") {
      point.scenario.cost.kappa = value;
    } else {
      point.scenario.cost.gamma = value;
    }
    const ExperimentResult res = run_experiment(point);
    for (const TotalsRow& t : totals_table(point, res.records)) {
      rows.push_back(SweepRow{parameter, value, t.scheme, t.mean_total,
                              t.runs});
    }
  };

  for (double v : kappa_grid) run_point("kappa", v);
  for (double v : gamma_grid) run_point("gamma", v);

  if (!config.out_dir.empty() && !(kappa_grid.empty() && gamma_grid.empty())) {
    std::filesystem::create_directories(config.out_dir);
    for (const char* parameter : {"kappa", "gamma"}) {
      std::ostringstream os;
      os << "parameter,value,scheme,mean_total,runs\n";
      for (const SweepRow& row : rows) {
        if (row.parameter != parameter) continue;
        os << row.parameter << ',' << format_double(row.value) << ','
           << scheme_name(row.scheme) << ',' << format_double(row.mean_total)
           << ',' << row.runs << '\n';
      }
      std::ofstream out(std::filesystem::path(config.out_dir) /
                        (std::string("sweep_") + parameter + ".csv"));
      out << os.str();
    }
  }
  return rows;
}

std::vector<std::string> verify_run_invariants(const Scenario& run_scenario,
                                               const DynamicRun& run) {
  std::vector<std::string> violations;
  auto flag = [&violations](int epoch, const std::string& what) {
    violations.push_back("epoch " + std::to_string(epoch) + ": " + what);
  };

  Mask prev = 0;
  for (const EpochOutcome& e : run.epochs) {
    const double scale = std::max(1.0, std::abs(e.plan.value));
    const double tol = 1e-9 * scale;
    const Transfers& t = e.transfers;

    if (e.coalition != 0 && !valid_coalition(e.coalition)) {
      flag(e.epoch, "coalition violates the veto structure");
    }
    if (t.epsilon < 0.0 || t.epsilon > 1.0) {
      flag(e.epoch, "epsilon outside [0,1]");
    }

    if (e.coalition != 0) {
      // Budget balance.
      const double balance =
          t.compensation_total() - t.fee_total() - t.penalty_total();
      if (std::abs(balance) > tol) {
        flag(e.epoch, "budget balance off by " + format_double(balance));
      }

      // Floors, entry and exit rationality; the rationality inequalities
      // must hold for the selected slack and across its whole range.
      std::vector<double> eps_samples{t.epsilon};
      for (int i = 0; i < 20; ++i) {
        eps_samples.push_back(uniform01(0xace5ULL, StreamPurpose::TestScratch,
                                        static_cast<std::uint64_t>(e.epoch),
                                        static_cast<std::uint64_t>(i)));
      }
      for (int p = 0; p < static_cast<int>(e.opportunity.size()); ++p) {
        const std::size_t sp = static_cast<std::size_t>(p);
        const bool now = mask_contains(e.coalition, p);
        const bool before = mask_contains(prev, p);
        const double x = e.allocation.payoff(p);
        const double vout = e.opportunity[sp];
        if (now && before) {
          const double floor =
              std::max({0.0, e.counterfactual.payoff(p) - x, vout - x});
          if (t.compensations[sp] < floor - tol) {
            flag(e.epoch, player_name(run_scenario, p) +
                              " compensated below the floor");
          }
        } else if (now) {
          for (double eps : eps_samples) {
            const double fee = (1.0 - eps) * std::max(0.0, x - vout);
            if (x - fee < vout - tol) {
              flag(e.epoch, player_name(run_scenario, p) +
                                " entry rationality fails at eps " +
                                format_double(eps));
              break;
            }
          }
        } else if (before) {
          const double x_cf = e.counterfactual.payoff(p);
          for (double eps : eps_samples) {
            const double pen = (1.0 - eps) * std::max(0.0, vout - x_cf);
            if (x_cf > vout - pen + tol) {
              flag(e.epoch, player_name(run_scenario, p) +
                                " exit rationality fails at eps " +
                                format_double(eps));
              break;
            }
          }
        }
      }

      // Selected coalition maximizes value over the stored feasible set.
      for (Mask m : e.compatible) {
        for (const CandidateDiagnostics& d : e.candidates) {
          if (d.mask == m && d.value > e.plan.value + tol) {
            flag(e.epoch, "compatible coalition " + mask_to_string(m) +
                              " beats the selected one");
          }
        }
      }

      // Transfers are pure redistribution.
      double net_sum = 0.0;
      for (double v : e.net_payoffs) net_sum += v;
      if (std::abs(net_sum - e.plan.value) > tol) {
        flag(e.epoch, "net payoffs do not sum to the coalition value");
      }

      if (!e.stability.strongly_stable()) {
        flag(e.epoch, "selected coalition is not strongly stable");
      }
    } else {
      // Fallback bookkeeping: the InP takes the cheaper option.
      const double sustain = 0.0 - run_scenario.cost.maintenance_rate() * e.c_prev;
      const double dismantle = 0.0 - cost(0.0, e.c_prev, run_scenario.cost);
      const double best = std::max(sustain, dismantle);
      if (std::abs(e.inp_ledger - best) > tol_for(best)) {
        flag(e.epoch, "fallback ledger is not the cheaper option");
      }
    }
    prev = e.coalition;
  }
  return violations;
}

bool verify_epsilon_invariance(const Scenario& run_scenario, Exec exec) {
  auto compatible_sets = [&](const EpsilonPolicy& policy) {
    Scenario s = run_scenario;
    s.epsilon_policy = policy;
    const DynamicRun run = run_dynamic(s, exec);
    std::vector<std::vector<Mask>> sets;
    for (const EpochOutcome& e : run.epochs) sets.push_back(e.compatible);
    return sets;
  };
  const auto base = compatible_sets(run_scenario.epsilon_policy);
  const auto zero =
      compatible_sets(EpsilonPolicy{EpsilonMode::Fixed, 0.0});
  const auto half =
      compatible_sets(EpsilonPolicy{EpsilonMode::Fixed, 0.5});
  return base == zero && base == half;
}

}  // namespace coinvest

/**
 * \file coinvest_cli.cpp
 *
 * \brief Command-line front end: run experiments, sweep sensitivity,
 *        validate a scenario, show the effective configuration.
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

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coinvest/config.hpp"
#include "coinvest/harness.hpp"

namespace {

using coinvest::Scheme;

std::vector<Scheme> parse_schemes(const std::vector<std::string>& names) {
  if (names.empty()) {
    return {Scheme::Static, Scheme::Update, Scheme::Dynamic};
  }
  std::vector<Scheme> out;
  for (const std::string& n : names) {
    if (n == "static") {
      out.push_back(Scheme::Static);
    } else if (n == "update") {
      out.push_back(Scheme::Update);
    } else if (n == "dynamic") {
      out.push_back(Scheme::Dynamic);
    } else {
      throw CLI::ValidationError("--schemes", "unknown scheme '" + n + "'");
    }
  }
  return out;
}

std::vector<coinvest::RegimeSpec> parse_regimes(
    const std::vector<std::string>& names, double half_width) {
  if (names.empty()) {
    return coinvest::default_regimes(half_width);
  }
  std::vector<coinvest::RegimeSpec> out;
  for (const std::string& n : names) {
    // Either a preset name or an explicit "name:lower:upper" triple.
    const auto c1 = n.find(':');
    if (c1 == std::string::npos) {
      out.push_back(coinvest::regime_from_name(n, half_width));
      continue;
    }
    const auto c2 = n.find(':', c1 + 1);
    if (c2 == std::string::npos) {
      throw CLI::ValidationError("--regimes",
                                 "expected NAME or NAME:LOWER:UPPER");
    }
    coinvest::RegimeSpec spec;
    spec.name = n.substr(0, c1);
    spec.lower = std::stod(n.substr(c1 + 1, c2 - c1 - 1));
    spec.upper = std::stod(n.substr(c2 + 1));
    out.push_back(std::move(spec));
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out;
  if (count <= 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < count; ++i) {
    out.push_back(lo + (hi - lo) * i / (count - 1));
  }
  return out;
}

int fail_json(const std::string& what) {
  nlohmann::ordered_json err;
  err["error"] = what;
  std::cerr << err.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coalitional co-investment simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int runs = 20;
  std::uint64_t seed = 0;
  int slots_per_epoch = 0;
  int parallel = 1;
  double half_width = 60000.0;
  std::vector<std::string> scheme_names;
  std::vector<std::string> regime_names;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Scenario file (JSON)");
    cmd->add_option("--runs", runs, "Simulation runs per regime");
    cmd->add_option("--seed", seed, "Base seed (default: scenario seed)");
    cmd->add_option("--schemes", scheme_names,
                    "Subset of static,update,dynamic")
        ->delimiter(',');
    cmd->add_option("--regimes", regime_names,
                    "Preset names or NAME:LOWER:UPPER triples")
        ->delimiter(',');
    cmd->add_option("--regime-half-width", half_width,
                    "Half-width of preset opportunity ranges ($)");
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--slots-per-epoch", slots_per_epoch,
                    "Override representative slots per epoch");
    cmd->add_option("--parallel", parallel, "Worker threads");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Run the experiment grid");
  add_common(run_cmd);

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Sensitivity sweep over kappa and gamma");
  add_common(sweep_cmd);
  double kappa_lo = 0.0, kappa_hi = 6.0;
  int kappa_steps = 7;
  double gamma_lo = 2000.0, gamma_hi = 4000.0;
  int gamma_steps = 5;
  sweep_cmd->add_option("--kappa-min", kappa_lo, "Lowest kappa ($/vcore)");
  sweep_cmd->add_option("--kappa-max", kappa_hi, "Highest kappa ($/vcore)");
  sweep_cmd->add_option("--kappa-steps", kappa_steps, "Kappa grid points");
  sweep_cmd->add_option("--gamma-min", gamma_lo, "Lowest gamma ($)");
  sweep_cmd->add_option("--gamma-max", gamma_hi, "Highest gamma ($)");
  sweep_cmd->add_option("--gamma-steps", gamma_steps, "Gamma grid points");

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Run the invariant suite on a scenario");
  add_common(validate_cmd);

  CLI::App* show_cmd =
      app.add_subcommand("show-config", "Print the effective scenario JSON");
  show_cmd->add_option("--config", config_path, "Scenario file (JSON)");

  CLI11_PARSE(app, argc, argv);

  try {
    coinvest::Scenario scenario = config_path.empty()
                                      ? coinvest::default_scenario()
                                      : coinvest::load_scenario_file(config_path);
    if (slots_per_epoch > 0) {
      scenario.grid.slots_per_epoch = slots_per_epoch;
    }

    if (show_cmd->parsed()) {
      std::cout << coinvest::scenario_to_json(scenario).dump(2) << "\n";
      return 0;
    }

    coinvest::ExperimentConfig config;
    config.scenario = scenario;
    config.schemes = parse_schemes(scheme_names);
    config.regimes = parse_regimes(regime_names, half_width);
    config.runs = runs;
    config.base_seed = seed;
    config.out_dir = out_dir;
    config.parallel = parallel;

    if (run_cmd->parsed()) {
      const coinvest::ExperimentResult res = coinvest::run_experiment(config);
      for (const std::string& f : res.files) {
        std::cout << "wrote " << f << "\n";
      }
      return 0;
    }

    if (sweep_cmd->parsed()) {
      const auto rows = coinvest::sweep_sensitivity(
          config, linspace(kappa_lo, kappa_hi, kappa_steps),
          linspace(gamma_lo, gamma_hi, gamma_steps));
      std::cout << "sweep rows: " << rows.size() << " (written to " << out_dir
                << ")\n";
      return 0;
    }

    if (validate_cmd->parsed()) {
      scenario.validate();
      int failures = 0;
      auto report = [&failures](const std::string& name, bool ok,
                                const std::string& detail = "") {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!ok && !detail.empty()) std::cout << " -- " << detail;
        std::cout << "\n";
        if (!ok) ++failures;
      };

      report("scenario structure", true);
      for (int r = 0; r < std::min(runs, 3); ++r) {
        const coinvest::Scenario s = coinvest::run_scenario(
            scenario, config.regimes.front(), config.base_seed != 0
                                                  ? config.base_seed
                                                  : scenario.seed,
            r);
        const coinvest::DynamicRun run =
            coinvest::run_dynamic(s, parallel > 1 ? coinvest::Exec::OpenMP
                                                  : coinvest::Exec::Serial);
        const auto violations = coinvest::verify_run_invariants(s, run);
        std::string detail;
        for (const std::string& v : violations) detail += v + "; ";
        report("transfer/selection invariants (run " + std::to_string(r) + ")",
               violations.empty(), detail);
        report("epsilon invariance of the feasible set (run " +
                   std::to_string(r) + ")",
               coinvest::verify_epsilon_invariance(s));
      }
      return failures == 0 ? 0 : 2;
    }
  } catch (const std::exception& e) {
    return fail_json(e.what());
  }
  return 0;
}

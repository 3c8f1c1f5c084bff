/**
 * \file config.cpp
 *
 * \brief Strict scenario-file parsing and emission.
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

#include "coinvest/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace coinvest {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::runtime_error("config: " + where + ": " + what);
}

void expect_keys(const json& obj, const std::string& where,
                 const std::set<std::string>& required,
                 const std::set<std::string>& optional = {}) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!required.count(key) && !optional.count(key)) {
      fail(where, "unknown key '" + key + "'");
    }
  }
  for (const std::string& key : required) {
    if (!obj.contains(key)) fail(where, "missing key '" + key + "'");
  }
}

double get_number(const json& obj, const std::string& where,
                  const std::string& key) {
  if (!obj.at(key).is_number()) fail(where, "'" + key + "' must be a number");
  return obj.at(key).get<double>();
}

OpportunityCostModel parse_opportunity(const json& obj,
                                       const std::string& where) {
  expect_keys(obj, where, {"lower", "upper"}, {"fixed_zero_for_inp"});
  OpportunityCostModel o;
  o.lower = get_number(obj, where, "lower");
  o.upper = get_number(obj, where, "upper");
  if (obj.contains("fixed_zero_for_inp")) {
    o.fixed_zero_for_inp = obj.at("fixed_zero_for_inp").get<bool>();
  }
  return o;
}

LoadParams parse_load(const json& obj, const std::string& where) {
  expect_keys(obj, where, {"traffic_level", "diurnal"},
              {"noise_amplitude", "seasonal"});
  LoadParams lp;
  for (const json& v : obj.at("traffic_level")) {
    lp.traffic_level.push_back(v.get<double>());
  }
  if (obj.contains("noise_amplitude")) {
    lp.noise_amplitude = get_number(obj, where, "noise_amplitude");
  }
  if (obj.contains("seasonal")) {
    const json& s = obj.at("seasonal");
    expect_keys(s, where + ".seasonal", {"amplitude", "period_slots"});
    lp.seasonal.amplitude = get_number(s, where, "amplitude");
    lp.seasonal.period_slots = s.at("period_slots").get<int>();
  }
  const json& d = obj.at("diurnal");
  expect_keys(d, where + ".diurnal", {"a0"}, {"harmonics"});
  lp.diurnal_a0 = get_number(d, where + ".diurnal", "a0");
  if (d.contains("harmonics")) {
    for (const json& h : d.at("harmonics")) {
      expect_keys(h, where + ".diurnal.harmonics",
                  {"amplitude", "phase_hours"});
      lp.harmonics.push_back(Harmonic{h.at("amplitude").get<double>(),
                                      h.at("phase_hours").get<double>()});
    }
  }
  return lp;
}

}  // namespace

Scenario scenario_from_json(const nlohmann::ordered_json& doc) {
  expect_keys(doc, "<root>",
              {"schema_version", "seed", "grid", "cost", "players"},
              {"epsilon_policy"});
  if (!doc.at("schema_version").is_number_integer() ||
      doc.at("schema_version").get<int>() != kConfigSchemaVersion) {
    fail("<root>", "unsupported schema_version");
  }

  Scenario s;
  s.seed = doc.at("seed").get<std::uint64_t>();

  const json& grid = doc.at("grid");
  expect_keys(grid, "grid",
              {"epochs", "slots_per_epoch", "rho_hours", "delta_hours"});
  s.grid.epochs = grid.at("epochs").get<int>();
  s.grid.slots_per_epoch = grid.at("slots_per_epoch").get<int>();
  s.grid.rho_hours = get_number(grid, "grid", "rho_hours");
  s.grid.delta_hours = get_number(grid, "grid", "delta_hours");

  const json& cost = doc.at("cost");
  expect_keys(cost, "cost", {"d", "kappa", "gamma", "d_prime"});
  s.cost.d = get_number(cost, "cost", "d");
  s.cost.kappa = get_number(cost, "cost", "kappa");
  s.cost.gamma = get_number(cost, "cost", "gamma");
  s.cost.d_prime = get_number(cost, "cost", "d_prime");
  s.cost.delta_hours = s.grid.delta_hours;

  if (doc.contains("epsilon_policy")) {
    const json& ep = doc.at("epsilon_policy");
    expect_keys(ep, "epsilon_policy", {"mode"}, {"value"});
    const std::string mode = ep.at("mode").get<std::string>();
    if (mode == "midpoint") {
      s.epsilon_policy.mode = EpsilonMode::MidpointOfFeasible;
    } else if (mode == "fixed") {
      s.epsilon_policy.mode = EpsilonMode::Fixed;
      if (!ep.contains("value")) fail("epsilon_policy", "fixed mode needs 'value'");
      s.epsilon_policy.fixed_value = ep.at("value").get<double>();
      if (s.epsilon_policy.fixed_value < 0.0 ||
          s.epsilon_policy.fixed_value > 1.0) {
        fail("epsilon_policy", "value must lie in [0, 1]");
      }
    } else {
      fail("epsilon_policy", "mode must be 'midpoint' or 'fixed'");
    }
  }

  for (const json& pj : doc.at("players")) {
    const std::string where =
        "players[" + std::to_string(s.players.size()) + "]";
    const std::string kind = pj.value("kind", "");
    PlayerProfile prof;
    if (kind == "inp") {
      expect_keys(pj, where, {"kind"}, {"opportunity"});
      prof.id = PlayerId{PlayerKind::InP, 0};
      prof.opportunity = OpportunityCostModel{0.0, 0.0, true};
      if (pj.contains("opportunity")) {
        prof.opportunity = parse_opportunity(pj.at("opportunity"), where);
      }
    } else if (kind == "sp") {
      expect_keys(pj, where, {"kind", "index", "beta", "xi", "load",
                              "opportunity"});
      prof.id = PlayerId{PlayerKind::SP, pj.at("index").get<int>()};
      prof.utility.beta = get_number(pj, where, "beta");
      prof.utility.xi = get_number(pj, where, "xi");
      prof.load = parse_load(pj.at("load"), where + ".load");
      prof.opportunity = parse_opportunity(pj.at("opportunity"), where);
    } else {
      fail(where, "kind must be 'inp' or 'sp'");
    }
    s.players.push_back(std::move(prof));
  }

  s.validate();
  return s;
}

nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  json doc;
  doc["schema_version"] = kConfigSchemaVersion;
  doc["seed"] = s.seed;
  doc["grid"] = {{"epochs", s.grid.epochs},
                 {"slots_per_epoch", s.grid.slots_per_epoch},
                 {"rho_hours", s.grid.rho_hours},
                 {"delta_hours", s.grid.delta_hours}};
  doc["cost"] = {{"d", s.cost.d},
                 {"kappa", s.cost.kappa},
                 {"gamma", s.cost.gamma},
                 {"d_prime", s.cost.d_prime}};
  if (s.epsilon_policy.mode == EpsilonMode::Fixed) {
    doc["epsilon_policy"] = {{"mode", "fixed"},
                             {"value", s.epsilon_policy.fixed_value}};
  } else {
    doc["epsilon_policy"] = {{"mode", "midpoint"}};
  }
  doc["players"] = json::array();
  for (const PlayerProfile& p : s.players) {
    json pj;
    if (p.id.is_inp()) {
      pj["kind"] = "inp";
      pj["opportunity"] = {{"lower", p.opportunity.lower},
                           {"upper", p.opportunity.upper},
                           {"fixed_zero_for_inp", p.opportunity.fixed_zero_for_inp}};
    } else {
      pj["kind"] = "sp";
      pj["index"] = p.id.index;
      pj["beta"] = p.utility.beta;
      pj["xi"] = p.utility.xi;
      json lj;
      lj["traffic_level"] = p.load.traffic_level;
      if (p.load.noise_amplitude != 0.0) {
        lj["noise_amplitude"] = p.load.noise_amplitude;
      }
      if (p.load.seasonal.period_slots > 0) {
        lj["seasonal"] = {{"amplitude", p.load.seasonal.amplitude},
                          {"period_slots", p.load.seasonal.period_slots}};
      }
      json dj;
      dj["a0"] = p.load.diurnal_a0;
      dj["harmonics"] = json::array();
      for (const Harmonic& h : p.load.harmonics) {
        dj["harmonics"].push_back(
            {{"amplitude", h.amplitude}, {"phase_hours", h.phase_hours}});
      }
      lj["diurnal"] = std::move(dj);
      pj["load"] = std::move(lj);
      pj["opportunity"] = {{"lower", p.opportunity.lower},
                           {"upper", p.opportunity.upper}};
    }
    doc["players"].push_back(std::move(pj));
  }
  return doc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot open '" + path + "'");
  }
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw std::runtime_error("config: parse error in '" + path + "': " +
                             e.what());
  }
  return scenario_from_json(doc);
}

}  // namespace coinvest

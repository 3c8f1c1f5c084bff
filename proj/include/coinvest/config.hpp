/**
 * \file coinvest/config.hpp
 *
 * \brief Scenario configuration files: versioned JSON, unknown keys fatal.
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

#ifndef COINVEST_CONFIG_HPP
#define COINVEST_CONFIG_HPP

#include <string>

#include <json.hpp>

#include "coinvest/model.hpp"

namespace coinvest {

inline constexpr int kConfigSchemaVersion = 1;

/// Parses a scenario document. Throws std::runtime_error with a precise
/// message on unknown keys, missing keys, or invalid values; silent typos
/// in economic parameters are the main user hazard.
Scenario scenario_from_json(const nlohmann::ordered_json& doc);

nlohmann::ordered_json scenario_to_json(const Scenario& scenario);

Scenario load_scenario_file(const std::string& path);

}  // namespace coinvest

#endif  // COINVEST_CONFIG_HPP

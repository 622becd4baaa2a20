#pragma once

#include <string>

#include "json.hpp"

#include "attkit/sim.hpp"

namespace attkit::tools {

/// Scenario file schema: a plain JSON object mirroring ScenarioConfig.
/// Malformed documents raise std::invalid_argument naming the offending key.
nlohmann::json scenario_to_json(const ScenarioConfig& config);
ScenarioConfig scenario_from_json(const nlohmann::json& j);

ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const ScenarioConfig& config, const std::string& path);

}  // namespace attkit::tools

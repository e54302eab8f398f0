#pragma once

#include <string>

#include "atmas/eval/experiments.hpp"
#include "atmas/sim/sim.hpp"
#include "json.hpp"

namespace atmas::config {

// JSON (de)serialization for the three user-facing configs. Parsers accept
// partial objects (missing keys keep their defaults), reject unknown keys,
// and run the type's validate() before returning.
nlohmann::json scenario_to_json(const scenario::ScenarioConfig& cfg);
scenario::ScenarioConfig scenario_from_json(const nlohmann::json& j);

nlohmann::json experiment_to_json(const eval::ExperimentSpec& spec);
eval::ExperimentSpec experiment_from_json(const nlohmann::json& j);

nlohmann::json sim_to_json(const sim::SimConfig& cfg);
sim::SimConfig sim_from_json(const nlohmann::json& j);

// Throws std::invalid_argument naming the path on unreadable or invalid JSON.
nlohmann::json load_json_file(const std::string& path);

std::string experiment_kind_name(eval::ExperimentKind kind);
eval::ExperimentKind experiment_kind_from_name(const std::string& name);

}  // namespace atmas::config

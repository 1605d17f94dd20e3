#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "swipt/harness.hpp"
#include "swipt/model.hpp"

namespace swipt {

using Json = nlohmann::json;

/// Thrown for malformed configuration or scenario files.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

Json read_json_file(const std::filesystem::path& path);

/// A power given as a number (W) or as {"value": v, "unit": "W" | "mW" | "dBm"}.
double parse_power(const Json& node, const std::string& field);

/// Missing fields keep the simulation defaults.
SystemParams parse_params(const Json& node);
Json params_to_json(const SystemParams& params);

ExperimentConfig parse_experiment_config(const Json& node);
/// Full echo of the config; parse_experiment_config(config_to_json(c)) == c.
Json config_to_json(const ExperimentConfig& config);

/// Explicit scenario {"gains", "power_caps", "min_harvest", "params"} or a
/// generator spec {"generator": {"n_ports", "seed", "power_cap",
/// "min_harvest"[, "n_devices"]}, "params"}.
ScenarioSingle parse_scenario_single(const Json& node);
ScenarioMulti parse_scenario_multi(const Json& node);

Json solution_to_json(const SingleSolution& solution);
Json solution_to_json(const MultiSolution& solution);

}  // namespace swipt

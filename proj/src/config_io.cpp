#include "swipt/config_io.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace swipt {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void check_keys(const Json& node, const std::set<std::string>& allowed, const std::string& where) {
  require(node.is_object(), where + " must be a JSON object");
  for (const auto& item : node.items()) {
    require(allowed.count(item.key()) > 0, "unknown field '" + item.key() + "' in " + where);
  }
}

double number(const Json& node, const std::string& field) {
  require(node.is_number(), "'" + field + "' must be a number");
  return node.get<double>();
}

long long integer(const Json& node, const std::string& field) {
  require(node.is_number_integer(), "'" + field + "' must be an integer");
  return node.get<long long>();
}

double to_watts(double value, const std::string& unit, const std::string& field) {
  if (unit == "W") return value;
  if (unit == "mW") return value * 1e-3;
  if (unit == "dBm") return dbm_to_watts(value);
  throw ConfigError("unknown unit '" + unit + "' for '" + field + "'");
}

VectorXd vector_of(const Json& node, const std::string& field) {
  require(node.is_array() && !node.empty(), "'" + field + "' must be a non-empty array");
  VectorXd v(static_cast<Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) v(static_cast<Index>(i)) = number(node[i], field);
  return v;
}

// A scalar broadcast to `size` entries or an explicit array of that size.
VectorXd broadcast(const Json& node, Index size, const std::string& field, bool power) {
  if (node.is_array()) {
    VectorXd v = vector_of(node, field);
    require(v.size() == size, "'" + field + "' has the wrong length");
    return v;
  }
  return VectorXd::Constant(size, power ? parse_power(node, field) : number(node, field));
}

struct GeneratorSpec {
  Index n_ports = 0;
  Index n_devices = 1;
  std::uint64_t seed = 0;
  double power_cap = 0.0;
  double min_harvest = 0.0;
};

GeneratorSpec parse_generator(const Json& g) {
  check_keys(g, {"n_ports", "n_devices", "seed", "power_cap", "min_harvest"}, "generator");
  for (const char* f : {"n_ports", "seed", "power_cap", "min_harvest"}) {
    require(g.contains(f), std::string("generator needs '") + f + "'");
  }
  GeneratorSpec spec;
  spec.n_ports = static_cast<Index>(integer(g["n_ports"], "n_ports"));
  if (g.contains("n_devices")) spec.n_devices = static_cast<Index>(integer(g["n_devices"], "n_devices"));
  require(g["seed"].is_number_unsigned(), "'seed' must be a non-negative integer");
  spec.seed = g["seed"].get<std::uint64_t>();
  spec.power_cap = parse_power(g["power_cap"], "power_cap");
  spec.min_harvest = parse_power(g["min_harvest"], "min_harvest");
  require(spec.n_ports >= 1 && spec.n_devices >= 1, "generator counts must be at least 1");
  return spec;
}

SystemParams params_of(const Json& node) {
  return node.contains("params") ? parse_params(node["params"]) : SystemParams::table_one();
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  require(static_cast<bool>(f), "cannot open " + path.string());
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

double parse_power(const Json& node, const std::string& field) {
  if (node.is_number()) return node.get<double>();
  require(node.is_object() && node.contains("value"),
          "'" + field + "' must be a number or {\"value\", \"unit\"}");
  check_keys(node, {"value", "unit"}, field);
  const std::string unit = node.contains("unit") ? node["unit"].get<std::string>() : "W";
  return to_watts(number(node["value"], field), unit, field);
}

SystemParams parse_params(const Json& node) {
  check_keys(node,
             {"noise_power", "circuit_power", "conversion_efficiency", "path_loss_exponent",
              "square_side", "min_distance", "reference_gain", "carrier_hz", "fading"},
             "params");
  require(!(node.contains("reference_gain") && node.contains("carrier_hz")),
          "give either 'reference_gain' or 'carrier_hz', not both");
  SystemParams p = SystemParams::table_one();
  if (node.contains("noise_power")) p.noise_power = parse_power(node["noise_power"], "noise_power");
  if (node.contains("circuit_power")) {
    p.circuit_power = parse_power(node["circuit_power"], "circuit_power");
  }
  if (node.contains("conversion_efficiency")) {
    p.conversion_efficiency = number(node["conversion_efficiency"], "conversion_efficiency");
  }
  if (node.contains("path_loss_exponent")) {
    p.path_loss_exponent = number(node["path_loss_exponent"], "path_loss_exponent");
  }
  if (node.contains("square_side")) p.square_side = number(node["square_side"], "square_side");
  if (node.contains("min_distance")) p.min_distance = number(node["min_distance"], "min_distance");
  if (node.contains("reference_gain")) {
    p.reference_gain = number(node["reference_gain"], "reference_gain");
  }
  if (node.contains("carrier_hz")) {
    const double hz = number(node["carrier_hz"], "carrier_hz");
    require(hz > 0.0, "'carrier_hz' must be positive");
    p.reference_gain = free_space_reference_gain(hz);
  }
  if (node.contains("fading")) {
    const std::string f = node["fading"].get<std::string>();
    require(f == "rayleigh" || f == "none", "'fading' must be \"rayleigh\" or \"none\"");
    p.fading = f == "rayleigh" ? FadingModel::kRayleigh : FadingModel::kNone;
  }
  try {
    p.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return p;
}

Json params_to_json(const SystemParams& p) {
  return {{"noise_power", p.noise_power},
          {"circuit_power", p.circuit_power},
          {"conversion_efficiency", p.conversion_efficiency},
          {"path_loss_exponent", p.path_loss_exponent},
          {"square_side", p.square_side},
          {"min_distance", p.min_distance},
          {"reference_gain", p.reference_gain},
          {"fading", p.fading == FadingModel::kRayleigh ? "rayleigh" : "none"}};
}

ExperimentConfig parse_experiment_config(const Json& node) {
  check_keys(node,
             {"problem", "sweep_kind", "sweep_values", "sweep_unit", "params", "n_ports",
              "n_devices", "power_cap", "min_harvest", "schemes", "n_realizations", "base_seed",
              "fixed_alpha", "alpha_grid_step", "infeasible_policy", "label", "run"},
             "experiment config");
  for (const char* f : {"problem", "sweep_kind", "sweep_values", "schemes"}) {
    require(node.contains(f), std::string("experiment config needs '") + f + "'");
  }
  ExperimentConfig c;
  try {
    c.problem = parse_problem_kind(node["problem"].get<std::string>());
    c.sweep_kind = parse_sweep_kind(node["sweep_kind"].get<std::string>());
    if (c.problem == ProblemKind::kMulti) c.n_devices = 4;

    const std::string unit = node.value("sweep_unit", std::string("W"));
    const bool power_sweep =
        c.sweep_kind == SweepKind::kMinHarvest || c.sweep_kind == SweepKind::kPowerCap;
    require(power_sweep || unit == "W", "'sweep_unit' applies to power sweeps only");
    require(node["sweep_values"].is_array(), "'sweep_values' must be an array");
    for (const auto& v : node["sweep_values"]) {
      const double x = number(v, "sweep_values");
      c.sweep_values.push_back(power_sweep ? to_watts(x, unit, "sweep_values") : x);
    }

    if (node.contains("params")) c.params = parse_params(node["params"]);
    if (node.contains("n_ports")) c.n_ports = static_cast<Index>(integer(node["n_ports"], "n_ports"));
    if (node.contains("n_devices")) {
      c.n_devices = static_cast<Index>(integer(node["n_devices"], "n_devices"));
    }
    if (node.contains("power_cap")) c.power_cap = parse_power(node["power_cap"], "power_cap");
    if (node.contains("min_harvest")) c.min_harvest = parse_power(node["min_harvest"], "min_harvest");
    require(node["schemes"].is_array(), "'schemes' must be an array");
    for (const auto& s : node["schemes"]) c.schemes.push_back(s.get<std::string>());
    if (node.contains("n_realizations")) {
      c.n_realizations = static_cast<int>(integer(node["n_realizations"], "n_realizations"));
    }
    if (node.contains("base_seed")) {
      require(node["base_seed"].is_number_unsigned(), "'base_seed' must be a non-negative integer");
      c.base_seed = node["base_seed"].get<std::uint64_t>();
    }
    if (node.contains("fixed_alpha")) c.fixed_alpha = number(node["fixed_alpha"], "fixed_alpha");
    if (node.contains("alpha_grid_step")) {
      c.alpha_grid_step = number(node["alpha_grid_step"], "alpha_grid_step");
    }
    if (node.contains("infeasible_policy")) {
      c.infeasible_policy = parse_infeasible_policy(node["infeasible_policy"].get<std::string>());
    }
    if (node.contains("label")) c.label = node["label"].get<std::string>();
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(e.what());
  }
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  return {{"problem", to_string(c.problem)},
          {"sweep_kind", to_string(c.sweep_kind)},
          {"sweep_values", c.sweep_values},
          {"params", params_to_json(c.params)},
          {"n_ports", c.n_ports},
          {"n_devices", c.n_devices},
          {"power_cap", c.power_cap},
          {"min_harvest", c.min_harvest},
          {"schemes", c.schemes},
          {"n_realizations", c.n_realizations},
          {"base_seed", c.base_seed},
          {"fixed_alpha", c.fixed_alpha},
          {"alpha_grid_step", c.alpha_grid_step},
          {"infeasible_policy", to_string(c.infeasible_policy)},
          {"label", c.label}};
}

ScenarioSingle parse_scenario_single(const Json& node) {
  try {
    check_keys(node, {"gains", "power_caps", "min_harvest", "params", "generator"}, "scenario");
    const SystemParams params = params_of(node);
    ScenarioSingle s;
    if (node.contains("generator")) {
      require(!node.contains("gains"), "give either 'generator' or 'gains', not both");
      const GeneratorSpec g = parse_generator(node["generator"]);
      require(g.n_devices == 1, "single-device scenario needs n_devices = 1");
      s = generate_scenario_single(g.n_ports, g.seed, params, g.power_cap, g.min_harvest);
    } else {
      for (const char* f : {"gains", "power_caps", "min_harvest"}) {
        require(node.contains(f), std::string("scenario needs '") + f + "'");
      }
      s.gains = vector_of(node["gains"], "gains");
      s.power_caps = broadcast(node["power_caps"], s.gains.size(), "power_caps", true);
      s.min_harvest = parse_power(node["min_harvest"], "min_harvest");
      s.params = params;
    }
    s.validate();
    return s;
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(e.what());
  }
}

ScenarioMulti parse_scenario_multi(const Json& node) {
  try {
    check_keys(node, {"gains", "power_caps", "min_harvest", "params", "generator"}, "scenario");
    const SystemParams params = params_of(node);
    ScenarioMulti s;
    if (node.contains("generator")) {
      require(!node.contains("gains"), "give either 'generator' or 'gains', not both");
      const GeneratorSpec g = parse_generator(node["generator"]);
      s = generate_scenario_multi(g.n_ports, g.n_devices, g.seed, params, g.power_cap,
                                  g.min_harvest);
    } else {
      for (const char* f : {"gains", "power_caps", "min_harvest"}) {
        require(node.contains(f), std::string("scenario needs '") + f + "'");
      }
      const Json& rows = node["gains"];
      require(rows.is_array() && !rows.empty() && rows[0].is_array() && !rows[0].empty(),
              "'gains' must be an N x K array of rows");
      const auto n = static_cast<Index>(rows.size());
      const auto k = static_cast<Index>(rows[0].size());
      s.gains.resize(n, k);
      for (Index i = 0; i < n; ++i) {
        const VectorXd row = vector_of(rows[static_cast<std::size_t>(i)], "gains");
        require(row.size() == k, "'gains' rows must all have K entries");
        s.gains.row(i) = row.transpose();
      }
      s.power_caps = broadcast(node["power_caps"], n, "power_caps", true);
      s.min_harvest = broadcast(node["min_harvest"], k, "min_harvest", true);
      s.params = params;
    }
    s.validate();
    return s;
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(e.what());
  }
}

namespace {

Json stats_json(const SolverStats& st) {
  return {{"outer_iterations", st.outer_iterations},
          {"inner_iterations", st.inner_iterations},
          {"converged", st.converged},
          {"final_residual", st.final_residual}};
}

std::vector<double> to_std(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

Json solution_to_json(const SingleSolution& s) {
  return {{"feasible", s.feasible},
          {"powers", to_std(s.powers)},
          {"ps_ratio", s.ps_ratio},
          {"rate_nats", s.rate},
          {"harvested_w", s.harvested},
          {"ee_nats_per_joule", s.ee},
          {"ee_bits_per_joule", s.ee * kLog2E},
          {"stats", stats_json(s.stats)}};
}

Json solution_to_json(const MultiSolution& s) {
  Json powers = Json::array();
  for (Index i = 0; i < s.powers.rows(); ++i) powers.push_back(to_std(s.powers.row(i).transpose()));
  return {{"feasible", s.feasible},
          {"powers", powers},
          {"ps_ratios", to_std(s.ps_ratios)},
          {"rates_nats", to_std(s.rates)},
          {"harvested_w", to_std(s.harvested)},
          {"ee_nats_per_joule", s.ee},
          {"ee_bits_per_joule", s.ee * kLog2E},
          {"stats", stats_json(s.stats)}};
}

}  // namespace swipt

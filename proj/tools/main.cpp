// Command-line front end: single and multi-device solves and Monte-Carlo sweeps.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "swipt/config_io.hpp"
#include "swipt/harness.hpp"
#include "swipt/multi_benchmarks.hpp"
#include "swipt/single_optimal.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kInfeasible = 3, kNumerical = 4 };

using namespace swipt;

int solve_single(const std::string& path, const std::string& scheme, double alpha) {
  const ScenarioSingle s = parse_scenario_single(read_json_file(path));
  spdlog::info("single-device scenario: {} ports, min harvest {:.3e} W", s.ports(), s.min_harvest);
  SingleSolution sol;
  if (scheme == "optimal") {
    sol = solve_p1(s);
  } else if (scheme == "dinkelbach") {
    sol = solve_dinkelbach_single(s);
  } else if (scheme == "fixed-alpha") {
    sol = solve_fixed_alpha(s, alpha);
  } else {
    sol = solve_se_max(s);
  }
  Json out = solution_to_json(sol);
  out["scheme"] = scheme;
  std::cout << out.dump(2) << '\n';
  return sol.feasible ? kOk : kInfeasible;
}

int solve_multi(const std::string& path, const std::string& scheme, double alpha) {
  const ScenarioMulti s = parse_scenario_multi(read_json_file(path));
  spdlog::info("multi-device scenario: {} ports, {} devices", s.ports(), s.devices());
  MultiScheme ms;
  AssociationMap map;
  if (scheme == "fixed-alpha") {
    ms.fixed_alpha = alpha;
  } else if (scheme == "nearest") {
    map = make_association(s);
    ms.association = &map;
  }
  const MultiRun run = run_multi(s, ms);
  Json out = solution_to_json(run.solution);
  out["scheme"] = scheme;
  out["ellipsoid_failures"] = run.ellipsoid_failures;
  out["dual"] = {{"upsilon", std::vector<double>(run.duals.upsilon.data(),
                                                 run.duals.upsilon.data() + run.duals.upsilon.size())},
                 {"mu", std::vector<double>(run.duals.mu.data(),
                                            run.duals.mu.data() + run.duals.mu.size())}};
  std::cout << out.dump(2) << '\n';
  if (run.solution.feasible) return kOk;
  if (run.ellipsoid_failures > 0) {
    spdlog::error("ellipsoid search broke down and no feasible point was found");
    return kNumerical;
  }
  return kInfeasible;
}

int experiment(const std::string& path, const std::string& out_dir,
               std::optional<std::uint64_t> seed, std::optional<int> realizations, int threads) {
  Json node = read_json_file(path);
  if (seed) node["base_seed"] = *seed;
  if (realizations) node["n_realizations"] = *realizations;
  const ExperimentConfig config = parse_experiment_config(node);
  spdlog::info("{} sweep over {} with {} points x {} realizations", to_string(config.problem),
               to_string(config.sweep_kind), config.sweep_values.size(), config.n_realizations);
  const ExperimentResult result = run_experiment(config, threads);
  emit_results(result, out_dir);
  bool any_feasible = false;
  for (const auto& p : result.points) {
    any_feasible = any_feasible || p.n_feasible > 0;
    if (p.n_failures > 0) {
      spdlog::warn("{} at {}: {} runs hit a numerical breakdown", p.scheme, p.sweep_value,
                   p.n_failures);
    }
  }
  spdlog::info("wrote {}/results.csv and results.json", out_dir);
  if (!any_feasible) {
    spdlog::error("no instance was feasible");
    return kInfeasible;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficiency solvers for SWIPT distributed antenna systems"};
  app.require_subcommand(1);

  std::string log_level = "warn";
  int threads = 0;
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}));
  app.add_option("--threads", threads, "worker threads for experiments (0 = auto)")
      ->check(CLI::NonNegativeNumber);

  std::string scenario_path;
  std::string scheme;
  double alpha = 0.5;

  auto* single = app.add_subcommand("solve-single", "solve one single-device scenario");
  single->add_option("--scenario", scenario_path, "scenario JSON")->required();
  single->add_option("--scheme", scheme, "solver")
      ->required()
      ->check(CLI::IsMember(single_schemes()));
  single->add_option("--alpha", alpha, "power-splitting ratio for fixed-alpha")
      ->check(CLI::Range(0.0, 1.0));

  auto* multi = app.add_subcommand("solve-multi", "solve one multi-device scenario");
  multi->add_option("--scenario", scenario_path, "scenario JSON")->required();
  multi->add_option("--scheme", scheme, "solver")->required()->check(CLI::IsMember(multi_schemes()));
  multi->add_option("--alpha", alpha, "power-splitting ratio for fixed-alpha")
      ->check(CLI::Range(0.0, 1.0));

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  auto* exp = app.add_subcommand("experiment", "run a Monte-Carlo sweep");
  exp->add_option("--config", config_path, "experiment config JSON")->required();
  exp->add_option("--out", out_dir, "output directory")->required();
  exp->add_option("--seed", seed, "override base_seed");
  exp->add_option("--realizations", realizations, "override n_realizations")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  spdlog::set_default_logger(spdlog::stderr_color_mt("swipt"));
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*single) return solve_single(scenario_path, scheme, alpha);
    if (*multi) return solve_multi(scenario_path, scheme, alpha);
    return experiment(config_path, out_dir, seed, realizations, threads);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

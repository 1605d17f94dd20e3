#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "swipt/model.hpp"
#include "swipt/multi_solver.hpp"
#include "swipt/single_benchmarks.hpp"

namespace swipt {

enum class ProblemKind { kSingle, kMulti };
enum class SweepKind { kMinHarvest, kPowerCap, kNumPorts, kNumDevices };

/// How infeasible instances enter the EE statistics.
enum class InfeasiblePolicy {
  kCountAsZero,  // EE = 0, mean over every realization
  kExclude,      // mean over feasible realizations only
};

std::string to_string(ProblemKind kind);
std::string to_string(SweepKind kind);
std::string to_string(InfeasiblePolicy policy);
ProblemKind parse_problem_kind(const std::string& text);
SweepKind parse_sweep_kind(const std::string& text);
InfeasiblePolicy parse_infeasible_policy(const std::string& text);

/// Scheme identifiers accepted for each problem kind.
const std::vector<std::string>& single_schemes();  // optimal, dinkelbach, fixed-alpha, se-max
const std::vector<std::string>& multi_schemes();   // proposed, fixed-alpha, nearest

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::kSingle;
  SweepKind sweep_kind = SweepKind::kMinHarvest;
  std::vector<double> sweep_values;
  SystemParams params = SystemParams::table_one();
  Index n_ports = 20;
  Index n_devices = 1;
  double power_cap = 2.0;     // W
  double min_harvest = 1e-3;  // W
  std::vector<std::string> schemes;
  int n_realizations = 1000;
  std::uint64_t base_seed = 1;
  double fixed_alpha = 0.5;
  double alpha_grid_step = 0.01;
  InfeasiblePolicy infeasible_policy = InfeasiblePolicy::kCountAsZero;
  std::string label;  // free text carried into the sidecar

  void validate() const;
};

struct PointSummary {
  std::string scheme;
  double sweep_value = 0.0;
  double ee_mean = 0.0;  // nats / J
  double ee_std = 0.0;   // sample standard deviation
  double ci95 = 0.0;     // 1.96 std / sqrt(n)
  int n_feasible = 0;
  int n_total = 0;
  int n_failures = 0;  // runs with a numerical breakdown (reported, not fatal)
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<PointSummary> points;  // scheme-major, sweep values in order
  // ee[scheme][sweep point][realization]; 0 for infeasible instances.
  std::vector<std::vector<std::vector<double>>> ee;
  std::vector<std::vector<std::vector<char>>> feasible;

  const PointSummary& at(const std::string& scheme, std::size_t sweep_index) const;
  std::vector<double> means(const std::string& scheme) const;
};

/// Seed of realization r: base_seed XOR r. The same seed is used at every
/// sweep value, so sweeps compare schemes on common random topologies.
std::uint64_t realization_seed(std::uint64_t base_seed, int realization);

/// Runs every scheme on every (sweep value, realization) pair. Realizations
/// are distributed over `threads` workers (0 = hardware concurrency); the
/// reduction is ordered by realization index, so output does not depend on
/// the thread count.
ExperimentResult run_experiment(const ExperimentConfig& config, int threads = 1);

/// Writes results.csv and results.json (a config that reproduces the run) to
/// out_dir, creating it if needed.
void emit_results(const ExperimentResult& result, const std::filesystem::path& out_dir);

/// CSV text exactly as emit_results writes it.
std::string results_csv(const ExperimentResult& result);

}  // namespace swipt

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace swipt {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// log2(e): multiply a value in nats by this to get bits.
inline constexpr double kLog2E = 1.4426950408889634074;

/// Thrown when an input violates a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an iterative routine breaks down numerically.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Converts a power in dBm to watts.
double dbm_to_watts(double dbm);

/// Free-space path gain at 1 m for a carrier frequency in Hz, (c / 4 pi f)^2.
double free_space_reference_gain(double carrier_hz);

enum class FadingModel { kRayleigh, kNone };

/// System-wide constants shared by every scenario. All values are SI.
struct SystemParams {
  double noise_power = 0.0;            // sigma^2 [W]
  double circuit_power = 0.0;          // p_c [W]
  double conversion_efficiency = 0.0;  // zeta, (0, 1]
  double path_loss_exponent = 3.0;
  double square_side = 10.0;           // [m]
  double min_distance = 1.0;           // distances are clamped below this [m]
  double reference_gain = 1.0;         // path gain at 1 m (dimensionless)
  FadingModel fading = FadingModel::kRayleigh;

  void validate() const;

  /// Simulation constants: -104 dBm noise, 0.5 W circuit power, zeta = 0.6,
  /// exponent 3, 10 m square, 1 m clamp, 915 MHz free-space gain at 1 m.
  static SystemParams table_one();
};

struct SolverStats {
  int outer_iterations = 0;
  int inner_iterations = 0;
  bool converged = false;
  double final_residual = 0.0;
};

/// One device served by N ports.
struct ScenarioSingle {
  VectorXd gains;       // h_i
  VectorXd power_caps;  // P_i max [W]
  double min_harvest = 0.0;  // [W]
  SystemParams params;

  Index ports() const { return gains.size(); }
  void validate() const;
};

/// K devices served by N ports over K orthogonal channels.
struct ScenarioMulti {
  MatrixXd gains;        // N x K, h_{i,k}
  VectorXd power_caps;   // N
  VectorXd min_harvest;  // K
  SystemParams params;

  Index ports() const { return gains.rows(); }
  Index devices() const { return gains.cols(); }
  void validate() const;
};

struct SingleSolution {
  VectorXd powers;
  double ps_ratio = 0.0;
  double rate = 0.0;       // nats
  double harvested = 0.0;  // W
  double ee = 0.0;         // nats / J
  bool feasible = false;
  SolverStats stats;
};

struct MultiSolution {
  MatrixXd powers;  // N x K
  VectorXd ps_ratios;
  VectorXd rates;
  VectorXd harvested;
  double ee = 0.0;
  bool feasible = false;
  SolverStats stats;
};

/// Gain of one link: reference_gain * fading * max(d, min_distance)^-exponent.
double channel_gain(double distance, double fading, const SystemParams& params);

/// Random topology: ports and devices uniform in the square, unit-mean
/// exponential power fading per link. Device positions, port positions and
/// per-port fading use separate deterministic streams derived from the seed,
/// so scenarios with more ports (or devices) extend those with fewer.
ScenarioSingle generate_scenario_single(Index n_ports, std::uint64_t seed,
                                        const SystemParams& params, double cap,
                                        double min_harvest);

ScenarioMulti generate_scenario_multi(Index n_ports, Index n_devices,
                                      std::uint64_t seed,
                                      const SystemParams& params, double cap,
                                      double min_harvest);

/// Column k of a multi-device scenario viewed as a single-device scenario.
ScenarioSingle device_view(const ScenarioMulti& scenario, Index device);

double rate_single(double alpha, const VectorXd& powers,
                   const ScenarioSingle& scenario);
double harvested_single(double alpha, const VectorXd& powers,
                        const ScenarioSingle& scenario);
double ee_single(const VectorXd& powers, double rate, double circuit_power);

struct MultiEvaluation {
  VectorXd rates;
  VectorXd harvested;
  double ee = 0.0;
};

MultiEvaluation evaluate_multi(const VectorXd& alphas, const MatrixXd& powers,
                               const ScenarioMulti& scenario);

/// Fills rate, harvested energy and EE for a power/ratio pair.
SingleSolution make_single_solution(VectorXd powers, double alpha,
                                    const ScenarioSingle& scenario,
                                    SolverStats stats);

SingleSolution infeasible_single(const ScenarioSingle& scenario,
                                 SolverStats stats = {});

/// E_bar / zeta <= sum_i h_i P_i.
bool harvest_feasible(const ScenarioSingle& scenario);

/// zeta * sum_i h_{i,k} P_i >= E_bar_k for every device.
bool harvest_feasible(const ScenarioMulti& scenario);

}  // namespace swipt

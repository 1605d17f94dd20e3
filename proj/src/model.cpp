#include "swipt/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace swipt {

namespace {

enum Stream : std::uint32_t { kDeviceStream = 0, kPortStream = 1, kFadingStream = 2 };

std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t stream,
                            std::uint32_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), stream, index};
  return std::mt19937_64(seq);
}

// Uniform in the open interval (0, 1); mapping is fixed so draws are
// identical across standard library implementations.
double open_unit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double fading_draw(std::mt19937_64& rng, FadingModel model) {
  const double u = open_unit(rng);
  return model == FadingModel::kRayleigh ? -std::log(u) : 1.0;
}

struct Point {
  double x;
  double y;
};

std::vector<Point> draw_points(std::mt19937_64& rng, Index count, double side) {
  std::vector<Point> out(static_cast<std::size_t>(count));
  for (auto& p : out) {
    p.x = side * open_unit(rng);
    p.y = side * open_unit(rng);
  }
  return out;
}

void require(bool condition, const char* what) {
  if (!condition) throw InvalidInput(what);
}

}  // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double free_space_reference_gain(double carrier_hz) {
  constexpr double kLightSpeed = 299792458.0;
  const double ratio = kLightSpeed / (4.0 * std::numbers::pi * carrier_hz);
  return ratio * ratio;
}

void SystemParams::validate() const {
  require(noise_power > 0.0 && std::isfinite(noise_power), "noise_power must be > 0");
  require(circuit_power > 0.0 && std::isfinite(circuit_power), "circuit_power must be > 0");
  require(conversion_efficiency > 0.0 && conversion_efficiency <= 1.0,
          "conversion_efficiency must lie in (0, 1]");
  require(square_side > 0.0, "square_side must be > 0");
  require(min_distance > 0.0, "min_distance must be > 0");
  require(reference_gain > 0.0, "reference_gain must be > 0");
  require(path_loss_exponent >= 0.0, "path_loss_exponent must be >= 0");
}

SystemParams SystemParams::table_one() {
  SystemParams p;
  p.noise_power = dbm_to_watts(-104.0);
  p.circuit_power = 0.5;
  p.conversion_efficiency = 0.6;
  p.path_loss_exponent = 3.0;
  p.square_side = 10.0;
  p.min_distance = 1.0;
  p.reference_gain = free_space_reference_gain(915e6);
  p.fading = FadingModel::kRayleigh;
  return p;
}

void ScenarioSingle::validate() const {
  params.validate();
  require(gains.size() >= 1, "scenario needs at least one port");
  require(power_caps.size() == gains.size(), "gains and power_caps differ in length");
  require((gains.array() > 0.0).all() && gains.allFinite(), "gains must be positive");
  require((power_caps.array() > 0.0).all() && power_caps.allFinite(),
          "power caps must be positive");
  require(min_harvest >= 0.0 && std::isfinite(min_harvest), "min_harvest must be >= 0");
}

void ScenarioMulti::validate() const {
  params.validate();
  require(gains.rows() >= 1 && gains.cols() >= 1, "scenario needs N >= 1 and K >= 1");
  require(power_caps.size() == gains.rows(), "power_caps length must equal N");
  require(min_harvest.size() == gains.cols(), "min_harvest length must equal K");
  require((gains.array() > 0.0).all() && gains.allFinite(), "gains must be positive");
  require((power_caps.array() > 0.0).all() && power_caps.allFinite(),
          "power caps must be positive");
  require((min_harvest.array() >= 0.0).all() && min_harvest.allFinite(),
          "min_harvest must be >= 0");
}

double channel_gain(double distance, double fading, const SystemParams& params) {
  const double d = std::max(distance, params.min_distance);
  return params.reference_gain * fading * std::pow(d, -params.path_loss_exponent);
}

ScenarioMulti generate_scenario_multi(Index n_ports, Index n_devices, std::uint64_t seed,
                                      const SystemParams& params, double cap,
                                      double min_harvest) {
  require(n_ports >= 1, "n_ports must be >= 1");
  require(n_devices >= 1, "n_devices must be >= 1");
  require(cap > 0.0, "power cap must be > 0");
  require(min_harvest >= 0.0, "min_harvest must be >= 0");
  params.validate();

  auto device_rng = make_stream(seed, kDeviceStream);
  auto port_rng = make_stream(seed, kPortStream);
  const auto devices = draw_points(device_rng, n_devices, params.square_side);
  const auto ports = draw_points(port_rng, n_ports, params.square_side);

  ScenarioMulti s;
  s.params = params;
  s.gains.resize(n_ports, n_devices);
  for (Index i = 0; i < n_ports; ++i) {
    auto fading_rng = make_stream(seed, kFadingStream, static_cast<std::uint32_t>(i));
    const Point& port = ports[static_cast<std::size_t>(i)];
    for (Index k = 0; k < n_devices; ++k) {
      const Point& dev = devices[static_cast<std::size_t>(k)];
      const double d = std::hypot(port.x - dev.x, port.y - dev.y);
      s.gains(i, k) = channel_gain(d, fading_draw(fading_rng, params.fading), params);
    }
  }
  s.power_caps = VectorXd::Constant(n_ports, cap);
  s.min_harvest = VectorXd::Constant(n_devices, min_harvest);
  return s;
}

ScenarioSingle generate_scenario_single(Index n_ports, std::uint64_t seed,
                                        const SystemParams& params, double cap,
                                        double min_harvest) {
  return device_view(generate_scenario_multi(n_ports, 1, seed, params, cap, min_harvest), 0);
}

ScenarioSingle device_view(const ScenarioMulti& scenario, Index device) {
  require(device >= 0 && device < scenario.devices(), "device index out of range");
  ScenarioSingle s;
  s.gains = scenario.gains.col(device);
  s.power_caps = scenario.power_caps;
  s.min_harvest = scenario.min_harvest(device);
  s.params = scenario.params;
  return s;
}

namespace {

double received_power(const VectorXd& powers, const ScenarioSingle& scenario) {
  if (powers.size() != scenario.gains.size()) {
    throw InvalidInput("power vector length does not match the number of ports");
  }
  return scenario.gains.dot(powers);
}

}  // namespace

double rate_single(double alpha, const VectorXd& powers, const ScenarioSingle& scenario) {
  const double s = received_power(powers, scenario);
  return std::log1p(alpha * s / scenario.params.noise_power);
}

double harvested_single(double alpha, const VectorXd& powers,
                        const ScenarioSingle& scenario) {
  const double s = received_power(powers, scenario);
  return scenario.params.conversion_efficiency * (1.0 - alpha) * s;
}

double ee_single(const VectorXd& powers, double rate, double circuit_power) {
  return rate / (powers.sum() + circuit_power);
}

MultiEvaluation evaluate_multi(const VectorXd& alphas, const MatrixXd& powers,
                               const ScenarioMulti& scenario) {
  const Index n = scenario.ports();
  const Index k_count = scenario.devices();
  if (powers.rows() != n || powers.cols() != k_count || alphas.size() != k_count) {
    throw InvalidInput("evaluate_multi: dimension mismatch");
  }
  const double sigma2 = scenario.params.noise_power;
  const double zeta = scenario.params.conversion_efficiency;
  const VectorXd port_totals = powers.rowwise().sum();

  MultiEvaluation out;
  out.rates.resize(k_count);
  out.harvested.resize(k_count);
  for (Index k = 0; k < k_count; ++k) {
    const double decoded = scenario.gains.col(k).dot(powers.col(k));
    out.rates(k) = std::log1p(alphas(k) * decoded / sigma2) / static_cast<double>(k_count);
    out.harvested(k) = zeta * (1.0 - alphas(k)) * scenario.gains.col(k).dot(port_totals);
  }
  out.ee = out.rates.sum() / (powers.sum() + scenario.params.circuit_power);
  return out;
}

SingleSolution make_single_solution(VectorXd powers, double alpha,
                                    const ScenarioSingle& scenario, SolverStats stats) {
  SingleSolution sol;
  sol.rate = rate_single(alpha, powers, scenario);
  sol.harvested = harvested_single(alpha, powers, scenario);
  sol.ee = ee_single(powers, sol.rate, scenario.params.circuit_power);
  sol.powers = std::move(powers);
  sol.ps_ratio = alpha;
  sol.feasible = true;
  sol.stats = stats;
  return sol;
}

SingleSolution infeasible_single(const ScenarioSingle& scenario, SolverStats stats) {
  SingleSolution sol;
  sol.powers = VectorXd::Zero(scenario.ports());
  sol.feasible = false;
  sol.stats = stats;
  return sol;
}

bool harvest_feasible(const ScenarioSingle& scenario) {
  const double reachable = scenario.gains.dot(scenario.power_caps);
  return scenario.min_harvest / scenario.params.conversion_efficiency <= reachable;
}

bool harvest_feasible(const ScenarioMulti& scenario) {
  const VectorXd reachable = scenario.gains.transpose() * scenario.power_caps;
  const double zeta = scenario.params.conversion_efficiency;
  for (Index k = 0; k < scenario.devices(); ++k) {
    if (zeta * reachable(k) < scenario.min_harvest(k)) return false;
  }
  return true;
}

}  // namespace swipt

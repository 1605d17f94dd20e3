#include "swipt/single_optimal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace swipt {

namespace {

constexpr double kSaturationTol = 1e-12;

bool saturated(double p, double cap) { return p >= cap * (1.0 - kSaturationTol); }

}  // namespace

std::vector<Index> descending_gain_order(const VectorXd& gains) {
  std::vector<Index> order(static_cast<std::size_t>(gains.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index l, Index r) { return gains(l) > gains(r); });
  return order;
}

ClosedFormCoefficients closed_form_coefficients(const ScenarioSingle& scenario,
                                                const std::vector<Index>& order,
                                                Index position) {
  if (position < 0 || position >= static_cast<Index>(order.size())) {
    throw InvalidInput("port position out of range");
  }
  const auto& prm = scenario.params;
  double prefix_received = 0.0;
  double prefix_power = 0.0;
  for (Index j = 0; j < position; ++j) {
    const Index port = order[static_cast<std::size_t>(j)];
    prefix_received += scenario.gains(port) * scenario.power_caps(port);
    prefix_power += scenario.power_caps(port);
  }
  const double h = scenario.gains(order[static_cast<std::size_t>(position)]);
  const double required = scenario.min_harvest / prm.conversion_efficiency;

  ClosedFormCoefficients cf;
  cf.a = h / prm.noise_power;
  cf.b = 1.0 + (prefix_received - required) / prm.noise_power;
  cf.c = prm.circuit_power + prefix_power;
  cf.p_min = std::max(0.0, (required - prefix_received) / h);
  return cf;
}

double p_min_threshold(Index position, const ScenarioSingle& scenario) {
  const auto order = descending_gain_order(scenario.gains);
  return closed_form_coefficients(scenario, order, position).p_min;
}

double optimal_alpha(const VectorXd& powers, const ScenarioSingle& scenario) {
  if (scenario.min_harvest == 0.0) return 1.0;
  const double received = scenario.gains.dot(powers);
  if (!(received > 0.0)) return 0.0;
  const double alpha =
      1.0 - scenario.min_harvest / (scenario.params.conversion_efficiency * received);
  return std::clamp(alpha, 0.0, 1.0);
}

SingleSolution solve_p1(const ScenarioSingle& scenario) {
  scenario.validate();
  SolverStats stats;
  if (!harvest_feasible(scenario)) return infeasible_single(scenario, stats);

  const auto order = descending_gain_order(scenario.gains);
  VectorXd powers = VectorXd::Zero(scenario.ports());
  for (Index pos = 0; pos < scenario.ports(); ++pos) {
    ++stats.outer_iterations;
    const Index port = order[static_cast<std::size_t>(pos)];
    const double cap = scenario.power_caps(port);
    const auto cf = closed_form_coefficients(scenario, order, pos);
    if (saturated(cf.p_min, cap)) {
      // Earlier ports alone cannot meet the requirement even with this one.
      powers(port) = cap;
      continue;
    }
    const double p = maximize_log_fraction({cf.a, cf.b, cf.c, cf.p_min, cap});
    if (saturated(p, cap)) {
      powers(port) = cap;
      continue;
    }
    powers(port) = p;
    break;
  }
  stats.inner_iterations = stats.outer_iterations;
  stats.converged = true;
  const double alpha = optimal_alpha(powers, scenario);
  return make_single_solution(std::move(powers), alpha, scenario, stats);
}

KktCertificate kkt_certificate(const SingleSolution& solution, const ScenarioSingle& scenario,
                               const KktTolerances& tol) {
  const auto& prm = scenario.params;
  const Index n = scenario.ports();
  if (solution.powers.size() != n) throw InvalidInput("solution has wrong port count");

  KktCertificate cert;
  auto fail = [&](const std::string& what) { cert.violations.push_back(what); };
  if (!solution.feasible) fail("solution is not feasible");

  const double alpha = solution.ps_ratio;
  const double received = scenario.gains.dot(solution.powers);
  const double consumed = solution.powers.sum() + prm.circuit_power;
  const double rate = std::log1p(alpha * received / prm.noise_power);
  const double ee = rate / consumed;

  // dL/dalpha = 0 at an interior ratio gives zeta mu = T; with E_bar = 0 the
  // harvesting constraint is inactive and mu = 0. Either way f_i reduces to
  // h_i T - ee / (sum p + p_c).
  cert.t_value = 1.0 / (consumed * (prm.noise_power + alpha * received));
  const bool interior = alpha > 0.0 && alpha < 1.0;
  cert.mu = interior && scenario.min_harvest > 0.0 ? cert.t_value / prm.conversion_efficiency
                                                   : 0.0;
  if (alpha <= 0.0) fail("zero PS ratio: rate is zero and the ratio stationarity is degenerate");

  const double ratio_term = (alpha * cert.t_value) +
                            cert.mu * prm.conversion_efficiency * (1.0 - alpha);
  const double constant_term = ee / consumed;
  cert.f_values = scenario.gains.array() * ratio_term - constant_term;
  cert.lambda = (-cert.f_values).cwiseMax(0.0);
  cert.upsilon = cert.f_values.cwiseMax(0.0);

  const double eps = tol.stationarity * constant_term;
  const auto order = descending_gain_order(scenario.gains);
  for (std::size_t j = 0; j + 1 < order.size(); ++j) {
    const Index a = order[j];
    const Index b = order[j + 1];
    const bool strict = scenario.gains(a) > scenario.gains(b);
    if ((strict && !(cert.f_values(a) > cert.f_values(b))) ||
        (!strict && cert.f_values(a) != cert.f_values(b))) {
      std::ostringstream os;
      os << "f ordering broken between ports " << a << " and " << b;
      fail(os.str());
    }
  }

  cert.prefix_index = 0;
  bool prefix_open = true;
  for (const Index port : order) {
    const double p = solution.powers(port);
    const double cap = scenario.power_caps(port);
    const double f = cert.f_values(port);
    const bool full = p >= cap * (1.0 - tol.saturation);
    const bool zero = p <= cap * tol.saturation;
    std::ostringstream os;
    if (full && prefix_open) {
      ++cert.prefix_index;
    } else {
      prefix_open = false;
    }
    if (f > eps && !full) {
      os << "f_i > 0 but p_i < P_i at port " << port;
    } else if (f < -eps && !zero) {
      os << "f_i < 0 but p_i > 0 at port " << port;
    } else if (!full && !zero && std::abs(f) > eps) {
      os << "partial port " << port << " is not stationary";
    }
    if (!os.str().empty()) fail(os.str());
    if (cert.lambda(port) * p > eps * cap || cert.upsilon(port) * (cap - p) > eps * cap) {
      std::ostringstream cs;
      cs << "complementary slackness violated at port " << port;
      fail(cs.str());
    }
  }

  // Prefix structure: saturated ports, at most one partial port, then zeros.
  int stage = 0;  // 0 saturated, 1 after partial or first zero
  for (const Index port : order) {
    const double p = solution.powers(port);
    const double cap = scenario.power_caps(port);
    const bool full = p >= cap * (1.0 - tol.saturation);
    const bool zero = p <= cap * tol.saturation;
    if (stage == 0) {
      if (!full) stage = 1;
    } else if (!zero) {
      fail("power vector is not a saturated prefix followed by one partial port");
      break;
    }
  }

  if (scenario.min_harvest > 0.0) {
    const double harvested = prm.conversion_efficiency * (1.0 - alpha) * received;
    if (std::abs(harvested - scenario.min_harvest) > tol.energy * scenario.min_harvest) {
      fail("harvesting constraint is not tight");
    }
  }
  return cert;
}

}  // namespace swipt

#pragma once

#include <string>
#include <vector>

#include "swipt/model.hpp"
#include "swipt/scalar_opt.hpp"

namespace swipt {

/// Ports ordered by descending gain; ties keep the original index order.
std::vector<Index> descending_gain_order(const VectorXd& gains);

/// Coefficients of the one-port subproblem for the port at `position` in the
/// descending-gain order, all earlier ports transmitting at their caps:
///   A = h / sigma^2
///   B = 1 + sum_{j<i} h_j P_j / sigma^2 - E_bar / (zeta sigma^2)
///   C = p_c + sum_{j<i} P_j
/// and P_min = [E_bar / (zeta h) - sum_{j<i} h_j P_j / h]^+.
struct ClosedFormCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double p_min = 0.0;
};

ClosedFormCoefficients closed_form_coefficients(const ScenarioSingle& scenario,
                                                const std::vector<Index>& order,
                                                Index position);

/// Smallest power the port at `position` (0-based, descending-gain order) must
/// transmit, with every earlier port at full power, to meet the harvesting
/// requirement.
double p_min_threshold(Index position, const ScenarioSingle& scenario);

/// [1 - E_bar / (zeta sum_i h_i p_i)]^+, or 1 when E_bar = 0. Returns 0 when
/// all powers are zero and E_bar > 0; the caller reports that as infeasible.
double optimal_alpha(const VectorXd& powers, const ScenarioSingle& scenario);

/// Globally optimal EE for one device. Ports are visited in descending-gain
/// order; each visited port gets the clamped stationary point of its one-port
/// subproblem, and the walk stops at the first port that does not saturate.
SingleSolution solve_p1(const ScenarioSingle& scenario);

/// KKT multipliers reconstructed at a candidate solution, plus the list of
/// violated optimality conditions (empty when the certificate passes).
struct KktCertificate {
  VectorXd f_values;  // dL/dp_i without the bound multipliers, original order
  double t_value = 0.0;
  double mu = 0.0;
  VectorXd lambda;   // multipliers of p_i >= 0
  VectorXd upsilon;  // multipliers of p_i <= P_i
  Index prefix_index = 0;  // number of saturated ports in descending-gain order
  std::vector<std::string> violations;

  bool passed() const { return violations.empty(); }
};

struct KktTolerances {
  double stationarity = 1e-7;  // relative to the magnitude of the terms of f_i
  double saturation = 1e-12;   // relative distance of p_i from P_i
  double energy = 1e-9;        // relative harvested-energy tightness
};

KktCertificate kkt_certificate(const SingleSolution& solution,
                               const ScenarioSingle& scenario,
                               const KktTolerances& tol = {});

}  // namespace swipt

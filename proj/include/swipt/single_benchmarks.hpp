#pragma once

#include <functional>

#include "swipt/model.hpp"

namespace swipt {

/// Progress of the ratio iteration q <- R / (sum p + p_c).
struct DinkelbachState {
  double q = 0.0;
  double t_residual = 0.0;  // R - q (sum p + p_c) at the latest inner solution
  int iteration = 0;
};

struct DinkelbachOptions {
  double alpha_grid_step = 0.01;
  double residual_tol = 1e-6;  // scaled by max(1, q)
  int max_outer = 50;
  double bcd_tol = 1e-8;  // max power change per sweep [W]
  int max_sweeps = 500;
  int max_doublings = 60;
  double mu_tol = 1e-12;  // relative harvested-energy error in the mu search
};

/// Called with sweep 0 and the starting objective, then after every sweep.
using SweepObserver = std::function<void(int sweep, double objective)>;

/// L3 = ln(1 + alpha S / sigma^2) - q (sum p + p_c) + mu (zeta (1-alpha) S - E_bar).
double lagrangian_l3(const ScenarioSingle& scenario, double alpha, double q, double mu,
                     const VectorXd& powers);

/// Cyclic coordinate maximization of L3 over 0 <= p_i <= P_i, starting from
/// (and overwriting) `powers`. Returns the number of sweeps performed.
int bcd_single(const ScenarioSingle& scenario, double alpha, double q, double mu,
               VectorXd& powers, double tolerance, int max_sweeps,
               const SweepObserver* observer = nullptr);

struct FixedAlphaRun {
  SingleSolution solution;
  DinkelbachState state;
  double mu = 0.0;
};

/// Dinkelbach iteration at a fixed PS ratio; each subtractive problem is
/// solved by BCD with mu found by bisection on the harvesting constraint.
FixedAlphaRun dinkelbach_fixed_alpha(const ScenarioSingle& scenario, double alpha,
                                     const DinkelbachOptions& options = {});

/// Every port at full power, alpha as large as the harvesting requirement allows.
SingleSolution solve_se_max(const ScenarioSingle& scenario);

SingleSolution solve_fixed_alpha(const ScenarioSingle& scenario, double alpha,
                                 const DinkelbachOptions& options = {});

/// Fixed-ratio Dinkelbach runs over the grid {step, 2 step, ..., 1}; the best
/// EE wins, ties going to the smaller ratio.
SingleSolution solve_dinkelbach_single(const ScenarioSingle& scenario,
                                       double alpha_grid_step = 0.01,
                                       const DinkelbachOptions& options = {});

}  // namespace swipt

#pragma once

#include <optional>
#include <vector>

#include "swipt/model.hpp"
#include "swipt/single_benchmarks.hpp"

namespace swipt {

/// Multipliers of the per-port power caps (upsilon, N entries) and of the
/// per-device harvesting requirements (mu, K entries).
struct DualVector {
  VectorXd upsilon;
  VectorXd mu;

  static DualVector zero(Index n_ports, Index n_devices);
};

/// Inner-loop primal state. d_values holds
///   D_i = -q - upsilon_i + sum_k mu_k zeta (1 - alpha_k) h_{i,k},
/// the net marginal value of power at port i on every channel.
struct BcdWorkspace {
  VectorXd d_values;
  MatrixXd powers;  // N x K
  VectorXd alphas;  // K

  /// Even split of each port's cap over the channels, alpha = alpha0.
  static BcdWorkspace initial(const ScenarioMulti& scenario, double alpha0);
};

/// (P_i - sum_k p_{i,k})_i stacked over (E_k - E_bar_k)_k.
struct Subgradient {
  VectorXd components;
};

/// Port each device decodes from: the arg-max of its gain column.
struct AssociationMap {
  std::vector<Index> best_port;
};

/// Received decoding power per device. With an association map only the
/// associated port counts.
VectorXd decoded_power(const MatrixXd& powers, const ScenarioMulti& scenario,
                       const AssociationMap* association = nullptr);

/// Rates, harvested powers and EE under the chosen rate model.
MultiEvaluation evaluate_scheme(const VectorXd& alphas, const MatrixXd& powers,
                                const ScenarioMulti& scenario,
                                const AssociationMap* association = nullptr);

void update_d_values(BcdWorkspace& ws, const DualVector& duals, double q,
                     const ScenarioMulti& scenario);

double lagrangian_l2(const BcdWorkspace& ws, const DualVector& duals, double q,
                     const ScenarioMulti& scenario,
                     const AssociationMap* association = nullptr);

/// Cyclic (i then k) maximization of L2 over the power box at fixed alphas and
/// duals. Refreshes d_values first. Returns the number of sweeps.
///
/// With an association map the update is the closed form
/// [-1 / (K D_i) - sigma^2 / (h~_k alpha_k)] clamped to [0, P_i] at every port,
/// h~_k being the associated gain; it has no cross-port term and is not a
/// coordinate maximization of the single-port Lagrangian.
int bcd_power_update(BcdWorkspace& ws, const DualVector& duals, double q,
                     const ScenarioMulti& scenario, double tolerance = 1e-8,
                     int max_sweeps = 500, const AssociationMap* association = nullptr,
                     const SweepObserver* observer = nullptr);

/// alpha_k = clamp(1 / (K mu_k zeta H_k) - sigma^2 / S_k, 0, 1), where H_k is
/// the harvestable and S_k the decoded received power; 1 when S_k = 0.
VectorXd alpha_update(const MatrixXd& powers, const DualVector& duals,
                      const ScenarioMulti& scenario,
                      const AssociationMap* association = nullptr);

Subgradient dual_subgradient(const BcdWorkspace& ws, const ScenarioMulti& scenario);

/// Makes a primal point feasible: rows over their cap are scaled down, then
/// devices that cannot meet their requirement get extra power on their
/// strongest ports' slack, then (unless alphas are fixed) each alpha_k is set
/// to the largest value the requirement allows. Returns false when some
/// requirement is still unmet.
bool restore_feasible(MatrixXd& powers, VectorXd& alphas, const ScenarioMulti& scenario,
                      std::optional<double> fixed_alpha);

struct MultiSolverOptions {
  double dinkelbach_tol = 1e-6;  // scaled by max(1, q)
  int max_outer = 50;
  double ellipsoid_radius = 1e3;  // per coordinate, in scaled dual units
  double ellipsoid_tol = 1e-6;
  int ellipsoid_max_iterations = 2000;
  double bcd_tol = 1e-8;
  int max_sweeps = 500;
  double initial_alpha = 0.5;
  // BCD / alpha-update alternations per dual point; stops early once the
  // ratios move less than alternation_tol.
  int alternation_rounds = 1;
  double alternation_tol = 1e-9;
  // Restart every inner solve from the initial point so the dual oracle is a
  // function of the duals alone rather than of the search history.
  bool fresh_inner_start = true;
  const SweepObserver* bcd_observer = nullptr;  // sees every BCD pass
};

struct MultiScheme {
  std::optional<double> fixed_alpha;           // disables the alpha update
  const AssociationMap* association = nullptr;  // single-port decoding
};

struct MultiRun {
  MultiSolution solution;
  DualVector duals;  // best dual point of the final ellipsoid run
  DinkelbachState state;
  int ellipsoid_failures = 0;
};

/// Dinkelbach over q; for each q an ellipsoid search over the scaled duals,
/// each dual point answered by one BCD pass and one alpha update. Every
/// visited primal point is restored to feasibility and the best one in the
/// subtractive objective is kept, so T(q) >= 0 and q never decreases.
MultiRun run_multi(const ScenarioMulti& scenario, const MultiScheme& scheme,
                   const MultiSolverOptions& options = {});

MultiSolution solve_p2(const ScenarioMulti& scenario, const MultiSolverOptions& options = {});

}  // namespace swipt

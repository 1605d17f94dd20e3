#include "swipt/multi_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "swipt/ellipsoid.hpp"

namespace swipt {

namespace {

bool decodes_from(const AssociationMap* assoc, Index port, Index device) {
  return assoc == nullptr || assoc->best_port[static_cast<std::size_t>(device)] == port;
}

void check_association(const AssociationMap* assoc, const ScenarioMulti& s) {
  if (assoc == nullptr) return;
  if (static_cast<Index>(assoc->best_port.size()) != s.devices()) {
    throw InvalidInput("association map must have one entry per device");
  }
  for (Index b : assoc->best_port) {
    if (b < 0 || b >= s.ports()) throw InvalidInput("association map port out of range");
  }
}

VectorXd harvestable_power(const MatrixXd& powers, const ScenarioMulti& s) {
  return s.gains.transpose() * powers.rowwise().sum();
}

// Feasible primal candidate with its evaluation.
struct Candidate {
  MatrixXd powers;
  VectorXd alphas;
  double rate = 0.0;
  double consumed = 0.0;
};

}  // namespace

DualVector DualVector::zero(Index n_ports, Index n_devices) {
  return {VectorXd::Zero(n_ports), VectorXd::Zero(n_devices)};
}

BcdWorkspace BcdWorkspace::initial(const ScenarioMulti& s, double alpha0) {
  BcdWorkspace ws;
  ws.d_values = VectorXd::Zero(s.ports());
  ws.powers = (s.power_caps / static_cast<double>(s.devices())).replicate(1, s.devices());
  ws.alphas = VectorXd::Constant(s.devices(), alpha0);
  return ws;
}

VectorXd decoded_power(const MatrixXd& powers, const ScenarioMulti& s,
                       const AssociationMap* assoc) {
  VectorXd out(s.devices());
  for (Index k = 0; k < s.devices(); ++k) {
    if (assoc == nullptr) {
      out(k) = s.gains.col(k).dot(powers.col(k));
    } else {
      const Index b = assoc->best_port[static_cast<std::size_t>(k)];
      out(k) = s.gains(b, k) * powers(b, k);
    }
  }
  return out;
}

MultiEvaluation evaluate_scheme(const VectorXd& alphas, const MatrixXd& powers,
                                const ScenarioMulti& s, const AssociationMap* assoc) {
  if (assoc == nullptr) return evaluate_multi(alphas, powers, s);
  check_association(assoc, s);
  const auto& prm = s.params;
  const double inv_k = 1.0 / static_cast<double>(s.devices());
  const VectorXd decoded = decoded_power(powers, s, assoc);
  const VectorXd harvestable = harvestable_power(powers, s);
  MultiEvaluation ev;
  ev.rates = inv_k * (alphas.array() * decoded.array() / prm.noise_power).log1p();
  ev.harvested = prm.conversion_efficiency * (1.0 - alphas.array()) * harvestable.array();
  ev.ee = ev.rates.sum() / (powers.sum() + prm.circuit_power);
  return ev;
}

void update_d_values(BcdWorkspace& ws, const DualVector& duals, double q,
                     const ScenarioMulti& s) {
  const double zeta = s.params.conversion_efficiency;
  const VectorXd weights = (duals.mu.array() * zeta * (1.0 - ws.alphas.array())).matrix();
  ws.d_values = (s.gains * weights).array() - q - duals.upsilon.array();
}

double lagrangian_l2(const BcdWorkspace& ws, const DualVector& duals, double q,
                     const ScenarioMulti& s, const AssociationMap* assoc) {
  const auto ev = evaluate_scheme(ws.alphas, ws.powers, s, assoc);
  const VectorXd port_totals = ws.powers.rowwise().sum();
  return ev.rates.sum() - q * (ws.powers.sum() + s.params.circuit_power) +
         duals.upsilon.dot(s.power_caps - port_totals) +
         duals.mu.dot(ev.harvested - s.min_harvest);
}

int bcd_power_update(BcdWorkspace& ws, const DualVector& duals, double q,
                     const ScenarioMulti& s, double tolerance, int max_sweeps,
                     const AssociationMap* assoc, const SweepObserver* observer) {
  check_association(assoc, s);
  update_d_values(ws, duals, q, s);
  const Index n = s.ports();
  const Index kk = s.devices();
  const double inv_k = 1.0 / static_cast<double>(kk);
  const double sigma2 = s.params.noise_power;
  VectorXd decoded = decoded_power(ws.powers, s, assoc);
  if (observer) (*observer)(0, lagrangian_l2(ws, duals, q, s, assoc));

  int sweep = 0;
  while (sweep < max_sweeps) {
    ++sweep;
    double max_change = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double d = ws.d_values(i);
      const double cap = s.power_caps(i);
      for (Index k = 0; k < kk; ++k) {
        const double h = s.gains(i, k);
        const double alpha = ws.alphas(k);
        const bool decodes = decodes_from(assoc, i, k);
        double next = cap;
        if (d < 0.0) {
          if (alpha <= 0.0) {
            next = 0.0;
          } else if (assoc == nullptr) {
            const double others = decoded(k) - h * ws.powers(i, k);
            next = std::clamp(-inv_k / d - sigma2 / (h * alpha) - others / h, 0.0, cap);
          } else {
            // Single-port decoding: every port uses the associated gain and
            // no cross-port term, as in the association scheme's update.
            const double h_best = s.gains(assoc->best_port[static_cast<std::size_t>(k)], k);
            next = std::clamp(-inv_k / d - sigma2 / (h_best * alpha), 0.0, cap);
          }
        }
        const double change = next - ws.powers(i, k);
        if (change != 0.0) {
          if (decodes) decoded(k) += h * change;
          ws.powers(i, k) = next;
          max_change = std::max(max_change, std::abs(change));
        }
      }
    }
    decoded = decoded_power(ws.powers, s, assoc);
    if (observer) (*observer)(sweep, lagrangian_l2(ws, duals, q, s, assoc));
    if (max_change < tolerance) break;
  }
  return sweep;
}

VectorXd alpha_update(const MatrixXd& powers, const DualVector& duals, const ScenarioMulti& s,
                      const AssociationMap* assoc) {
  const double kk = static_cast<double>(s.devices());
  const double zeta = s.params.conversion_efficiency;
  const VectorXd decoded = decoded_power(powers, s, assoc);
  const VectorXd harvestable = harvestable_power(powers, s);
  VectorXd alphas(s.devices());
  for (Index k = 0; k < s.devices(); ++k) {
    if (!(decoded(k) > 0.0)) {
      alphas(k) = 1.0;
      continue;
    }
    const double denom = kk * duals.mu(k) * zeta * harvestable(k);
    const double first = denom > 0.0 ? 1.0 / denom : std::numeric_limits<double>::infinity();
    alphas(k) = std::clamp(first - s.params.noise_power / decoded(k), 0.0, 1.0);
  }
  return alphas;
}

Subgradient dual_subgradient(const BcdWorkspace& ws, const ScenarioMulti& s) {
  const Index n = s.ports();
  const Index kk = s.devices();
  Subgradient g;
  g.components.resize(n + kk);
  g.components.head(n) = s.power_caps - ws.powers.rowwise().sum();
  const VectorXd harvestable = harvestable_power(ws.powers, s);
  g.components.tail(kk) = (s.params.conversion_efficiency * (1.0 - ws.alphas.array()) *
                           harvestable.array())
                              .matrix() -
                          s.min_harvest;
  return g;
}

bool restore_feasible(MatrixXd& powers, VectorXd& alphas, const ScenarioMulti& s,
                      std::optional<double> fixed_alpha) {
  const Index n = s.ports();
  const Index kk = s.devices();
  const double zeta = s.params.conversion_efficiency;

  for (Index i = 0; i < n; ++i) {
    const double total = powers.row(i).sum();
    if (total > s.power_caps(i)) powers.row(i) *= s.power_caps(i) / total;
  }

  // Harvestable power each device needs at the ratio it will end up with.
  // With adjustable ratios the raise targets alpha = min(alpha_k, 1/2) so a
  // device short of energy is not left with a vanishing decoding share.
  VectorXd target(kk);
  for (Index k = 0; k < kk; ++k) {
    const double alpha = fixed_alpha ? *fixed_alpha : std::min(alphas(k), 0.5);
    target(k) = s.min_harvest(k) / (zeta * (1.0 - alpha));
  }

  VectorXd slack = s.power_caps - powers.rowwise().sum();
  VectorXd harvestable = harvestable_power(powers, s);
  for (Index k = 0; k < kk; ++k) {
    const bool short_now = fixed_alpha ? harvestable(k) < target(k)
                                       : zeta * harvestable(k) < s.min_harvest(k);
    if (!short_now) continue;
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return s.gains(a, k) > s.gains(b, k); });
    for (Index i : order) {
      const double missing = target(k) - harvestable(k);
      if (missing <= 0.0) break;
      const double add = std::min(slack(i), missing / s.gains(i, k));
      if (add <= 0.0) continue;
      powers(i, k) += add;
      slack(i) -= add;
      harvestable += add * s.gains.row(i).transpose();
    }
  }

  if (fixed_alpha) {
    alphas.setConstant(*fixed_alpha);
  } else {
    for (Index k = 0; k < kk; ++k) {
      alphas(k) = s.min_harvest(k) > 0.0
                      ? std::clamp(1.0 - s.min_harvest(k) / (zeta * harvestable(k)), 0.0, 1.0)
                      : 1.0;
    }
  }
  for (Index k = 0; k < kk; ++k) {
    const double harvested = zeta * (1.0 - alphas(k)) * harvestable(k);
    if (harvested < s.min_harvest(k) * (1.0 - 1e-12)) return false;
  }
  return true;
}

MultiRun run_multi(const ScenarioMulti& s, const MultiScheme& scheme,
                   const MultiSolverOptions& opt) {
  s.validate();
  check_association(scheme.association, s);
  const Index n = s.ports();
  const Index kk = s.devices();
  const double zeta = s.params.conversion_efficiency;
  const double pc = s.params.circuit_power;
  const AssociationMap* assoc = scheme.association;
  if (scheme.fixed_alpha && !(*scheme.fixed_alpha > 0.0 && *scheme.fixed_alpha < 1.0)) {
    throw InvalidInput("fixed PS ratio must lie in (0, 1)");
  }

  MultiRun run;
  run.duals = DualVector::zero(n, kk);
  MultiSolution& sol = run.solution;
  sol.powers = MatrixXd::Zero(n, kk);
  sol.ps_ratios = VectorXd::Zero(kk);
  sol.rates = VectorXd::Zero(kk);
  sol.harvested = VectorXd::Zero(kk);

  const double harvest_share = scheme.fixed_alpha ? 1.0 - *scheme.fixed_alpha : 1.0;
  const VectorXd reachable = s.gains.transpose() * s.power_caps;
  for (Index k = 0; k < kk; ++k) {
    if (zeta * harvest_share * reachable(k) < s.min_harvest(k)) return run;
  }

  // Dual coordinates are scaled so that each one is measured in the units of q:
  // mu_k by zeta max_i h_{i,k}, upsilon_i as is.
  VectorXd scale(n + kk);
  scale.head(n).setOnes();
  for (Index k = 0; k < kk; ++k) scale(n + k) = 1.0 / (zeta * s.gains.col(k).maxCoeff());

  BcdWorkspace ws = BcdWorkspace::initial(
      s, scheme.fixed_alpha ? *scheme.fixed_alpha : opt.initial_alpha);
  std::optional<Candidate> best;
  auto consider = [&](MatrixXd powers, VectorXd alphas, double q, double& best_value) {
    if (!restore_feasible(powers, alphas, s, scheme.fixed_alpha)) return;
    const auto ev = evaluate_scheme(alphas, powers, s, assoc);
    const double consumed = powers.sum() + pc;
    const double value = ev.rates.sum() - q * consumed;
    if (!best || value > best_value) {
      best_value = value;
      best = Candidate{std::move(powers), std::move(alphas), ev.rates.sum(), consumed};
    }
  };

  SolverStats stats;
  DinkelbachState& st = run.state;
  double q = 0.0;
  while (st.iteration < opt.max_outer) {
    ++st.iteration;
    st.q = q;
    double best_value = -std::numeric_limits<double>::infinity();
    if (best) {
      best_value = best->rate - q * best->consumed;
    } else {
      consider(ws.powers, ws.alphas, q, best_value);
    }

    EllipsoidOracle oracle = [&](const VectorXd& y) {
      EllipsoidCut cut;
      Index negative = -1;
      for (Index j = 0; j < y.size(); ++j) {
        if (y(j) < 0.0 && (negative < 0 || y(j) < y(negative))) negative = j;
      }
      if (negative >= 0) {
        cut.feasibility = true;
        cut.normal = VectorXd::Zero(y.size());
        cut.normal(negative) = -1.0;
        return cut;
      }
      const VectorXd x = scale.cwiseProduct(y);
      const DualVector duals{x.head(n), x.tail(kk)};
      if (opt.fresh_inner_start) {
        ws = BcdWorkspace::initial(s, scheme.fixed_alpha ? *scheme.fixed_alpha : opt.initial_alpha);
      }
      for (int round = 0; round < opt.alternation_rounds; ++round) {
        stats.inner_iterations +=
            bcd_power_update(ws, duals, q, s, opt.bcd_tol, opt.max_sweeps, assoc,
                             opt.bcd_observer);
        if (scheme.fixed_alpha) break;
        const VectorXd next = alpha_update(ws.powers, duals, s, assoc);
        const double change = (next - ws.alphas).cwiseAbs().maxCoeff();
        ws.alphas = next;
        if (change < opt.alternation_tol) break;
      }
      cut.value = lagrangian_l2(ws, duals, q, s, assoc);
      cut.normal = scale.cwiseProduct(dual_subgradient(ws, s).components);
      consider(ws.powers, ws.alphas, q, best_value);
      return cut;
    };
    EllipsoidOptions eo;
    eo.radii = VectorXd::Constant(n + kk, opt.ellipsoid_radius);
    eo.tol = opt.ellipsoid_tol;
    eo.max_iterations = opt.ellipsoid_max_iterations;
    const EllipsoidResult er = ellipsoid_minimize(oracle, eo);
    if (er.numerical_failure) ++run.ellipsoid_failures;
    if (er.has_value) {
      const VectorXd x = scale.cwiseProduct(er.best_point);
      run.duals = DualVector{x.head(n), x.tail(kk)};
    }

    if (!best) break;
    st.t_residual = best->rate - q * best->consumed;
    if (std::abs(st.t_residual) < opt.dinkelbach_tol * std::max(1.0, q)) {
      stats.converged = true;
      break;
    }
    q = best->rate / best->consumed;
  }

  stats.outer_iterations = st.iteration;
  stats.final_residual = st.t_residual;
  sol.stats = stats;
  if (!best) return run;
  const auto ev = evaluate_scheme(best->alphas, best->powers, s, assoc);
  sol.powers = best->powers;
  sol.ps_ratios = best->alphas;
  sol.rates = ev.rates;
  sol.harvested = ev.harvested;
  sol.ee = ev.ee;
  sol.feasible = true;
  return run;
}

MultiSolution solve_p2(const ScenarioMulti& scenario, const MultiSolverOptions& options) {
  return run_multi(scenario, MultiScheme{}, options).solution;
}

}  // namespace swipt

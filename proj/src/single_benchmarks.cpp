#include "swipt/single_benchmarks.hpp"

#include <algorithm>
#include <cmath>

#include "swipt/scalar_opt.hpp"
#include "swipt/single_optimal.hpp"

namespace swipt {

namespace {

double harvest_at(const ScenarioSingle& s, double alpha, const VectorXd& powers) {
  return s.params.conversion_efficiency * (1.0 - alpha) * s.gains.dot(powers);
}

bool fixed_alpha_feasible(const ScenarioSingle& s, double alpha) {
  return harvest_at(s, alpha, s.power_caps) >= s.min_harvest;
}

struct InnerSolve {
  double mu = 0.0;
  int sweeps = 0;
  bool ok = true;
};

// Subtractive problem at fixed (alpha, q): zero multiplier when the
// unconstrained maximizer already harvests enough, otherwise bisection on mu
// until the harvesting constraint is met from above.
InnerSolve solve_subtractive(const ScenarioSingle& s, double alpha, double q,
                             VectorXd& powers, const DinkelbachOptions& opt) {
  InnerSolve out;
  out.sweeps += bcd_single(s, alpha, q, 0.0, powers, opt.bcd_tol, opt.max_sweeps);
  if (s.min_harvest == 0.0 || harvest_at(s, alpha, powers) >= s.min_harvest) return out;

  auto gap = [&](double mu) {
    out.sweeps += bcd_single(s, alpha, q, mu, powers, opt.bcd_tol, opt.max_sweeps);
    return harvest_at(s, alpha, powers) / s.min_harvest - 1.0;
  };
  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (gap(hi) < 0.0) {
    if (++doublings > opt.max_doublings) {
      out.ok = false;
      return out;
    }
    lo = hi;
    hi *= 2.0;
  }
  const Bracket br = bisect_bracket(gap, lo, hi, opt.mu_tol);
  out.mu = br.root;
  if (gap(out.mu) < 0.0) {
    out.mu = br.hi;
    gap(out.mu);
  }
  return out;
}

}  // namespace

double lagrangian_l3(const ScenarioSingle& s, double alpha, double q, double mu,
                     const VectorXd& powers) {
  const auto& prm = s.params;
  const double received = s.gains.dot(powers);
  return std::log1p(alpha * received / prm.noise_power) -
         q * (powers.sum() + prm.circuit_power) +
         mu * (prm.conversion_efficiency * (1.0 - alpha) * received - s.min_harvest);
}

int bcd_single(const ScenarioSingle& s, double alpha, double q, double mu, VectorXd& powers,
               double tolerance, int max_sweeps, const SweepObserver* observer) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidInput("bcd_single needs 0 < alpha <= 1");
  const auto& prm = s.params;
  const double harvest_weight = mu * prm.conversion_efficiency * (1.0 - alpha);
  const Index n = s.ports();
  double received = s.gains.dot(powers);
  if (observer) (*observer)(0, lagrangian_l3(s, alpha, q, mu, powers));
  int sweep = 0;
  while (sweep < max_sweeps) {
    ++sweep;
    double max_change = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double h = s.gains(i);
      const double cap = s.power_caps(i);
      const double net_cost = q - harvest_weight * h;
      double next = cap;
      if (net_cost > 0.0) {
        const double others = received - h * powers(i);
        next = 1.0 / net_cost - prm.noise_power / (alpha * h) - others / h;
        next = std::clamp(next, 0.0, cap);
      }
      const double change = next - powers(i);
      if (change != 0.0) {
        received += h * change;
        powers(i) = next;
        max_change = std::max(max_change, std::abs(change));
      }
    }
    // Refresh the running sum so rounding does not accumulate across sweeps.
    received = s.gains.dot(powers);
    if (observer) (*observer)(sweep, lagrangian_l3(s, alpha, q, mu, powers));
    if (max_change < tolerance) break;
  }
  return sweep;
}

FixedAlphaRun dinkelbach_fixed_alpha(const ScenarioSingle& s, double alpha,
                                     const DinkelbachOptions& opt) {
  FixedAlphaRun run;
  SolverStats stats;
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidInput("PS ratio must lie in (0, 1]");
  if (!fixed_alpha_feasible(s, alpha)) {
    run.solution = infeasible_single(s, stats);
    run.solution.ps_ratio = alpha;
    return run;
  }
  const auto& prm = s.params;
  VectorXd powers = s.power_caps;
  DinkelbachState& st = run.state;
  st.q = 0.0;
  while (st.iteration < opt.max_outer) {
    ++st.iteration;
    const InnerSolve inner = solve_subtractive(s, alpha, st.q, powers, opt);
    stats.inner_iterations += inner.sweeps;
    if (!inner.ok) break;
    run.mu = inner.mu;
    const double rate = std::log1p(alpha * s.gains.dot(powers) / prm.noise_power);
    const double consumed = powers.sum() + prm.circuit_power;
    st.t_residual = rate - st.q * consumed;
    if (std::abs(st.t_residual) < opt.residual_tol * std::max(1.0, st.q)) {
      stats.converged = true;
      break;
    }
    st.q = rate / consumed;
  }
  stats.outer_iterations = st.iteration;
  stats.final_residual = st.t_residual;
  run.solution = make_single_solution(std::move(powers), alpha, s, stats);
  if (run.solution.harvested < s.min_harvest * (1.0 - 1e-9)) {
    run.solution = infeasible_single(s, stats);
    run.solution.ps_ratio = alpha;
  }
  return run;
}

SingleSolution solve_se_max(const ScenarioSingle& s) {
  s.validate();
  SolverStats stats;
  stats.converged = true;
  if (!harvest_feasible(s)) return infeasible_single(s, stats);
  VectorXd powers = s.power_caps;
  const double alpha = optimal_alpha(powers, s);
  return make_single_solution(std::move(powers), alpha, s, stats);
}

SingleSolution solve_fixed_alpha(const ScenarioSingle& s, double alpha,
                                 const DinkelbachOptions& opt) {
  s.validate();
  return dinkelbach_fixed_alpha(s, alpha, opt).solution;
}

SingleSolution solve_dinkelbach_single(const ScenarioSingle& s, double alpha_grid_step,
                                       const DinkelbachOptions& opt) {
  s.validate();
  if (!(alpha_grid_step > 0.0 && alpha_grid_step <= 0.1)) {
    throw InvalidInput("alpha grid step must lie in (0, 0.1]");
  }
  SingleSolution best = infeasible_single(s);
  int total_outer = 0;
  int total_inner = 0;
  const auto steps = static_cast<int>(std::ceil(1.0 / alpha_grid_step - 1e-9));
  for (int j = 1; j <= steps; ++j) {
    const double alpha = std::min(1.0, j * alpha_grid_step);
    if (!fixed_alpha_feasible(s, alpha)) continue;
    SingleSolution cand = dinkelbach_fixed_alpha(s, alpha, opt).solution;
    total_outer += cand.stats.outer_iterations;
    total_inner += cand.stats.inner_iterations;
    if (cand.feasible && (!best.feasible || cand.ee > best.ee)) best = std::move(cand);
  }
  best.stats.outer_iterations = total_outer;
  best.stats.inner_iterations = total_inner;
  return best;
}

}  // namespace swipt

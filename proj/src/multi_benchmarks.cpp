#include "swipt/multi_benchmarks.hpp"

namespace swipt {

AssociationMap make_association(const ScenarioMulti& scenario) {
  AssociationMap map;
  map.best_port.reserve(static_cast<std::size_t>(scenario.devices()));
  for (Index k = 0; k < scenario.devices(); ++k) {
    Index best = 0;
    for (Index i = 1; i < scenario.ports(); ++i) {
      if (scenario.gains(i, k) > scenario.gains(best, k)) best = i;
    }
    map.best_port.push_back(best);
  }
  return map;
}

MultiSolution solve_fixed_alpha_multi(const ScenarioMulti& scenario, double alpha,
                                      const MultiSolverOptions& options) {
  MultiScheme scheme;
  scheme.fixed_alpha = alpha;
  return run_multi(scenario, scheme, options).solution;
}

MultiSolution solve_nearest_association(const ScenarioMulti& scenario,
                                        const MultiSolverOptions& options) {
  scenario.validate();
  const AssociationMap map = make_association(scenario);
  MultiScheme scheme;
  scheme.association = &map;
  return run_multi(scenario, scheme, options).solution;
}

}  // namespace swipt

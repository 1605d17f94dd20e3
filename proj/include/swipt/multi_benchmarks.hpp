#pragma once

#include "swipt/multi_solver.hpp"

namespace swipt {

/// Strongest port per device; ties go to the lower port index.
AssociationMap make_association(const ScenarioMulti& scenario);

/// The multi-device solver with every PS ratio pinned to `alpha`.
MultiSolution solve_fixed_alpha_multi(const ScenarioMulti& scenario, double alpha,
                                      const MultiSolverOptions& options = {});

/// Each device decodes only from its strongest port but harvests from all of
/// them. The reported rates and EE use that single-port decoding model.
MultiSolution solve_nearest_association(const ScenarioMulti& scenario,
                                        const MultiSolverOptions& options = {});

}  // namespace swipt

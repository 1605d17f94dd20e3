#pragma once

#include <functional>

#include "swipt/model.hpp"

namespace swipt {

/// A cut returned by the oracle at the current center c. The kept half-space
/// is {x : normal^T (x - c) <= 0}. Objective cuts carry the function value at
/// c and a subgradient as the normal; feasibility cuts carry only a normal.
struct EllipsoidCut {
  bool feasibility = false;
  VectorXd normal;
  double value = 0.0;
};

using EllipsoidOracle = std::function<EllipsoidCut(const VectorXd& center)>;

struct EllipsoidState {
  VectorXd center;
  MatrixXd shape;  // symmetric positive definite
  int iteration = 0;
};

struct EllipsoidOptions {
  VectorXd center;  // empty means the origin
  VectorXd radii;   // per-coordinate semi-axes of the initial ellipsoid
  double tol = 1e-6;
  int max_iterations = 2000;
  int pd_check_period = 25;  // Cholesky check of the shape matrix
};

struct EllipsoidResult {
  VectorXd best_point;  // lowest-valued center among objective cuts
  double best_value = 0.0;
  bool has_value = false;
  bool converged = false;
  bool numerical_failure = false;
  EllipsoidState state;  // last center and shape
};

/// Central-cut ellipsoid method. Stops when an objective cut has
/// sqrt(g^T P g) < tol, after max_iterations cuts, or when the shape matrix
/// loses positive definiteness (reported through numerical_failure).
EllipsoidResult ellipsoid_minimize(const EllipsoidOracle& oracle, const EllipsoidOptions& options);

/// Ball of the given radius around the origin.
EllipsoidResult ellipsoid_minimize(const EllipsoidOracle& oracle, Index dim, double radius,
                                   double tol);

}  // namespace swipt

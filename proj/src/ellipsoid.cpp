#include "swipt/ellipsoid.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace swipt {

namespace {

bool positive_definite(const MatrixXd& m) {
  Eigen::LLT<MatrixXd> llt(m);
  return llt.info() == Eigen::Success;
}

}  // namespace

EllipsoidResult ellipsoid_minimize(const EllipsoidOracle& oracle, const EllipsoidOptions& opt) {
  const Index n = opt.radii.size();
  if (n < 1) throw InvalidInput("ellipsoid needs at least one dimension");
  if (!(opt.radii.array() > 0.0).all()) throw InvalidInput("ellipsoid radii must be positive");
  if (opt.center.size() != 0 && opt.center.size() != n) {
    throw InvalidInput("ellipsoid center has the wrong dimension");
  }

  EllipsoidResult res;
  EllipsoidState& st = res.state;
  st.center = opt.center.size() == n ? opt.center : VectorXd::Zero(n);
  st.shape = opt.radii.array().square().matrix().asDiagonal();
  const double dn = static_cast<double>(n);

  while (st.iteration < opt.max_iterations) {
    const EllipsoidCut cut = oracle(st.center);
    ++st.iteration;
    if (cut.normal.size() != n || !cut.normal.allFinite()) {
      throw InvalidInput("ellipsoid oracle returned a malformed cut");
    }
    if (!cut.feasibility && (!res.has_value || cut.value < res.best_value)) {
      res.best_value = cut.value;
      res.best_point = st.center;
      res.has_value = true;
    }
    const VectorXd pg = st.shape * cut.normal;
    const double gpg = cut.normal.dot(pg);
    if (!(gpg > 0.0)) {
      if (cut.normal.isZero() && !cut.feasibility) {
        // Zero subgradient: the center is a minimizer.
        res.converged = true;
        break;
      }
      res.numerical_failure = true;
      break;
    }
    const double width = std::sqrt(gpg);
    if (!cut.feasibility && width < opt.tol) {
      res.converged = true;
      break;
    }
    const VectorXd step = pg / width;
    if (n == 1) {
      st.center -= 0.5 * step;
      st.shape *= 0.25;
    } else {
      st.center -= step / (dn + 1.0);
      st.shape = (dn * dn / (dn * dn - 1.0)) *
                 (st.shape - (2.0 / (dn + 1.0)) * (step * step.transpose()));
      st.shape = 0.5 * (st.shape + st.shape.transpose());
    }
    if (opt.pd_check_period > 0 && st.iteration % opt.pd_check_period == 0 &&
        !positive_definite(st.shape)) {
      res.numerical_failure = true;
      break;
    }
  }
  return res;
}

EllipsoidResult ellipsoid_minimize(const EllipsoidOracle& oracle, Index dim, double radius,
                                   double tol) {
  EllipsoidOptions opt;
  opt.radii = VectorXd::Constant(dim, radius);
  opt.tol = tol;
  return ellipsoid_minimize(oracle, opt);
}

}  // namespace swipt

#include "swipt/scalar_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "swipt/model.hpp"

namespace swipt {

namespace {

constexpr double kInvE = 1.0 / std::numbers::e;
constexpr int kMaxHalleySteps = 50;

double initial_guess(double x) {
  if (x < -0.25) {
    // Series about the branch point in p = sqrt(2 (e x + 1)).
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
  }
  // Winitzki's approximation, good to a few percent on [-1/4, inf).
  const double l = std::log1p(x);
  return l * (1.0 - std::log1p(l) / (2.0 + l));
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) throw std::domain_error("lambert_w0: NaN argument");
  const double branch = -kInvE;
  if (x < branch) {
    // Accept rounding noise in arguments computed as (something) / e.
    if (x >= branch - 4.0 * std::numeric_limits<double>::epsilon()) return -1.0;
    throw std::domain_error("lambert_w0: argument below -1/e");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w = initial_guess(x);
  if (x > std::numbers::e) {
    // Newton on w + ln w = ln x avoids overflow of exp(w) for large x.
    const double lx = std::log(x);
    for (int it = 0; it < kMaxHalleySteps; ++it) {
      const double step = (w + std::log(w) - lx) * w / (w + 1.0);
      w -= step;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * w) break;
    }
    return w;
  }
  for (int it = 0; it < kMaxHalleySteps; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 <= 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0) break;
    const double step = f / denom;
    const double next = std::max(-1.0, w - step);
    const bool done = std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                                 std::max(1.0, std::abs(next));
    w = next;
    if (done) break;
  }
  return w;
}

void LogFractionProblem::validate() const {
  if (!(a > 0.0)) throw InvalidInput("log-fraction problem needs a > 0");
  if (!(c > 0.0)) throw InvalidInput("log-fraction problem needs c > 0");
  if (!(x_min <= x_max)) throw InvalidInput("log-fraction problem needs x_min <= x_max");
  // a x_min + b is formed from terms that can be ~1e10 and cancel, so allow
  // rounding relative to their magnitude.
  const double lhs = a * x_min + b;
  const double slack = 1e-9 * (std::abs(a * x_min) + std::abs(b));
  if (!(lhs >= 1.0 - slack)) {
    throw InvalidInput("log-fraction problem needs a * x_min + b >= 1");
  }
}

double LogFractionProblem::objective(double x) const {
  return std::log(a * x + b) / (x + c);
}

double maximize_log_fraction(const LogFractionProblem& problem) {
  problem.validate();
  const double shift = problem.a * problem.c - problem.b;
  if (shift < -1.0) return problem.x_min;
  const double w = lambert_w0(shift / std::numbers::e);
  const double stationary = (std::exp(w + 1.0) - problem.b) / problem.a;
  return std::clamp(stationary, problem.x_min, problem.x_max);
}

Bracket bisect_bracket(const std::function<double(double)>& f, double lo, double hi,
                       double tol, int max_iterations) {
  if (!(lo <= hi)) throw BracketError("bisect: lo must not exceed hi");
  const double f_lo = f(lo);
  if (std::abs(f_lo) <= tol) return {lo, lo, lo, 0};
  const double f_hi = f(hi);
  if (std::abs(f_hi) <= tol) return {hi, hi, hi, 0};
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    throw BracketError("bisect: f(lo) and f(hi) have the same sign");
  }
  const bool lo_negative = f_lo < 0.0;
  Bracket b{0.5 * (lo + hi), lo, hi, 0};
  while (b.iterations < max_iterations) {
    ++b.iterations;
    const double mid = 0.5 * (b.lo + b.hi);
    const double fm = f(mid);
    b.root = mid;
    if (std::abs(fm) <= tol) break;
    if ((fm < 0.0) == lo_negative) {
      b.lo = mid;
    } else {
      b.hi = mid;
    }
    if (b.hi - b.lo <= tol * std::max(1.0, std::abs(mid))) {
      b.root = 0.5 * (b.lo + b.hi);
      break;
    }
  }
  return b;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol) {
  return bisect_bracket(f, lo, hi, tol).root;
}

}  // namespace swipt

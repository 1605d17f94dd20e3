#pragma once

#include <functional>
#include <stdexcept>

namespace swipt {

/// Principal branch W0 of the Lambert W function: the w >= -1 with
/// w * exp(w) = x. Throws std::domain_error for x < -1/e.
double lambert_w0(double x);

/// max ln(a x + b) / (x + c) over [x_min, x_max].
///
/// Requires a > 0, c > 0, a x_min + b >= 1 and x_min <= x_max. The objective
/// is unimodal on that interval; its stationary point is
///   x~ = (exp(W0((a c - b) / e) + 1) - b) / a   when a c - b >= -1,
/// and the maximizer is x~ clamped to the interval (or x_min otherwise).
struct LogFractionProblem {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;

  void validate() const;
  double objective(double x) const;
};

double maximize_log_fraction(const LogFractionProblem& problem);

class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Bracket {
  double root = 0.0;
  double lo = 0.0;  // f(lo) has the sign of f at the original lower end
  double hi = 0.0;
  int iterations = 0;
};

/// Bisection on a monotone function. Stops when |f(x)| <= tol or the bracket
/// is narrower than tol * max(1, |x|). Throws BracketError when f(lo) and f(hi)
/// share a sign and neither is within tol of zero.
Bracket bisect_bracket(const std::function<double(double)>& f, double lo, double hi,
                       double tol, int max_iterations = 400);

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol);

}  // namespace swipt

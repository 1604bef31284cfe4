#pragma once

#include <cstddef>
#include <functional>

namespace entropometer::numerics {

/// Value and first derivative of a scalar function at one point.
struct ValueSlope {
    double value;
    double slope;
};

struct Bracket {
    double lo;
    double hi;
};

/// Finds x in [bracket.lo, bracket.hi] with fn(x).value == 0 for a function
/// that is strictly monotone on the bracket and changes sign across it.
///
/// Newton steps are taken while they stay inside the shrinking bracket and
/// shrink the residual; otherwise the step falls back to bisection (geometric
/// midpoint when the bracket spans more than a factor of four and is
/// positive). Iterates until the bracket collapses to a few ulps or the
/// Newton correction drops below `rel_step` * |x|.
/// Throws ConvergenceError when `max_iterations` is exhausted.
double solve_bracketed_newton(const std::function<ValueSlope(double)>& fn, Bracket bracket,
                              double rel_step = 4e-16, int max_iterations = 400);

/// Expands a bracket on (0, inf) for a function decreasing in x: starting at
/// `start`, doubles until fn < 0 and halves until fn > 0.
/// Throws ConvergenceError when no sign change is found in [tiny, huge].
Bracket bracket_decreasing_positive(const std::function<double(double)>& fn, double start = 1.0);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t subintervals = 0;
};

/// Adaptive Simpson on [a, b] (either orientation) with Richardson-corrected
/// panels. `abs_tol` bounds the summed local error estimates. Throws
/// ConvergenceError when more than `max_subintervals` panels are needed.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, std::size_t max_subintervals = 100000);

}  // namespace entropometer::numerics

#pragma once

#include <functional>

namespace gbdsde {

/// Adaptive Simpson quadrature of fn over [a, b] to absolute tolerance `abs_tol`.
/// Throws EvaluationError if the integrand is not finite at a sample point.
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double abs_tol = 1e-12, int max_depth = 50);

/// Bisection for a root of a monotone function on [lo, hi] with fn(lo), fn(hi) of
/// opposite sign (or zero). Runs until the bracket is narrower than `tol` or cannot
/// shrink further in double precision.
double bisect(const std::function<double(double)>& fn, double lo, double hi, double tol);

} // namespace gbdsde

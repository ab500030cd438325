#pragma once

#include <functional>

#include "qbath/types.hpp"

namespace qbath {

/// Adaptive Gauss-Kronrod 15(7) integration of f over [a, b].
/// An interval is accepted when its Kronrod error estimate is below its
/// length-proportional share of max(abs_tol, rel_tol * |integral estimate|).
/// Integrable endpoint singularities are handled by bisection toward the
/// endpoint (Kronrod nodes are interior).  Throws numerics_error when the
/// subdivision limit is reached before the tolerance.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double rel_tol, int max_depth = 100);

/// Cauchy principal value of  ∫_a^b g(u)/(w - u) du  for a < w < b, by symmetric
/// subtraction:  ∫ (g(u) - g(w))/(w - u) du + g(w) * ln((w - a)/(b - w)).
/// The subtracted integrand has a removable point at u = w (limit -g'(w)).
double principal_value(const std::function<double(double)>& g, double a, double b, double w,
                       double abs_tol, double rel_tol = 0.0);

}  // namespace qbath

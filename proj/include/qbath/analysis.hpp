#pragma once

#include <array>
#include <vector>

#include "qbath/types.hpp"

namespace qbath {

struct FitResult {
    std::vector<double> params;      // damped cosine: {A, Ω, μ, γ}; saturation: {A, B, τ}
    std::vector<double> covariance;  // linearized, row-major p x p
    double residual_norm = 0.0;
    bool converged = false;
    int iterations = 0;
    std::array<double, 2> window{0.0, 0.0};
};

/// Least squares for y ≈ A cos(Ωt + μ) e^{-γt} (Levenberg damping, max 500
/// iterations, parameter-relative tolerance 1e-10).  Initial Ω from a discrete
/// spectral scan, γ from the envelope decay across the span, A and μ from the
/// peak's complex amplitude.  Needs at least 20 samples spanning two periods
/// of the detected oscillation.
FitResult fit_damped_cosine(const std::vector<double>& t, const std::vector<double>& y);

/// Least squares for y ≈ A + B e^{-t/τ}; A is the extrapolated saturation
/// value.  Samples before window_start are excluded (pass t.front() or less to
/// keep everything): the short-time transient is not exponential.
FitResult fit_exponential_saturation(const std::vector<double>& t,
                                     const std::vector<double>& y, double window_start);

/// Pointwise (sim - ref)/ref on a shared time grid; entries where |ref| < 1e-3
/// are masked to NaN (the reference crosses zero and the quotient means
/// nothing there).  Mismatched grids are a domain error.
std::vector<double> relative_error(const std::vector<double>& t_sim,
                                   const std::vector<double>& y_sim,
                                   const std::vector<double>& t_ref,
                                   const std::vector<double>& y_ref);

/// Largest |x| over the unmasked (non-NaN) entries; 0 if everything is masked.
double max_abs_unmasked(const std::vector<double>& x);

}  // namespace qbath

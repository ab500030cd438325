#pragma once

namespace qbath {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Cosine integral Ci(x) for x > 0.  Power series below the switchover at 4.0,
/// complex continued fraction for the exponential integral E1(ix) above it;
/// both branches are accurate to better than 1e-13 at the switchover.
double cosine_integral(double x);

/// Fresnel integral S(x) = ∫_0^x sin(pi u^2 / 2) du, odd in x.  Power series
/// below 1.5, complex-erfc continued fraction above.  The series branch cannot
/// reach 1e-12 past x ≈ 2 in double precision (alternating terms grow to
/// ~e^(pi x^2 / 2)), which pins the switchover at 1.5 rather than 4.0.
double fresnel_s(double x);

}  // namespace qbath

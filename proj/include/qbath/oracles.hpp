#pragma once

#include "qbath/bath.hpp"
#include "qbath/types.hpp"

namespace qbath {

/// Decoherence function split:  K(t,β) = K(t,∞) + ΔK(t,β).
struct DecoherenceEval {
    double k;
    double k_inf;
    double delta_k;
};

/// K(t,β) as the finite sum over the M discrete modes (coth-weighted).  This is
/// the reference the SIL relative-error tests compare against: it shares the
/// discretization, so the comparison isolates truncation error.
double decoherence_k_discrete(const DiscreteBath& bath, double t);

/// Continuum K(t,β) by adaptive quadrature (relative tolerance 1e-8), any s > 0,
/// finite or infinite β.  ΔK is integrated separately with the coth - 1 weight so
/// the split does not cancel.
DecoherenceEval decoherence_finite_T(const BathSpec& spec, double t);

/// Zero-temperature closed forms, s ∈ {1/2, 1, 2} only:
///   s=1/2: 8[cos x - 1 + sqrt(2πx) S(sqrt(2x/π))]      (Fresnel S)
///   s=1:   4[γ_E - Ci(x) + ln x]
///   s=2:   4 - 4 sin(x)/x
/// with x = ω_c t.  Other s values are a domain error ("unsupported").
double decoherence_closed_form(double s, double omega_c, double t);

/// Pure-decoherence ⟨σ_x(t)⟩ = cos(2εt) exp(-η K):  the DiscreteBath overload uses
/// the finite-sum K, the BathSpec overload the continuum K.
double exact_sigma_x(const DiscreteBath& bath, double eps, double t);
double exact_sigma_x(const BathSpec& spec, double eps, double t);

/// Underdamped quality factor Ω/γ = cot[2πη / (2(1-2η))], 0 < η < 1/2.
double quality_factor(double eta);

/// Bath-renormalized tunneling amplitude Γ_r = Γ (2Γ/ω_c)^(2η/(1-2η)), 0 ≤ η < 1/2.
double renormalized_gap(double gamma0, double omega_c, double eta);

/// Non-interacting-blip long-time magnetization tanh(βε/2) — the reference the
/// simulated biased asymptote is expected to differ from.
double niba_asymptote(double eps, double beta);

}  // namespace qbath

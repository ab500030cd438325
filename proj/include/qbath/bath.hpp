#pragma once

#include <vector>

#include "qbath/types.hpp"

namespace qbath {

/// Ohmic-family bath with a sharp cutoff:  J(ω) = η ω^s / ω_c^(s-1) for 0 < ω ≤ ω_c.
/// beta = kInf is the zero-temperature bath.  n_modes (M) and n_ph (the maximum total
/// occupation displacement retained in the truncated basis) travel with this struct
/// because discretization and truncation are properties of the bath being modeled.
struct BathSpec {
    double s = 1.0;
    double eta = 0.0;
    double omega_c = 1.0;
    double beta = kInf;
    int n_modes = 1;
    int n_ph = 1;
};

/// Throws domain_error on unphysical parameters (s ≤ 0, η < 0, ω_c ≤ 0, β ≤ 0, M < 1, N_ph < 0).
void validate(const BathSpec& spec);

/// J(ω); zero outside (0, ω_c].
double spectral_density(const BathSpec& spec, double omega);

/// Uniform M-mode sampling: ω_k = k ω_c / M, g_k² = η ω_c² k^s / M^(s+1), k = 1..M.
/// Matches the continuum: Σ_k g_k² → ∫ J = η ω_c²/(s+1) with O(1/M) relative error.
struct DiscreteBath {
    BathSpec spec;
    std::vector<double> omega;
    std::vector<double> g;

    /// 2π over the smallest mode spacing; horizon beyond which the discrete bath recurs.
    double poincare_time() const { return 2.0 * M_PI * spec.n_modes / spec.omega_c; }
};

DiscreteBath discretize(const BathSpec& spec);

/// Golden-rule rate γ(ω) = 2π J(ω) / (1 - e^{-βω}) for ω > 0, detailed-balance
/// continuation e^{βω} γ(-ω) for ω < 0 (the identity γ(-ω) = e^{-βω} γ(ω) is exact
/// by construction).  The ω → 0 limit is s-dependent: 0 for s > 1 or β = ∞;
/// 2πη/β for s = 1 at finite β; +∞ (returned as the encoded value kInf, not an
/// exception) for s < 1 at finite β.
double lindblad_gamma(const BathSpec& spec, double omega);

/// Lamb-shift integral S(ω) = (1/2π) PV ∫ γ(ω')/(ω - ω') dω' over the support of γ,
/// by adaptive quadrature with the pole subtracted symmetrically; absolute tolerance
/// 1e-10 η ω_c.  ω at the cutoff edge (log-divergent) is a domain error.
double lindblad_lamb_shift(const BathSpec& spec, double omega);

/// Thermal coherence horizon τ_B = β/π (∞ at zero temperature).
double bath_correlation_time(const BathSpec& spec);

}  // namespace qbath

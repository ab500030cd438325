#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "qbath/bath.hpp"
#include "qbath/hamiltonian.hpp"
#include "qbath/observables.hpp"
#include "qbath/types.hpp"

namespace qbath {

/// Born-Markov reference dynamics for the same schedule and bath as the exact
/// propagation.  The dissipator is built from σ_z eigenoperators in the
/// instantaneous eigenbasis of H_S(t); the Lamb-shift Hamiltonian is included
/// by default and toggleable to isolate its effect.
struct LindbladModel {
    Schedule schedule;
    BathSpec spec;
    bool include_lamb_shift = true;
};

/// Closed-form ingredients of the unbiased constant-drive solution:
/// relaxation/dephasing times T₂ = 2T₁ = 2/[γ(2Γ)(1+e^{-2βΓ})], the coherence
/// precession rate 2Γ + S(2Γ) - S(-2Γ) (bare 2Γ when the Lamb shift is off),
/// and the stationary value ⟨σ_x(∞)⟩ = tanh(βΓ).
struct SbmAnalyticParams {
    double t1, t2, phase_rate, sx_inf;
};

/// Constant schedule with ε = 0 only; anything else is a domain error.
SbmAnalyticParams sbm_analytic_params(const LindbladModel& model);

/// (⟨σ_x(t)⟩, ⟨σ_z(t)⟩) of the closed-form unbiased solution from rho0.
std::pair<double, double> sbm_analytic(const LindbladModel& model, const ReducedDensity& rho0,
                                       double t);

/// Γ = 0 dephasing reference: cos(2εt) e^{-2γ(0)t}.  When γ(0) diverges
/// (sub-Ohmic, finite β) every t > 0 returns the fully-decohered value 0.
double pure_decoherence_analytic(const BathSpec& spec, double eps, double t);

/// Adiabatic-limit ground population along a linear anneal at β = ∞:
///   ρ₋₋(θ) = 1 - [1 - ρ₋₋(0)] exp(-∫₀^θ F dθ'),   F = t_f ξ² γ(Δ),
/// with ξ = 2Γ₀(1-θ)/Δ(θ) the eigenbasis matrix element of σ_z.  The exact
/// reduction of [ρ₋₋(0) + ∫F G]/G, since (FG) integrates to G - 1.  A ground
/// start ρ₋₋(0) = 1 therefore stays at 1 for every η and t_f.
double anneal_fidelity_analytic(const LindbladModel& model, double theta, double t_f,
                                double rho_gs0 = 1.0);

struct LindbladStats {
    std::int64_t steps = 0;
    double max_trace_drift = 0.0;
    double min_eigenvalue = 1.0;
};

using DensityObserver = std::function<void(double t, const ReducedDensity& rho)>;

/// Fourth-order Runge-Kutta integration of
///   dρ/dt = -i[H_S(t) + H_LS(t), ρ] + Σ_ω γ(ω)(A_ω ρ A_ω† - ½{A_ω†A_ω, ρ})
/// with the eigenoperators rebuilt at every stage time.  For anneal schedules
/// the two Lamb-shift integrals are tabulated over θ on a 513-node grid and
/// interpolated (constant schedules evaluate them exactly once).  Trace drift
/// beyond 1e-8 or an eigenvalue below -1e-8 aborts with numerics_error.
/// The observer fires on the initial density, every stride-th step, and the
/// final step; rho is advanced in place.
LindbladStats lindblad_rk4(const LindbladModel& model, ReducedDensity& rho, double t0,
                           double t1, double dt, int stride, const DensityObserver& observe);

}  // namespace qbath

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qbath/hamiltonian.hpp"
#include "qbath/types.hpp"

namespace qbath {

struct SilConfig {
    double dt = 0.005;       // step; the experiment layer scales 1/ω_c defaults
    int krylov_dim = 30;     // Lanczos vectors per step
    double norm_tol = 1e-8;  // pre-renormalization drift beyond this rejects the step
    bool adaptive = false;   // grow the subspace until the last coefficient is negligible
    double adaptive_tol = 1e-12;
    int krylov_max = 100;    // adaptive growth cap
};

void validate(const SilConfig& cfg);

struct StepInfo {
    double norm_drift = 0.0;  // | ‖ψ‖ - 1 | before renormalization
    int krylov_used = 0;
    bool breakdown = false;   // subspace closed early: result exact in that subspace
};

/// Per-trajectory scratch: Krylov vectors (allocated lazily up to the configured
/// maximum), the matvec target, and the small tridiagonal arrays.  One workspace
/// per trajectory; never shared.
struct KrylovWorkspace {
    KrylovWorkspace(std::int64_t dim, int n_max);

    cplx* vec(int j);

    std::int64_t dim;
    std::vector<std::vector<cplx>> basis;
    std::vector<cplx> w;
    std::vector<double> alpha, beta;
    std::vector<const cplx*> ptrs;  // pointer scratch for the batched kernels
    std::vector<cplx> coef;
};

/// One short-iterative-Lanczos step: builds the Krylov space of H(t + h/2) from
/// ψ, exponentiates the tridiagonal projection, advances ψ in place by h
/// (h may be negative: reverse evolution), renormalizes, and reports the drift.
/// β ≈ 0 terminates early with the exact invariant-subspace propagator; drift
/// beyond cfg.norm_tol throws numerics_error.
StepInfo sil_step(const HamiltonianModel& model, SystemState& psi, double t, double h,
                  const SilConfig& cfg, KrylovWorkspace& ws);

struct PropagateStats {
    std::int64_t steps = 0;
    double max_norm_drift = 0.0;
    bool recurrence_horizon_exceeded = false;  // t1 - t0 ran past the discrete bath's revival time
};

using Observer = std::function<void(double t, const SystemState& psi, const StepInfo& info)>;

/// Uniform steps of cfg.dt from t0 to t1 (final step shortened to land on t1
/// exactly).  The observer fires on the initial state, every stride-th step,
/// and the final step.
PropagateStats propagate(const HamiltonianModel& model, SystemState& psi, double t0, double t1,
                         const SilConfig& cfg, int stride, const Observer& observe);

}  // namespace qbath

#pragma once

#include <cstdint>
#include <vector>

#include "qbath/bath.hpp"
#include "qbath/fock.hpp"
#include "qbath/types.hpp"

namespace qbath {

/// Drive schedule for the qubit part H_S(t) = -Γ(t)σ_x - ε(t)σ_z.
struct Schedule {
    enum class Kind { constant, linear_anneal };
    Kind kind = Kind::constant;
    double gamma0 = 1.0;
    double epsilon0 = 0.0;
    double t_f = 0.0;  // linear_anneal only

    /// constant: Γ(t) = Γ₀.  linear_anneal: Γ(t) = (1 - θ)Γ₀ with θ = t/t_f
    /// clamped to [0, 1] (the propagator evaluates at midpoints, which can
    /// overshoot the endpoint by dt/2).
    double gamma(double t) const;
    /// constant: ε₀.  linear_anneal: θ·ε₀.
    double epsilon(double t) const;
};

void validate(const Schedule& sched);

/// Instantaneous qubit gap Δ(t) = 2√(Γ(t)² + ε(t)²).
double spectral_gap(const Schedule& sched, double t);

/// Smallest gap over the schedule: the constant value, or for a linear anneal
/// the closed-form minimum 2 Γ₀|ε₀| / √(Γ₀² + ε₀²) attained at
/// θ* = Γ₀²/(Γ₀² + ε₀²).
double minimum_gap(const Schedule& sched);

/// Matrix-free H(t) = H_S(t) + H_B + V over a truncated basis.  Construction
/// precomputes the per-pattern bath energies and the symmetric coupling edge
/// list (every b_k / b_k† transition staying inside the truncation, with matrix
/// element g_k √n); apply is then one fused qubit-local pass plus one CSR pass,
/// with no hashing on the hot path.  Immutable after construction.
class HamiltonianModel {
public:
    HamiltonianModel(Schedule sched, DiscreteBath bath, const FockBasis& basis);

    const Schedule& schedule() const { return sched_; }
    const DiscreteBath& bath() const { return bath_; }
    const FockBasis& basis() const { return *basis_; }

    /// y = H(t) x; x and y are length basis().dim() and must not alias.
    void apply(double t, const cplx* x, cplx* y) const;
    void apply(double t, const SystemState& psi, SystemState& out) const;

    /// ⟨x|H_B|x⟩ (absolute bath energy, zero-point omitted).
    double bath_energy(const cplx* x) const;
    /// ⟨x|V|x⟩ with V = σ_z ⊗ Σ_k g_k(b_k + b_k†).
    double coupling_energy(const cplx* x) const;

    std::int64_t dim() const { return basis_->dim(); }
    std::int64_t coupling_nnz() const { return static_cast<std::int64_t>(col_.size()); }

private:
    Schedule sched_;
    DiscreteBath bath_;
    const FockBasis* basis_;
    std::vector<double> diag_;        // per-pattern Σ_k n_k ω_k
    std::vector<std::int64_t> row_ptr_;  // CSR over patterns, size n_patterns + 1
    std::vector<std::int32_t> col_;
    std::vector<double> amp_;
};

}  // namespace qbath

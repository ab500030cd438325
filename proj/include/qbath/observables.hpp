#pragma once

#include <array>

#include "qbath/fock.hpp"
#include "qbath/hamiltonian.hpp"
#include "qbath/types.hpp"

namespace qbath {

/// 2x2 reduced qubit density matrix, row-major [ρ₀₀ ρ₀₁; ρ₁₀ ρ₁₁] in the
/// σ_z basis (index 0 = ẑ;+).
struct ReducedDensity {
    std::array<cplx, 4> m{};

    double sigma_x() const { return (m[1] + m[2]).real(); }
    double sigma_z() const { return (m[0] - m[3]).real(); }
    double trace_real() const { return (m[0] + m[3]).real(); }
    double purity() const;
    /// Eigenvalues ascending, assuming Hermiticity.
    std::array<double, 2> eigenvalues() const;
};

/// Partial trace over the bath: ρ[a][b] = Σ_patterns ψ(a, pat) conj(ψ(b, pat)).
/// Single streaming pass; no large intermediate.
ReducedDensity reduce(const SystemState& psi);

/// Physicality diagnostic: Hermitian, unit trace within trace_tol, eigenvalues
/// inside [-eig_tol, 1 + eig_tol].  Throws numerics_error on violation.
void check_density(const ReducedDensity& rho, double trace_tol = 1e-12,
                   double eig_tol = 1e-10);

/// Real ground-state eigenvector of H_S = -Γσ_x - εσ_z (energy -√(Γ²+ε²)),
/// branch chosen so the larger component is computed additively: no
/// cancellation anywhere in (Γ, ε), first component always >= 0.
std::array<double, 2> ground_eigenvector(double gamma, double eps);

/// ⟨ε₋(t)|ρ|ε₋(t)⟩ in the instantaneous eigenbasis of the schedule.
double ground_population(const Schedule& sched, double t, const ReducedDensity& rho);

struct EnergyPartition {
    double h_s, h_b, v, total;
};

/// (⟨H_S⟩, ⟨H_B⟩, ⟨V⟩, ⟨H⟩); the total is the sum of the parts by construction,
/// and matches ⟨ψ|H|ψ⟩ to rounding (pinned by tests).
EnergyPartition energy_partition(const HamiltonianModel& model, double t,
                                 const SystemState& psi);

/// Excess of tr[H_S(t_f) ρ] over the final ground energy -√(Γ(t_f)² + ε(t_f)²);
/// equals 2ε[1 - ρ₋₋] at the anneal endpoint.  Linear-anneal schedules only.
double residual_energy(const Schedule& sched, const ReducedDensity& rho);

}  // namespace qbath

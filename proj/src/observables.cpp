#include "qbath/observables.hpp"

#include <cmath>
#include <string>

namespace qbath {

double ReducedDensity::purity() const {
    return (m[0] * m[0] + m[1] * m[2] + m[2] * m[1] + m[3] * m[3]).real();
}

std::array<double, 2> ReducedDensity::eigenvalues() const {
    const double half_tr = 0.5 * trace_real();
    const double half_dz = 0.5 * (m[0] - m[3]).real();
    const double rad = std::hypot(half_dz, std::abs(m[1]));
    return {half_tr - rad, half_tr + rad};
}

ReducedDensity reduce(const SystemState& psi) {
    double r00 = 0.0, r11 = 0.0;
    cplx r01{0.0, 0.0};
    const std::size_t n_pat = psi.amps.size() / 2;
    for (std::size_t p = 0; p < n_pat; ++p) {
        const cplx up = psi.amps[2 * p], dn = psi.amps[2 * p + 1];
        r00 += std::norm(up);
        r11 += std::norm(dn);
        r01 += up * std::conj(dn);
    }
    ReducedDensity rho;
    rho.m = {cplx(r00, 0.0), r01, std::conj(r01), cplx(r11, 0.0)};
    return rho;
}

void check_density(const ReducedDensity& rho, double trace_tol, double eig_tol) {
    if (std::abs(rho.m[1] - std::conj(rho.m[2])) > 1e-12 ||
        std::abs(rho.m[0].imag()) > 1e-12 || std::abs(rho.m[3].imag()) > 1e-12)
        throw numerics_error("density: lost Hermiticity");
    if (std::abs(rho.trace_real() - 1.0) > trace_tol)
        throw numerics_error("density: trace drifted to " + std::to_string(rho.trace_real()));
    const auto ev = rho.eigenvalues();
    if (ev[0] < -eig_tol || ev[1] > 1.0 + eig_tol)
        throw numerics_error("density: eigenvalue outside [0, 1]: " + std::to_string(ev[0]) +
                             ", " + std::to_string(ev[1]));
}

std::array<double, 2> ground_eigenvector(double gamma, double eps) {
    const double half_gap = std::hypot(gamma, eps);
    if (half_gap == 0.0) return {1.0, 0.0};  // degenerate H_S = 0: any vector
    double a, b;
    if (eps >= 0.0) {
        a = half_gap + eps;
        b = gamma;
    } else {
        a = gamma;
        b = half_gap - eps;
    }
    const double nrm = std::hypot(a, b);
    return {a / nrm, b / nrm};
}

double ground_population(const Schedule& sched, double t, const ReducedDensity& rho) {
    const auto v = ground_eigenvector(sched.gamma(t), sched.epsilon(t));
    const cplx p = v[0] * (rho.m[0] * v[0] + rho.m[1] * v[1]) +
                   v[1] * (rho.m[2] * v[0] + rho.m[3] * v[1]);
    return p.real();
}

EnergyPartition energy_partition(const HamiltonianModel& model, double t,
                                 const SystemState& psi) {
    if (psi.basis != &model.basis()) throw domain_error("observables: state basis mismatch");
    const ReducedDensity rho = reduce(psi);
    EnergyPartition e;
    e.h_s = -model.schedule().gamma(t) * rho.sigma_x() -
            model.schedule().epsilon(t) * rho.sigma_z();
    e.h_b = model.bath_energy(psi.amps.data());
    e.v = model.coupling_energy(psi.amps.data());
    e.total = e.h_s + e.h_b + e.v;
    return e;
}

double residual_energy(const Schedule& sched, const ReducedDensity& rho) {
    if (sched.kind != Schedule::Kind::linear_anneal)
        throw domain_error("observables: residual energy is defined for anneal schedules");
    const double gf = sched.gamma(sched.t_f);
    const double ef = sched.epsilon(sched.t_f);
    const double tr_hs = -gf * rho.sigma_x() - ef * rho.sigma_z();
    return tr_hs + std::hypot(gf, ef);
}

}  // namespace qbath

#include "qbath/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "qbath/kernels.hpp"

namespace qbath {

namespace {

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace

double Schedule::gamma(double t) const {
    if (kind == Kind::constant) return gamma0;
    return (1.0 - clamp01(t / t_f)) * gamma0;
}

double Schedule::epsilon(double t) const {
    if (kind == Kind::constant) return epsilon0;
    return clamp01(t / t_f) * epsilon0;
}

void validate(const Schedule& sched) {
    if (!(sched.gamma0 >= 0.0)) throw domain_error("schedule: gamma0 must be >= 0");
    if (!std::isfinite(sched.gamma0) || !std::isfinite(sched.epsilon0))
        throw domain_error("schedule: gamma0 and epsilon0 must be finite");
    if (sched.kind == Schedule::Kind::linear_anneal && !(sched.t_f > 0.0))
        throw domain_error("schedule: linear anneal needs t_f > 0");
}

double spectral_gap(const Schedule& sched, double t) {
    return 2.0 * std::hypot(sched.gamma(t), sched.epsilon(t));
}

double minimum_gap(const Schedule& sched) {
    if (sched.kind == Schedule::Kind::constant) return spectral_gap(sched, 0.0);
    const double h = std::hypot(sched.gamma0, sched.epsilon0);
    if (h == 0.0) return 0.0;
    return 2.0 * sched.gamma0 * std::abs(sched.epsilon0) / h;
}

HamiltonianModel::HamiltonianModel(Schedule sched, DiscreteBath bath, const FockBasis& basis)
    : sched_(sched), bath_(std::move(bath)), basis_(&basis) {
    qbath::validate(sched_);
    qbath::validate(bath_.spec);
    if (bath_.spec.n_modes != basis.m_modes())
        throw domain_error("model: bath and basis must agree on the mode count");

    const std::int32_t n_pat = basis.n_patterns();
    const auto& ref = basis.reference();
    double e_ref = 0.0;
    for (int k = 1; k <= basis.m_modes(); ++k) e_ref += ref[k - 1] * bath_.omega[k - 1];
    diag_.resize(n_pat);
    for (std::int32_t p = 0; p < n_pat; ++p) {
        const auto v = basis.pattern(p);
        double e = e_ref;
        for (std::int32_t i = 0; i < v.size; ++i) e += v.deltas[i] * bath_.omega[v.modes[i] - 1];
        diag_[p] = e;
    }

    // One coupling edge per (pattern, supported mode): lowering |Δ| by one in
    // mode k lands on the unique partner one displacement level down, which the
    // truncation always retains.  Storing each edge in both directions makes the
    // CSR pass a plain symmetric matvec.
    struct Trip {
        std::int32_t p, q;
        double a;
    };
    std::vector<Trip> trips;
    const auto last = basis.pattern(n_pat - 1);
    trips.reserve(static_cast<std::size_t>(last.modes + last.size - basis.pattern(0).modes));
    std::vector<std::int32_t> pm(std::max(basis.n_ph(), 1)), pd(std::max(basis.n_ph(), 1));
    for (std::int32_t p = basis.level_start()[1]; p < n_pat; ++p) {
        const auto v = basis.pattern(p);
        for (std::int32_t i = 0; i < v.size; ++i) {
            std::int32_t n2 = 0;
            for (std::int32_t j = 0; j < v.size; ++j) {
                std::int32_t dd = v.deltas[j];
                if (j == i) dd += (dd > 0) ? -1 : 1;
                if (dd == 0) continue;
                pm[n2] = v.modes[j];
                pd[n2] = dd;
                ++n2;
            }
            const std::int32_t q = basis.find_pattern(pm.data(), pd.data(), n2);
            if (q < 0) throw numerics_error("model: truncation closure violated");
            const int k = v.modes[i];
            const std::int32_t d_hi = v.deltas[i];
            const std::int32_t d_lo = d_hi + ((d_hi > 0) ? -1 : 1);
            const double n_max = ref[k - 1] + std::max(d_hi, d_lo);
            trips.push_back({p, q, bath_.g[k - 1] * std::sqrt(n_max)});
        }
    }

    row_ptr_.assign(n_pat + 1, 0);
    for (const auto& t : trips) {
        ++row_ptr_[t.p + 1];
        ++row_ptr_[t.q + 1];
    }
    for (std::int32_t p = 0; p < n_pat; ++p) row_ptr_[p + 1] += row_ptr_[p];
    col_.resize(trips.size() * 2);
    amp_.resize(trips.size() * 2);
    std::vector<std::int64_t> cur(row_ptr_.begin(), row_ptr_.end() - 1);
    for (const auto& t : trips) {
        col_[cur[t.p]] = t.q;
        amp_[cur[t.p]] = t.a;
        ++cur[t.p];
        col_[cur[t.q]] = t.p;
        amp_[cur[t.q]] = t.a;
        ++cur[t.q];
    }
}

void HamiltonianModel::apply(double t, const cplx* x, cplx* y) const {
    const std::int32_t n_pat = basis_->n_patterns();
    kern::ops().qubit_local(static_cast<std::size_t>(n_pat), diag_.data(), sched_.gamma(t),
                            sched_.epsilon(t), x, y);
    for (std::int32_t p = 0; p < n_pat; ++p) {
        cplx up{0.0, 0.0}, dn{0.0, 0.0};
        for (std::int64_t e = row_ptr_[p]; e < row_ptr_[p + 1]; ++e) {
            const auto q = col_[e];
            const double a = amp_[e];
            up += a * x[2 * q];
            dn += a * x[2 * q + 1];
        }
        y[2 * p] += up;
        y[2 * p + 1] -= dn;
    }
}

void HamiltonianModel::apply(double t, const SystemState& psi, SystemState& out) const {
    if (psi.basis != basis_ || out.basis != basis_)
        throw domain_error("model: state basis mismatch");
    apply(t, psi.amps.data(), out.amps.data());
}

double HamiltonianModel::bath_energy(const cplx* x) const {
    const std::int32_t n_pat = basis_->n_patterns();
    double acc = 0.0;
    for (std::int32_t p = 0; p < n_pat; ++p) {
        acc += diag_[p] * (std::norm(x[2 * p]) + std::norm(x[2 * p + 1]));
    }
    return acc;
}

double HamiltonianModel::coupling_energy(const cplx* x) const {
    const std::int32_t n_pat = basis_->n_patterns();
    double acc = 0.0;
    for (std::int32_t p = 0; p < n_pat; ++p) {
        cplx up{0.0, 0.0}, dn{0.0, 0.0};
        for (std::int64_t e = row_ptr_[p]; e < row_ptr_[p + 1]; ++e) {
            const auto q = col_[e];
            const double a = amp_[e];
            up += a * x[2 * q];
            dn += a * x[2 * q + 1];
        }
        acc += (std::conj(x[2 * p]) * up - std::conj(x[2 * p + 1]) * dn).real();
    }
    return acc;
}

}  // namespace qbath

#include "qbath/sil.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "qbath/kernels.hpp"

namespace qbath {

void validate(const SilConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw domain_error("sil: dt must be > 0");
    if (cfg.krylov_dim < 2) throw domain_error("sil: krylov_dim must be >= 2");
    if (!(cfg.norm_tol > 0.0)) throw domain_error("sil: norm_tol must be > 0");
    if (cfg.adaptive && cfg.krylov_max < cfg.krylov_dim)
        throw domain_error("sil: krylov_max must be >= krylov_dim");
}

KrylovWorkspace::KrylovWorkspace(std::int64_t d, int n_max) : dim(d), w(d) {
    basis.reserve(static_cast<std::size_t>(n_max) + 1);
}

cplx* KrylovWorkspace::vec(int j) {
    if (j >= static_cast<int>(basis.size())) basis.resize(j + 1);
    if (basis[j].empty()) basis[j].resize(dim);
    return basis[j].data();
}

namespace {

// Lanczos with full re-orthogonalization: one blocked classical-Gram-Schmidt
// sweep per vector, repeated once when the first sweep removed a large
// component ("twice is enough").  Returns the number of basis vectors built;
// sets breakdown when the residual vanished (invariant subspace reached).
int lanczos_extend(const HamiltonianModel& model, double t_mid, KrylovWorkspace& ws, int from,
                   int target, double& scale, bool& breakdown) {
    const auto& k = kern::ops();
    const auto n = static_cast<std::size_t>(ws.dim);
    int m = from;
    for (int j = from; j < target; ++j) {
        cplx* vj = ws.vec(j);
        model.apply(t_mid, vj, ws.w.data());
        if (j > 0) k.caxpy(n, cplx(-ws.beta[j - 1], 0.0), ws.vec(j - 1), ws.w.data());
        double aj = k.cdotc(n, vj, ws.w.data()).real();
        k.caxpy(n, cplx(-aj, 0.0), vj, ws.w.data());
        const double nrm0 = std::sqrt(k.cnrm2sq(n, ws.w.data()));

        ws.ptrs.resize(j + 1);
        for (int i = 0; i <= j; ++i) ws.ptrs[i] = ws.vec(i);
        ws.coef.resize(j + 1);
        k.cdotc_multi(n, ws.ptrs.data(), j + 1, ws.w.data(), ws.coef.data());
        k.caxpy_multi(n, ws.ptrs.data(), ws.coef.data(), j + 1, ws.w.data());
        aj += ws.coef[j].real();
        double nrm1 = std::sqrt(k.cnrm2sq(n, ws.w.data()));
        if (nrm1 < 0.707 * nrm0) {
            k.cdotc_multi(n, ws.ptrs.data(), j + 1, ws.w.data(), ws.coef.data());
            k.caxpy_multi(n, ws.ptrs.data(), ws.coef.data(), j + 1, ws.w.data());
            aj += ws.coef[j].real();
            nrm1 = std::sqrt(k.cnrm2sq(n, ws.w.data()));
        }

        ws.alpha.push_back(aj);
        scale = std::max({scale, std::abs(aj), nrm1});
        m = j + 1;
        if (nrm1 <= 1e-13 * std::max(scale, 1e-300)) {
            breakdown = true;
            return m;
        }
        ws.beta.push_back(nrm1);
        cplx* vn = ws.vec(j + 1);
        std::copy(ws.w.begin(), ws.w.end(), vn);
        k.cscal(n, cplx(1.0 / nrm1, 0.0), vn);
    }
    return m;
}

// ψ started as v_0, so its Krylov coordinates are e₁; the advanced coordinates
// are Q e^{-iλh} Qᵀ e₁ for the tridiagonal eigendecomposition (λ, Q).
void tridiag_propagator_coef(const std::vector<double>& alpha, const std::vector<double>& beta,
                             int m, double h, std::vector<cplx>& coef) {
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd e = m > 1 ? Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1)
                              : Eigen::VectorXd();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw numerics_error("sil: tridiagonal eigensolve failed to converge");
    const auto& q = es.eigenvectors();
    const auto& lam = es.eigenvalues();
    coef.assign(m, cplx{0.0, 0.0});
    for (int kk = 0; kk < m; ++kk) {
        const cplx phase = std::exp(cplx(0.0, -lam[kk] * h)) * q(0, kk);
        for (int j = 0; j < m; ++j) coef[j] += q(j, kk) * phase;
    }
}

}  // namespace

StepInfo sil_step(const HamiltonianModel& model, SystemState& psi, double t, double h,
                  const SilConfig& cfg, KrylovWorkspace& ws) {
    if (psi.basis != &model.basis()) throw domain_error("sil: state basis mismatch");
    StepInfo info;
    if (h == 0.0) return info;
    const auto& k = kern::ops();
    const auto n = static_cast<std::size_t>(ws.dim);
    const double t_mid = t + 0.5 * h;
    const int m_cap =
        static_cast<int>(std::min<std::int64_t>(cfg.adaptive ? cfg.krylov_max : cfg.krylov_dim,
                                                ws.dim));

    std::copy(psi.amps.begin(), psi.amps.end(), ws.vec(0));
    ws.alpha.clear();
    ws.beta.clear();
    double scale = 0.0;
    bool breakdown = false;
    int m = lanczos_extend(model, t_mid, ws, 0, std::min(cfg.krylov_dim, m_cap), scale,
                           breakdown);

    std::vector<cplx> coef;
    tridiag_propagator_coef(ws.alpha, ws.beta, m, h, coef);
    if (cfg.adaptive) {
        while (!breakdown && m < m_cap && std::abs(coef[m - 1]) > cfg.adaptive_tol) {
            m = lanczos_extend(model, t_mid, ws, m, std::min(m + 5, m_cap), scale, breakdown);
            tridiag_propagator_coef(ws.alpha, ws.beta, m, h, coef);
        }
    }

    std::fill(psi.amps.begin(), psi.amps.end(), cplx{0.0, 0.0});
    ws.ptrs.resize(m);
    ws.coef.resize(m);
    for (int j = 0; j < m; ++j) {
        ws.ptrs[j] = ws.vec(j);
        ws.coef[j] = -coef[j];  // the batched update computes w -= Σ a_j v_j
    }
    k.caxpy_multi(n, ws.ptrs.data(), ws.coef.data(), m, psi.amps.data());

    const double nrm = std::sqrt(k.cnrm2sq(n, psi.amps.data()));
    info.norm_drift = std::abs(nrm - 1.0);
    info.krylov_used = m;
    info.breakdown = breakdown;
    if (info.norm_drift > cfg.norm_tol) {
        throw numerics_error("sil: norm drift " + std::to_string(info.norm_drift) +
                             " at t = " + std::to_string(t) +
                             " exceeds tolerance; reduce dt or raise krylov_dim");
    }
    k.cscal(n, cplx(1.0 / nrm, 0.0), psi.amps.data());
    return info;
}

PropagateStats propagate(const HamiltonianModel& model, SystemState& psi, double t0, double t1,
                         const SilConfig& cfg, int stride, const Observer& observe) {
    validate(cfg);
    if (t1 < t0) throw domain_error("sil: t1 must be >= t0");
    if (stride < 1) throw domain_error("sil: observer stride must be >= 1");
    PropagateStats stats;
    if (t1 - t0 > model.bath().poincare_time() * (1.0 + 1e-12))
        stats.recurrence_horizon_exceeded = true;

    if (observe) observe(t0, psi, StepInfo{});
    if (t1 == t0) return stats;

    KrylovWorkspace ws(model.dim(), cfg.adaptive ? cfg.krylov_max : cfg.krylov_dim);
    const double span = t1 - t0;
    const auto n_steps = static_cast<std::int64_t>(std::ceil(span / cfg.dt - 1e-9));
    for (std::int64_t i = 0; i < n_steps; ++i) {
        const double ta = t0 + static_cast<double>(i) * cfg.dt;
        const double tb = (i + 1 == n_steps) ? t1 : t0 + static_cast<double>(i + 1) * cfg.dt;
        const StepInfo info = sil_step(model, psi, ta, tb - ta, cfg, ws);
        ++stats.steps;
        stats.max_norm_drift = std::max(stats.max_norm_drift, info.norm_drift);
        if (observe && ((i + 1) % stride == 0 || i + 1 == n_steps)) observe(tb, psi, info);
    }
    return stats;
}

}  // namespace qbath

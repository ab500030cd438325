#include "qbath/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qbath/quadrature.hpp"

namespace qbath {

namespace {

using M2 = std::array<cplx, 4>;  // row-major 2x2

M2 mul(const M2& a, const M2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

void axpy(M2& y, cplx a, const M2& x) {
    for (int i = 0; i < 4; ++i) y[i] += a * x[i];
}

// A ρ A† - ½{A†A, ρ} accumulated into out with weight w, for real A.
void dissipate(M2& out, double w, const M2& a, const M2& rho) {
    if (w == 0.0) return;
    const M2 ad = {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
    const M2 ara = mul(mul(a, rho), ad);
    const M2 ada = mul(ad, a);
    const M2 anti = mul(ada, rho);
    const M2 anti2 = mul(rho, ada);
    for (int i = 0; i < 4; ++i) out[i] += w * (ara[i] - 0.5 * (anti[i] + anti2[i]));
}

// Uniform-grid Catmull-Rom over [0, 1] with clamped ends.
double interp_uniform(const std::vector<double>& y, double x) {
    const int n = static_cast<int>(y.size()) - 1;
    const double u = std::clamp(x, 0.0, 1.0) * n;
    int i = std::min(static_cast<int>(u), n - 1);
    const double t = u - i;
    const double y0 = y[std::max(i - 1, 0)], y1 = y[i], y2 = y[i + 1],
                 y3 = y[std::min(i + 2, n)];
    return 0.5 * ((2.0 * y1) + (-y0 + y2) * t + (2.0 * y0 - 5.0 * y1 + 4.0 * y2 - y3) * t * t +
                  (-y0 + 3.0 * y1 - 3.0 * y2 + y3) * t * t * t);
}

// Lamb-shift pair (S(Δ(t)), S(-Δ(t))): exact for constant schedules, a θ-grid
// table for anneals (the two integrals are smooth in θ away from the cutoff
// edge, which the acceptance-scale parameters never approach).
struct LambShiftEval {
    bool enabled = false;
    bool tabulated = false;
    double s_down = 0.0, s_up = 0.0;
    double t_f = 1.0;
    std::vector<double> tab_down, tab_up;

    static LambShiftEval make(const LindbladModel& model) {
        LambShiftEval ev;
        ev.enabled = model.include_lamb_shift && model.spec.eta > 0.0;
        if (!ev.enabled) return ev;
        if (model.schedule.kind == Schedule::Kind::constant) {
            const double gap = spectral_gap(model.schedule, 0.0);
            ev.s_down = lindblad_lamb_shift(model.spec, gap);
            ev.s_up = lindblad_lamb_shift(model.spec, -gap);
            return ev;
        }
        ev.tabulated = true;
        ev.t_f = model.schedule.t_f;
        const int n = 512;
        ev.tab_down.resize(n + 1);
        ev.tab_up.resize(n + 1);
        for (int i = 0; i <= n; ++i) {
            const double gap = spectral_gap(model.schedule, ev.t_f * i / n);
            ev.tab_down[i] = lindblad_lamb_shift(model.spec, gap);
            ev.tab_up[i] = lindblad_lamb_shift(model.spec, -gap);
        }
        return ev;
    }

    std::pair<double, double> at(double t) const {
        if (!enabled) return {0.0, 0.0};
        if (!tabulated) return {s_down, s_up};
        const double th = t / t_f;
        return {interp_uniform(tab_down, th), interp_uniform(tab_up, th)};
    }
};

// dρ/dt at time τ.  The ω = 0 eigenoperator z_g(|g⟩⟨g| - |e⟩⟨e|) contributes
// dephasing only when ⟨g|σ_z|g⟩ ≠ 0 (biased drive); its Lamb-shift term is
// proportional to the identity and drops out of the commutator.
M2 derivative(const LindbladModel& model, const LambShiftEval& lamb, double tau,
              const M2& rho) {
    const double gam = model.schedule.gamma(tau);
    const double eps = model.schedule.epsilon(tau);
    const auto gv = ground_eigenvector(gam, eps);
    const double a = gv[0], b = gv[1];  // ground (a,b), excited (-b,a): continuous in (Γ,ε)
    const double c = -2.0 * a * b;      // ⟨g|σ_z|e⟩
    const double zg = a * a - b * b;    // ⟨g|σ_z|g⟩
    const double gap = 2.0 * std::hypot(gam, eps);

    const double rate_down = c * c * lindblad_gamma(model.spec, gap);
    const double rate_up = c * c * lindblad_gamma(model.spec, -gap);
    double rate_zero = 0.0;
    if (zg != 0.0) {
        const double g0 = lindblad_gamma(model.spec, 0.0);
        if (std::isinf(g0))
            throw domain_error(
                "lindblad: dephasing rate gamma(0) diverges (sub-Ohmic, finite beta)");
        rate_zero = zg * zg * g0;
    }

    M2 h = {cplx(-eps, 0.0), cplx(-gam, 0.0), cplx(-gam, 0.0), cplx(eps, 0.0)};
    if (lamb.enabled) {
        const auto [sd, su] = lamb.at(tau);
        // H_LS = c² [S(Δ)|e⟩⟨e| + S(-Δ)|g⟩⟨g|]  (identity part omitted)
        const double ce = c * c * sd, cg = c * c * su;
        h[0] += cg * a * a + ce * b * b;
        h[1] += cg * a * b - ce * a * b;
        h[2] += cg * a * b - ce * a * b;
        h[3] += cg * b * b + ce * a * a;
    }

    M2 out{};
    const M2 hr = mul(h, rho), rh = mul(rho, h);
    for (int i = 0; i < 4; ++i) out[i] = cplx(0.0, -1.0) * (hr[i] - rh[i]);

    // Unit-weight eigenoperators; the squared matrix elements c², z_g² are
    // already folded into the rates.
    if (rate_down != 0.0) {
        const M2 a_down = {-a * b, a * a, -b * b, a * b};  // |g⟩⟨e|
        dissipate(out, rate_down, a_down, rho);
    }
    if (rate_up != 0.0) {
        const M2 a_up = {-a * b, -b * b, a * a, a * b};  // |e⟩⟨g|
        dissipate(out, rate_up, a_up, rho);
    }
    if (rate_zero != 0.0) {
        const M2 a0 = {cplx(a * a - b * b, 0.0), cplx(2.0 * a * b, 0.0),
                       cplx(2.0 * a * b, 0.0), cplx(b * b - a * a, 0.0)};  // |g⟩⟨g| - |e⟩⟨e|
        dissipate(out, rate_zero, a0, rho);
    }
    return out;
}

void validate_model(const LindbladModel& model) {
    validate(model.schedule);
    validate(model.spec);
}

}  // namespace

SbmAnalyticParams sbm_analytic_params(const LindbladModel& model) {
    validate_model(model);
    if (model.schedule.kind != Schedule::Kind::constant || model.schedule.epsilon0 != 0.0)
        throw domain_error("lindblad: closed form holds for constant unbiased drive only");
    const double gam = model.schedule.gamma0;
    const double beta = model.spec.beta;
    const double g2 = lindblad_gamma(model.spec, 2.0 * gam);
    const double thermal = std::isinf(beta) ? 1.0 : 1.0 + std::exp(-2.0 * beta * gam);
    const double rate1 = g2 * thermal;
    SbmAnalyticParams p;
    p.t1 = rate1 > 0.0 ? 1.0 / rate1 : kInf;
    p.t2 = 2.0 * p.t1;
    p.phase_rate = 2.0 * gam;
    if (model.include_lamb_shift && model.spec.eta > 0.0) {
        p.phase_rate += lindblad_lamb_shift(model.spec, 2.0 * gam) -
                        lindblad_lamb_shift(model.spec, -2.0 * gam);
    }
    p.sx_inf = std::isinf(beta) ? 1.0 : std::tanh(beta * gam);
    return p;
}

std::pair<double, double> sbm_analytic(const LindbladModel& model, const ReducedDensity& rho0,
                                       double t) {
    const auto p = sbm_analytic_params(model);
    const double beta = model.spec.beta;
    const double gam = model.schedule.gamma0;
    // Populations relax in the σ_x eigenbasis: |x̂;-⟩ (σ_x = -1) carries energy
    // +Γ, Gibbs weight 1/(1+e^{2βΓ}).
    const double rho_mm0 = 0.5 * (1.0 - rho0.sigma_x());
    const double rho_g = std::isinf(beta) ? 0.0 : 1.0 / (1.0 + std::exp(2.0 * beta * gam));
    const double decay1 = p.t1 == kInf ? 1.0 : std::exp(-t / p.t1);
    const double sx = p.sx_inf - 2.0 * (rho_mm0 - rho_g) * decay1;

    const cplx rho_mp0 = 0.5 * (rho0.m[0] - rho0.m[3] + rho0.m[1] - rho0.m[2]);
    const double decay2 = p.t1 == kInf ? 1.0 : std::exp(-0.5 * t / p.t1);
    const double sz =
        2.0 * (rho_mp0 * std::exp(cplx(0.0, -p.phase_rate * t))).real() * decay2;
    return {sx, sz};
}

double pure_decoherence_analytic(const BathSpec& spec, double eps, double t) {
    validate(spec);
    if (t < 0.0) throw domain_error("lindblad: t must be >= 0");
    const double g0 = lindblad_gamma(spec, 0.0);
    if (std::isinf(g0)) return t > 0.0 ? 0.0 : 1.0;
    return std::cos(2.0 * eps * t) * std::exp(-2.0 * g0 * t);
}

double anneal_fidelity_analytic(const LindbladModel& model, double theta, double t_f,
                                double rho_gs0) {
    validate_model(model);
    if (model.schedule.kind != Schedule::Kind::linear_anneal)
        throw domain_error("lindblad: fidelity closed form needs a linear anneal");
    if (!std::isinf(model.spec.beta))
        throw domain_error("lindblad: fidelity closed form holds at zero temperature only");
    if (theta < 0.0 || theta > 1.0) throw domain_error("lindblad: theta must lie in [0, 1]");
    if (!(t_f > 0.0)) throw domain_error("lindblad: t_f must be > 0");
    if (theta == 0.0 || model.spec.eta == 0.0) return rho_gs0;

    const double g0 = model.schedule.gamma0;
    auto f = [&](double th) {
        const double gam = (1.0 - th) * g0;
        const double eps = th * model.schedule.epsilon0;
        const double gap = 2.0 * std::hypot(gam, eps);
        if (gap == 0.0) return 0.0;
        const double xi = 2.0 * gam / gap;
        return t_f * xi * xi * lindblad_gamma(model.spec, gap);
    };
    const double accum = integrate(f, 0.0, theta, 1e-13 * std::max(t_f, 1.0), 1e-9);
    return 1.0 - (1.0 - rho_gs0) * std::exp(-accum);
}

LindbladStats lindblad_rk4(const LindbladModel& model, ReducedDensity& rho, double t0,
                           double t1, double dt, int stride, const DensityObserver& observe) {
    validate_model(model);
    if (!(dt > 0.0)) throw domain_error("lindblad: dt must be > 0");
    if (t1 < t0) throw domain_error("lindblad: t1 must be >= t0");
    if (stride < 1) throw domain_error("lindblad: observer stride must be >= 1");

    const LambShiftEval lamb = LambShiftEval::make(model);
    LindbladStats stats;
    if (observe) observe(t0, rho);
    if (t1 == t0) return stats;

    const auto n_steps = static_cast<std::int64_t>(std::ceil((t1 - t0) / dt - 1e-9));
    M2 r = rho.m;
    for (std::int64_t i = 0; i < n_steps; ++i) {
        const double ta = t0 + static_cast<double>(i) * dt;
        const double tb = (i + 1 == n_steps) ? t1 : t0 + static_cast<double>(i + 1) * dt;
        const double h = tb - ta;

        const M2 k1 = derivative(model, lamb, ta, r);
        M2 r2 = r;
        axpy(r2, cplx(0.5 * h, 0.0), k1);
        const M2 k2 = derivative(model, lamb, ta + 0.5 * h, r2);
        M2 r3 = r;
        axpy(r3, cplx(0.5 * h, 0.0), k2);
        const M2 k3 = derivative(model, lamb, ta + 0.5 * h, r3);
        M2 r4 = r;
        axpy(r4, cplx(h, 0.0), k3);
        const M2 k4 = derivative(model, lamb, tb, r4);
        for (int j = 0; j < 4; ++j) {
            r[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }

        rho.m = r;
        const double drift = std::abs(rho.trace_real() - 1.0);
        const auto ev = rho.eigenvalues();
        stats.max_trace_drift = std::max(stats.max_trace_drift, drift);
        stats.min_eigenvalue = std::min(stats.min_eigenvalue, ev[0]);
        ++stats.steps;
        if (drift > 1e-8)
            throw numerics_error("lindblad: trace drift " + std::to_string(drift) +
                                 " at t = " + std::to_string(tb) + "; reduce dt");
        if (ev[0] < -1e-8)
            throw numerics_error("lindblad: negative population " + std::to_string(ev[0]) +
                                 " at t = " + std::to_string(tb) + "; reduce dt");
        if (observe && ((i + 1) % stride == 0 || i + 1 == n_steps)) observe(tb, rho);
    }
    return stats;
}

}  // namespace qbath

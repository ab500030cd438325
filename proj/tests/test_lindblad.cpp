#include <doctest.h>

#include <cmath>
#include <vector>

#include "qbath/lindblad.hpp"
#include "qbath/types.hpp"

using namespace qbath;

namespace {

LindbladModel make_model(double s, double eta, double omega_c, double beta, double gam,
                         double eps, bool lamb = true) {
    LindbladModel m;
    m.spec.s = s;
    m.spec.eta = eta;
    m.spec.omega_c = omega_c;
    m.spec.beta = beta;
    m.spec.n_modes = 10;  // the weak-coupling solver uses the continuum J only
    m.spec.n_ph = 1;
    m.schedule.gamma0 = gam;
    m.schedule.epsilon0 = eps;
    m.include_lamb_shift = lamb;
    return m;
}

ReducedDensity plus_x() {
    ReducedDensity rho;
    rho.m = {cplx{0.5, 0.0}, cplx{0.5, 0.0}, cplx{0.5, 0.0}, cplx{0.5, 0.0}};
    return rho;
}

ReducedDensity diag(double p_up) {
    ReducedDensity rho;
    rho.m = {cplx{p_up, 0.0}, {}, {}, cplx{1.0 - p_up, 0.0}};
    return rho;
}

}  // namespace

TEST_CASE("dephasing time is exactly twice the relaxation time") {
    for (double beta : {0.5, 5.0, kInf}) {
        const auto p = sbm_analytic_params(make_model(1.0, 0.01, 10.0, beta, 1.0, 0.0));
        CHECK(p.t2 == 2.0 * p.t1);  // exact by construction in the unbiased model
        CHECK(p.t1 > 0.0);
        CHECK(p.sx_inf == doctest::Approx(beta == kInf ? 1.0 : std::tanh(beta)).epsilon(1e-14));
    }
}

TEST_CASE("analytic parameter values at a pinned operating point") {
    // s = 1, η = 0.01, ω_c = 10, Γ = 1, β = ∞: γ(2Γ) = 2πJ(2) = 2π·0.01·2,
    // no absorption → T₁ = 1/γ(2Γ).
    const auto p = sbm_analytic_params(make_model(1.0, 0.01, 10.0, kInf, 1.0, 0.0));
    CHECK(p.t1 == doctest::Approx(1.0 / (2.0 * kPi * 0.01 * 2.0)).epsilon(1e-13));
    CHECK(p.sx_inf == 1.0);
    // Lamb shift off → the coherence precesses at the bare gap 2Γ.
    const auto bare = sbm_analytic_params(make_model(1.0, 0.01, 10.0, kInf, 1.0, 0.0, false));
    CHECK(bare.phase_rate == 2.0);
    // β = 10: detailed balance doubles up, T₁ = 1/[γ(2Γ)(1 + e^{-2βΓ})].
    const double beta = 10.0;
    const auto pf = sbm_analytic_params(make_model(1.0, 0.01, 10.0, beta, 1.0, 0.0));
    const double gam_down = lindblad_gamma(make_model(1.0, 0.01, 10.0, beta, 1.0, 0.0).spec, 2.0);
    CHECK(pf.t1 == doctest::Approx(1.0 / (gam_down * (1.0 + std::exp(-2.0 * beta)))).epsilon(1e-13));
    CHECK(pf.sx_inf == doctest::Approx(std::tanh(beta)).epsilon(1e-14));
}

TEST_CASE("biased or annealed schedules have no closed-form solution") {
    CHECK_THROWS_AS(sbm_analytic_params(make_model(1.0, 0.01, 10.0, 5.0, 1.0, 0.3)),
                    domain_error);
    auto m = make_model(1.0, 0.01, 10.0, 5.0, 1.0, 0.0);
    m.schedule.kind = Schedule::Kind::linear_anneal;
    m.schedule.t_f = 10.0;
    m.schedule.epsilon0 = 1.0;
    CHECK_THROWS_AS(sbm_analytic_params(m), domain_error);
}

TEST_CASE("RK4 density propagation matches the closed-form unbiased solution") {
    for (double beta : {5.0, kInf}) {
        auto model = make_model(1.0, 0.01, 10.0, beta, 1.0, 0.0);
        const auto p = sbm_analytic_params(model);
        // ẑ;+ exercises both channels: population relaxation (T₁ toward the
        // Gibbs weights) and coherence precession/decay (phase_rate, T₂).
        ReducedDensity rho = diag(1.0);
        const ReducedDensity rho0 = rho;
        double worst = 0.0;
        const double t_end = 2.0 * p.t1;
        const LindbladStats st = lindblad_rk4(
            model, rho, 0.0, t_end, 0.002, 50, [&](double t, const ReducedDensity& r) {
                const auto [sx, sz] = sbm_analytic(model, rho0, t);
                worst = std::max({worst, std::abs(r.sigma_x() - sx),
                                  std::abs(r.sigma_z() - sz)});
            });
        CHECK(worst < 1e-7);
        CHECK(st.steps > 0);
        CHECK(st.max_trace_drift < 1e-10);
        CHECK(st.min_eigenvalue > -1e-10);
    }
}

TEST_CASE("thermal state along sigma_x is a fixed point") {
    const double beta = 2.0;
    auto model = make_model(1.0, 0.02, 10.0, beta, 1.0, 0.0);
    // Gibbs state of H_S = -Γσ_x: ⟨σ_x⟩ = tanh(βΓ), no σ_z / σ_y component.
    const double sx = std::tanh(beta * 1.0);
    ReducedDensity rho;
    rho.m = {cplx{0.5, 0.0}, cplx{0.5 * sx, 0.0}, cplx{0.5 * sx, 0.0}, cplx{0.5, 0.0}};
    lindblad_rk4(model, rho, 0.0, 3.0, 0.002, 1 << 30, {});
    CHECK(rho.sigma_x() == doctest::Approx(sx).epsilon(1e-10));
    CHECK(std::abs(rho.sigma_z()) < 1e-10);
    CHECK(std::abs(rho.m[1].imag()) < 1e-10);
}

TEST_CASE("relaxation drives sigma_x to its stationary value") {
    auto model = make_model(1.0, 0.01, 10.0, 3.0, 1.0, 0.0);
    const auto p = sbm_analytic_params(model);
    ReducedDensity rho = diag(1.0);  // ẑ;+ — zero initial ⟨σ_x⟩
    lindblad_rk4(model, rho, 0.0, 12.0 * p.t1, 0.005, 1 << 30, {});
    CHECK(rho.sigma_x() == doctest::Approx(p.sx_inf).epsilon(1e-4));
}

TEST_CASE("decoupled qubit stays pure under RK4") {
    auto model = make_model(1.0, 0.0, 10.0, 5.0, 0.8, 0.0);
    ReducedDensity rho = diag(1.0);
    std::vector<double> t_obs, sz_obs;
    lindblad_rk4(model, rho, 0.0, 6.0, 0.001, 100, [&](double t, const ReducedDensity& r) {
        t_obs.push_back(t);
        sz_obs.push_back(r.sigma_z());
        CHECK(r.purity() == doctest::Approx(1.0).epsilon(1e-10));
    });
    // and executes the bare Rabi rotation ⟨σ_z⟩ = cos(2Γt)
    for (std::size_t i = 0; i < t_obs.size(); ++i)
        CHECK(std::abs(sz_obs[i] - std::cos(2.0 * 0.8 * t_obs[i])) < 1e-9);
}

TEST_CASE("pure-dephasing closed form") {
    BathSpec spec;
    spec.s = 1.0;
    spec.eta = 0.05;
    spec.omega_c = 10.0;
    spec.beta = 4.0;
    spec.n_modes = 10;
    spec.n_ph = 1;
    // s = 1, finite β: γ(0) = 2πη/β
    const double g0 = 2.0 * kPi * 0.05 / 4.0;
    for (double t : {0.0, 0.3, 2.0}) {
        CHECK(pure_decoherence_analytic(spec, 0.7, t) ==
              doctest::Approx(std::cos(2.0 * 0.7 * t) * std::exp(-2.0 * g0 * t)).epsilon(1e-13));
    }
    spec.beta = kInf;  // γ(0) = 0: undamped precession
    CHECK(pure_decoherence_analytic(spec, 0.7, 1.3) ==
          doctest::Approx(std::cos(2.0 * 0.7 * 1.3)).epsilon(1e-13));
    spec.s = 0.5;  // sub-Ohmic at finite β: γ(0) diverges → instant decoherence
    spec.beta = 4.0;
    CHECK(pure_decoherence_analytic(spec, 0.7, 1e-6) == 0.0);
    CHECK(pure_decoherence_analytic(spec, 0.7, 0.0) == 1.0);
}

TEST_CASE("sub-Ohmic finite-temperature dephasing is rejected as divergent") {
    // A biased drive needs the ω = 0 dephasing channel, whose rate γ(0)
    // diverges for s < 1 at finite temperature.
    auto model = make_model(0.5, 0.01, 10.0, 5.0, 1.0, 0.3);
    ReducedDensity rho = plus_x();
    CHECK_THROWS_AS(lindblad_rk4(model, rho, 0.0, 1.0, 0.01, 1, {}), domain_error);
    // Unbiased, the channel has zero weight and the same bath integrates fine.
    auto unbiased = make_model(0.5, 0.01, 10.0, 5.0, 1.0, 0.0);
    ReducedDensity rho2 = plus_x();
    CHECK_NOTHROW(lindblad_rk4(unbiased, rho2, 0.0, 0.5, 0.01, 1 << 30, {}));
}

TEST_CASE("adiabatic anneal fidelity: pinned value and ground-start invariance") {
    auto model = make_model(1.0, 0.01, 10.0, kInf, 1.0, 0.0);
    model.schedule.kind = Schedule::Kind::linear_anneal;
    model.schedule.epsilon0 = 1.0;
    model.schedule.t_f = 20.0;
    // Frozen by an 80-digit independent quadrature of the closed-form reduction.
    CHECK(anneal_fidelity_analytic(model, 1.0, 20.0, 0.5) ==
          doctest::Approx(0.81968494967612318745).epsilon(1e-8));
    // ρ₋₋(0) = 1 is an exact fixed point of the reduction, for every t_f.
    for (double tf : {1.0, 20.0, 300.0}) {
        CHECK(anneal_fidelity_analytic(model, 1.0, tf, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(anneal_fidelity_analytic(model, 0.5, tf, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // θ = 0 returns the start value untouched.
    CHECK(anneal_fidelity_analytic(model, 0.0, 20.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("annealed RK4 run stays physical and improves with slower drives") {
    auto model = make_model(1.0, 0.01, 10.0, kInf, 1.0, 0.0);
    model.schedule.kind = Schedule::Kind::linear_anneal;
    model.schedule.epsilon0 = 1.0;
    std::vector<double> final_pop;
    for (double tf : {2.0, 8.0, 32.0}) {
        model.schedule.t_f = tf;
        // start in the instantaneous ground state x̂;+ of H_S(0) = -Γ₀σ_x
        ReducedDensity rho = plus_x();
        const LindbladStats st = lindblad_rk4(model, rho, 0.0, tf, 5e-4 * tf, 1 << 30, {});
        CHECK(st.max_trace_drift < 1e-9);
        CHECK(st.min_eigenvalue > -1e-9);
        final_pop.push_back(ground_population(model.schedule, tf, rho));
    }
    // Faster drives lose more population; the slowest is essentially adiabatic.
    // (No [1] vs [2] ordering: both sit within diabatic-fringe wiggles of 1.)
    CHECK(final_pop[0] < final_pop[1]);
    CHECK(final_pop[0] < final_pop[2]);
    CHECK(final_pop[2] > 0.99);
}

TEST_CASE("integration rejects bad windows and step sizes") {
    auto model = make_model(1.0, 0.01, 10.0, 5.0, 1.0, 0.0);
    ReducedDensity rho = plus_x();
    CHECK_THROWS_AS(lindblad_rk4(model, rho, 1.0, 0.0, 0.01, 1, {}), domain_error);
    CHECK_THROWS_AS(lindblad_rk4(model, rho, 0.0, 1.0, 0.0, 1, {}), domain_error);
    CHECK_THROWS_AS(lindblad_rk4(model, rho, 0.0, 1.0, 0.01, 0, {}), domain_error);
}

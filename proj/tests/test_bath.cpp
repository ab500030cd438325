#include <doctest.h>

#include <cmath>

#include "qbath/bath.hpp"
#include "qbath/types.hpp"

using namespace qbath;

namespace {

BathSpec ohmic(double eta, double omega_c, double beta, int m) {
    BathSpec s;
    s.s = 1.0;
    s.eta = eta;
    s.omega_c = omega_c;
    s.beta = beta;
    s.n_modes = m;
    s.n_ph = 1;
    return s;
}

}  // namespace

TEST_CASE("spec validation rejects unphysical parameters") {
    BathSpec good = ohmic(0.1, 10.0, kInf, 8);
    CHECK_NOTHROW(validate(good));
    auto bad = good;
    bad.s = 0.0;
    CHECK_THROWS_AS(validate(bad), domain_error);
    bad = good;
    bad.eta = -1e-9;
    CHECK_THROWS_AS(validate(bad), domain_error);
    bad = good;
    bad.omega_c = 0.0;
    CHECK_THROWS_AS(validate(bad), domain_error);
    bad = good;
    bad.beta = 0.0;
    CHECK_THROWS_AS(validate(bad), domain_error);
    bad = good;
    bad.n_modes = 0;
    CHECK_THROWS_AS(validate(bad), domain_error);
    bad = good;
    bad.n_ph = -1;
    CHECK_THROWS_AS(validate(bad), domain_error);
}

TEST_CASE("spectral density: Ohmic family with hard cutoff") {
    BathSpec s = ohmic(0.2, 5.0, kInf, 4);
    CHECK(spectral_density(s, 1.0) == doctest::Approx(0.2 * 1.0).epsilon(1e-15));
    CHECK(spectral_density(s, 5.0) == doctest::Approx(0.2 * 5.0).epsilon(1e-15));
    CHECK(spectral_density(s, 5.0000001) == 0.0);
    CHECK(spectral_density(s, -1.0) == 0.0);
    s.s = 2.0;  // super-Ohmic: η ω²/ω_c
    CHECK(spectral_density(s, 2.0) == doctest::Approx(0.2 * 4.0 / 5.0).epsilon(1e-15));
    s.s = 0.5;  // sub-Ohmic: η √(ω ω_c)
    CHECK(spectral_density(s, 2.0) == doctest::Approx(0.2 * std::sqrt(2.0 * 5.0)).epsilon(1e-15));
}

TEST_CASE("discretization: linear comb, couplings, recurrence horizon") {
    const int m = 50;
    BathSpec s = ohmic(0.3, 7.0, kInf, m);
    const DiscreteBath bath = discretize(s);
    REQUIRE(bath.omega.size() == static_cast<std::size_t>(m));
    for (int k = 1; k <= m; ++k)
        CHECK(bath.omega[k - 1] == doctest::Approx(7.0 * k / m).epsilon(1e-15));

    // Ohmic: Σ g_k² = η ω_c² (M+1)/(2M), an exact finite sum; the continuum
    // integral ∫J = η ω_c²/2 is approached at rate 1/(2M).
    double sum_g2 = 0.0;
    for (double g : bath.g) sum_g2 += g * g;
    CHECK(sum_g2 == doctest::Approx(0.3 * 49.0 * (m + 1) / (2.0 * m)).epsilon(1e-13));
    CHECK(std::abs(sum_g2 - 0.3 * 49.0 / 2.0) ==
          doctest::Approx(0.3 * 49.0 / (2.0 * m)).epsilon(1e-12));

    CHECK(bath.poincare_time() == doctest::Approx(2.0 * kPi * m / 7.0).epsilon(1e-15));
}

TEST_CASE("golden-rule rate: positive branch, detailed balance, zero-frequency limits") {
    BathSpec s = ohmic(0.01, 10.0, 5.0, 8);

    const double w = 2.0;
    const double expected = 2.0 * kPi * 0.01 * w / (1.0 - std::exp(-5.0 * w));
    CHECK(lindblad_gamma(s, w) == doctest::Approx(expected).epsilon(1e-13));
    // detailed balance γ(-ω) = e^{-βω} γ(ω)
    CHECK(lindblad_gamma(s, -w) ==
          doctest::Approx(std::exp(-5.0 * w) * lindblad_gamma(s, w)).epsilon(1e-13));
    // outside the cutoff support
    CHECK(lindblad_gamma(s, 11.0) == 0.0);

    // ω = 0: Ohmic finite β → 2πη/β
    CHECK(lindblad_gamma(s, 0.0) == doctest::Approx(2.0 * kPi * 0.01 / 5.0).epsilon(1e-13));
    // super-Ohmic → 0
    auto sup = s;
    sup.s = 2.0;
    CHECK(lindblad_gamma(sup, 0.0) == 0.0);
    // sub-Ohmic finite β → divergent
    auto sub = s;
    sub.s = 0.5;
    CHECK(lindblad_gamma(sub, 0.0) == kInf);
    // zero temperature → 0 (absorption impossible, emission density vanishes at 0)
    auto cold = s;
    cold.beta = kInf;
    CHECK(lindblad_gamma(cold, 0.0) == 0.0);
    CHECK(lindblad_gamma(cold, -w) == 0.0);
    CHECK(lindblad_gamma(cold, w) == doctest::Approx(2.0 * kPi * 0.01 * w).epsilon(1e-13));

    // η = 0 short-circuits everything, including the sub-Ohmic divergence
    auto free = sub;
    free.eta = 0.0;
    CHECK(lindblad_gamma(free, 0.0) == 0.0);
}

TEST_CASE("Lamb shift against frozen quadrature references") {
    // Values frozen from 50-digit quadrature of (1/2π) PV ∫ γ(ω')/(ω - ω') dω'.
    BathSpec a = ohmic(1.0, 1.0, 10.0, 4);
    CHECK(lindblad_lamb_shift(a, 0.3) ==
          doctest::Approx(-1.1366056215388672236).epsilon(1e-8));
    BathSpec b = ohmic(0.01, 10.0, 5.0, 4);
    CHECK(lindblad_lamb_shift(b, 2.0) ==
          doctest::Approx(-0.12703417049008320241).epsilon(1e-8));
    BathSpec c = ohmic(0.02, 10.0, 2.0, 4);
    c.s = 0.5;
    CHECK(lindblad_lamb_shift(c, 1.5) ==
          doctest::Approx(-0.26219595965311872972).epsilon(1e-8));
}

TEST_CASE("Lamb shift zero-temperature closed forms") {
    // β = ∞: support is [0, ω_c] only.  s = 1:  S(ω) = η[-ω_c + ω ln(ω/|ω-ω_c|)].
    BathSpec s = ohmic(0.05, 10.0, kInf, 4);
    for (double w : {0.5, 2.0, 8.0, 15.0}) {
        CAPTURE(w);
        const double expect = 0.05 * (-10.0 + w * std::log(w / std::abs(w - 10.0)));
        CHECK(std::abs(lindblad_lamb_shift(s, w) - expect) < 1e-8);
    }
    // s = 2:  S(ω) = (η/ω_c)[-ω_c ω - ω_c²/2 + ω² ln(ω/|ω-ω_c|)]
    s.s = 2.0;
    for (double w : {1.0, 6.0}) {
        CAPTURE(w);
        const double expect =
            0.05 / 10.0 * (-10.0 * w - 50.0 + w * w * std::log(w / std::abs(w - 10.0)));
        CHECK(std::abs(lindblad_lamb_shift(s, w) - expect) < 1e-8);
    }
    // negative ω at β = ∞: S(ω) = (1/2π)∫_0^{ω_c} γ/(ω - ω') is finite and negative
    CHECK(lindblad_lamb_shift(s, -2.0) < 0.0);
}

TEST_CASE("Lamb shift edge and trivial cases") {
    BathSpec s = ohmic(0.05, 10.0, kInf, 4);
    CHECK_THROWS_AS(lindblad_lamb_shift(s, 10.0), domain_error);  // log-divergent at the cutoff
    auto free = s;
    free.eta = 0.0;
    CHECK(lindblad_lamb_shift(free, 3.0) == 0.0);
}

TEST_CASE("bath correlation time is the thermal scale") {
    BathSpec s = ohmic(0.1, 10.0, 4.0, 4);
    CHECK(bath_correlation_time(s) == doctest::Approx(4.0 / kPi).epsilon(1e-15));
}

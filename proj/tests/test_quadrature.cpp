#include <doctest.h>

#include <cmath>

#include "qbath/quadrature.hpp"
#include "qbath/types.hpp"

using namespace qbath;

TEST_CASE("smooth integrands to near machine accuracy") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-13, 0.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, kPi, 1e-13, 0.0) ==
          doctest::Approx(2.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 30.0, 1e-13, 1e-13) ==
          doctest::Approx(1.0 - std::exp(-30.0)).epsilon(1e-12));
}

TEST_CASE("oscillatory integrand") {
    const double v =
        integrate([](double x) { return std::sin(x) * std::sin(x); }, 0.0, 40.0 * kPi, 1e-12, 1e-12);
    CHECK(v == doctest::Approx(20.0 * kPi).epsilon(1e-11));
}

TEST_CASE("integrable endpoint singularity x^{-1/2}") {
    const double v = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-12, 0.0);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("non-integrable singularity exhausts the subdivision limit") {
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10, 0.0),
                    numerics_error);
}

TEST_CASE("principal value: constant numerator is the pure log") {
    const double v = principal_value([](double) { return 1.0; }, 0.0, 5.0, 2.0, 1e-12);
    CHECK(v == doctest::Approx(std::log(2.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("principal value: polynomial numerator, analytic reference") {
    // ∫_0^3 u²/(1-u) du = -7.5 - ln 2  (subtracted part integrates -(u+1))
    const double v = principal_value([](double u) { return u * u; }, 0.0, 3.0, 1.0, 1e-12);
    CHECK(v == doctest::Approx(-7.5 - std::log(2.0)).epsilon(1e-11));
}

TEST_CASE("principal value: antisymmetric window cancels") {
    const double v = principal_value([](double u) { return std::exp(u - 1.0); }, 0.5, 1.5, 1.0, 1e-12);
    // ∫_{-1/2}^{1/2} e^x/(-x) dx = -2 Shi(1/2); Shi(1/2) = Σ (1/2)^{2k+1}/((2k+1)(2k+1)!)
    double shi = 0.0, term = 0.5;
    for (int k = 0; k <= 10; ++k) {
        const int n = 2 * k + 1;
        shi += term / n;
        term *= 0.25 / ((n + 1.0) * (n + 2.0));
    }
    CHECK(v == doctest::Approx(-2.0 * shi).epsilon(1e-11));
}

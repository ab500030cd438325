#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "qbath/analysis.hpp"
#include "qbath/types.hpp"

using namespace qbath;

namespace {

std::vector<double> grid(double t0, double t1, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i)
        t[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    return t;
}

}  // namespace

TEST_CASE("damped cosine: exact parameter recovery from clean samples") {
    const double A = 0.8, Om = 2.3, mu = 0.4, ga = 0.12;
    const auto t = grid(0.0, 20.0, 400);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        y[i] = A * std::cos(Om * t[i] + mu) * std::exp(-ga * t[i]);
    const FitResult fit = fit_damped_cosine(t, y);
    REQUIRE(fit.converged);
    REQUIRE(fit.params.size() == 4);
    CHECK(fit.params[0] == doctest::Approx(A).epsilon(1e-6));
    CHECK(fit.params[1] == doctest::Approx(Om).epsilon(1e-6));
    CHECK(fit.params[2] == doctest::Approx(mu).epsilon(1e-6));
    CHECK(fit.params[3] == doctest::Approx(ga).epsilon(1e-6));
    CHECK(fit.residual_norm < 1e-10);
    CHECK(fit.covariance.size() == 16);
    CHECK(fit.window[0] == t.front());
    CHECK(fit.window[1] == t.back());
}

TEST_CASE("damped cosine: undamped signal fits with gamma = 0") {
    const auto t = grid(0.0, 30.0, 300);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = 0.5 * std::cos(1.7 * t[i] - 0.9);
    const FitResult fit = fit_damped_cosine(t, y);
    REQUIRE(fit.converged);
    CHECK(fit.params[0] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(fit.params[1] == doctest::Approx(1.7).epsilon(1e-8));
    CHECK(fit.params[2] == doctest::Approx(-0.9).epsilon(1e-6));
    CHECK(std::abs(fit.params[3]) < 1e-8);
}

TEST_CASE("damped cosine: canonical sign and phase conventions") {
    // A negative amplitude is absorbed as a π phase shift; the reported A is
    // positive and μ lies in (-π, π].
    const auto t = grid(0.0, 25.0, 300);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        y[i] = -0.6 * std::cos(1.3 * t[i] + 0.2) * std::exp(-0.05 * t[i]);
    const FitResult fit = fit_damped_cosine(t, y);
    REQUIRE(fit.converged);
    CHECK(fit.params[0] == doctest::Approx(0.6).epsilon(1e-6));
    CHECK(fit.params[1] == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(fit.params[0] > 0.0);
    CHECK(fit.params[1] > 0.0);
    CHECK(fit.params[2] > -kPi);
    CHECK(fit.params[2] <= kPi);
    // cos(x + 0.2 + π) = -cos(x + 0.2): expect μ = 0.2 + π - 2π = 0.2 - π
    CHECK(fit.params[2] == doctest::Approx(0.2 - kPi).epsilon(1e-5));
}

TEST_CASE("damped cosine: offgrid start time does not bias the fit") {
    const double A = 1.1, Om = 3.7, mu = -1.2, ga = 0.2;
    const auto t = grid(13.4, 33.4, 500);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        y[i] = A * std::cos(Om * t[i] + mu) * std::exp(-ga * t[i]);
    const FitResult fit = fit_damped_cosine(t, y);
    REQUIRE(fit.converged);
    CHECK(fit.params[0] == doctest::Approx(A).epsilon(1e-6));
    CHECK(fit.params[1] == doctest::Approx(Om).epsilon(1e-6));
    CHECK(std::abs(std::remainder(fit.params[2] - mu, 2.0 * kPi)) < 1e-5);
    CHECK(fit.params[3] == doctest::Approx(ga).epsilon(1e-6));
}

TEST_CASE("damped cosine: refuses series too short to constrain a frequency") {
    // fewer than 20 samples
    {
        const auto t = grid(0.0, 20.0, 10);
        std::vector<double> y(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) y[i] = std::cos(2.0 * t[i]);
        CHECK_THROWS_AS(fit_damped_cosine(t, y), domain_error);
    }
    // fewer than two periods in the window
    {
        const auto t = grid(0.0, 1.0, 100);
        std::vector<double> y(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) y[i] = std::cos(2.0 * t[i]);
        CHECK_THROWS_AS(fit_damped_cosine(t, y), domain_error);
    }
    // mismatched lengths / non-monotone grid
    {
        std::vector<double> t = {0.0, 1.0, 2.0};
        std::vector<double> y = {1.0, 2.0};
        CHECK_THROWS_AS(fit_damped_cosine(t, y), domain_error);
        std::vector<double> t2 = {0.0, 2.0, 1.0};
        std::vector<double> y2 = {1.0, 2.0, 3.0};
        CHECK_THROWS_AS(fit_damped_cosine(t2, y2), domain_error);
    }
}

TEST_CASE("saturation fit: exact recovery and window semantics") {
    const double A = 0.3, B = 0.6, tau = 4.0;
    const auto t = grid(0.0, 30.0, 200);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = A + B * std::exp(-t[i] / tau);
    const FitResult fit = fit_exponential_saturation(t, y, t.front());
    REQUIRE(fit.converged);
    REQUIRE(fit.params.size() == 3);
    CHECK(fit.params[0] == doctest::Approx(A).epsilon(1e-8));
    CHECK(fit.params[1] == doctest::Approx(B).epsilon(1e-8));
    CHECK(fit.params[2] == doctest::Approx(tau).epsilon(1e-8));

    // Restricting to t >= 5: same A and τ; the reported B stays the t = 0
    // coefficient of the model, so it is unchanged too.
    const FitResult late = fit_exponential_saturation(t, y, 5.0);
    REQUIRE(late.converged);
    CHECK(late.window[0] >= 5.0);
    CHECK(late.params[0] == doctest::Approx(A).epsilon(1e-7));
    CHECK(late.params[1] == doctest::Approx(B).epsilon(1e-6));
    CHECK(late.params[2] == doctest::Approx(tau).epsilon(1e-7));

    // A window leaving fewer than 4 samples is refused.
    CHECK_THROWS_AS(fit_exponential_saturation(t, y, t.back() - 0.2), domain_error);
}

TEST_CASE("saturation fit: decaying-toward-value data with negative B") {
    const auto t = grid(1.0, 25.0, 150);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = 0.9 - 0.4 * std::exp(-t[i] / 3.0);
    const FitResult fit = fit_exponential_saturation(t, y, 0.0);
    REQUIRE(fit.converged);
    CHECK(fit.params[0] == doctest::Approx(0.9).epsilon(1e-7));
    CHECK(fit.params[1] == doctest::Approx(-0.4).epsilon(1e-6));
    CHECK(fit.params[2] == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("relative error: identity, masking, and grid mismatch") {
    const std::vector<double> t = {0.0, 1.0, 2.0, 3.0};
    const std::vector<double> ref = {1.0, -2.0, 5e-4, 4.0};
    const std::vector<double> sim = {1.1, -2.2, 7.0, 4.0};
    const auto err = relative_error(t, sim, t, ref);
    REQUIRE(err.size() == 4);
    CHECK(err[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(err[1] == doctest::Approx(0.1).epsilon(1e-12));  // (-2.2 - -2)/-2 = +0.1
    CHECK(std::isnan(err[2]));  // |ref| < 1e-3 → masked
    CHECK(err[3] == 0.0);
    CHECK(max_abs_unmasked(err) == doctest::Approx(0.1).epsilon(1e-12));

    const std::vector<double> t_shift = {0.0, 1.0, 2.0, 3.5};
    CHECK_THROWS_AS(relative_error(t_shift, sim, t, ref), domain_error);
    const std::vector<double> t_short = {0.0, 1.0};
    CHECK_THROWS_AS(relative_error(t_short, {1.0, 2.0}, t, ref), domain_error);
}

TEST_CASE("max_abs_unmasked: all-masked and empty inputs collapse to zero") {
    CHECK(max_abs_unmasked({}) == 0.0);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK(max_abs_unmasked({nan, nan}) == 0.0);
    CHECK(max_abs_unmasked({nan, -0.25, 0.125}) == doctest::Approx(0.25).epsilon(1e-15));
}

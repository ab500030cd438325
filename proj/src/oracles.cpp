#include "qbath/oracles.hpp"

#include <cmath>

#include "qbath/quadrature.hpp"
#include "qbath/special_functions.hpp"

namespace qbath {

namespace {

// coth(y) - 1 = 2 / (e^{2y} - 1), written through expm1 so large y underflows
// to zero instead of cancelling.
double coth_minus_one(double y) { return 2.0 / std::expm1(2.0 * y); }

}  // namespace

double decoherence_k_discrete(const DiscreteBath& bath, double t) {
    // K = 8 sum_k (g_k^2 / eta) sin^2(w_k t / 2) coth(beta w_k / 2) / w_k^2.
    // The eta-free weight g_k^2/eta = w_c^2 k^s / M^{s+1} is rebuilt from the
    // spec so eta = 0 baths evaluate cleanly; divided by w_k^2 it collapses to
    // k^{s-2} M^{1-s}.
    const auto& sp = bath.spec;
    const int m = sp.n_modes;
    const double s = sp.s;
    double acc = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double wk = static_cast<double>(k) * sp.omega_c / m;
        const double sn = std::sin(0.5 * wk * t);
        double term = std::pow(static_cast<double>(k), s - 2.0) *
                      std::pow(static_cast<double>(m), 1.0 - s) * sn * sn;
        if (sp.beta != kInf) {
            term *= 1.0 + coth_minus_one(0.5 * sp.beta * wk);
        }
        acc += term;
    }
    return 8.0 * acc;
}

DecoherenceEval decoherence_finite_T(const BathSpec& spec, double t) {
    validate(spec);
    if (t < 0.0) throw domain_error("decoherence_finite_T: t must be >= 0");
    const double x = spec.omega_c * t;
    const double s = spec.s;
    if (x == 0.0) return {0.0, 0.0, 0.0};

    // K_inf = 8 int_0^1 u^{s-2} sin^2(ux/2) du.  Near u = 0 the sin^2 factor
    // tames the u^{s-2} weight for every s > 0 and Gauss-Kronrod nodes never
    // touch the endpoint.
    auto f_inf = [s, x](double u) {
        const double sn = std::sin(0.5 * u * x);
        return std::pow(u, s - 2.0) * sn * sn;
    };
    const double k_inf = 8.0 * integrate(f_inf, 0.0, 1.0, 1e-14, 1e-9);

    double delta_k = 0.0;
    if (spec.beta != kInf) {
        const double b = spec.beta * spec.omega_c;
        // Thermal excess uses coth - 1 directly so K_inf and dK never cancel:
        // 8 int_0^1 u^{s-2} sin^2(ux/2) * 2/expm1(bu) du, integrable for s > 0.
        auto f_th = [s, x, b](double u) {
            const double sn = std::sin(0.5 * u * x);
            return std::pow(u, s - 2.0) * sn * sn * (2.0 / std::expm1(b * u));
        };
        delta_k = 8.0 * integrate(f_th, 0.0, 1.0, 1e-14, 1e-9);
    }
    return {k_inf + delta_k, k_inf, delta_k};
}

double decoherence_closed_form(double s, double omega_c, double t) {
    if (omega_c <= 0.0) throw domain_error("decoherence_closed_form: omega_c must be > 0");
    if (t < 0.0) throw domain_error("decoherence_closed_form: t must be >= 0");
    const double x = omega_c * t;
    if (std::abs(s - 0.5) < 1e-12) {
        if (x == 0.0) return 0.0;
        return 8.0 * (std::cos(x) - 1.0 +
                      std::sqrt(2.0 * kPi * x) * fresnel_s(std::sqrt(2.0 * x / kPi)));
    }
    if (std::abs(s - 1.0) < 1e-12) {
        if (x == 0.0) return 0.0;
        return 4.0 * (kEulerGamma - cosine_integral(x) + std::log(x));
    }
    if (std::abs(s - 2.0) < 1e-12) {
        if (x == 0.0) return 0.0;
        return 4.0 - 4.0 * std::sin(x) / x;
    }
    throw domain_error("decoherence_closed_form: unsupported exponent s (need 1/2, 1, or 2)");
}

double exact_sigma_x(const DiscreteBath& bath, double eps, double t) {
    const double k = decoherence_k_discrete(bath, t);
    return std::cos(2.0 * eps * t) * std::exp(-bath.spec.eta * k);
}

double exact_sigma_x(const BathSpec& spec, double eps, double t) {
    const double k = decoherence_finite_T(spec, t).k;
    return std::cos(2.0 * eps * t) * std::exp(-spec.eta * k);
}

double quality_factor(double eta) {
    if (!(eta > 0.0 && eta < 0.5)) {
        throw domain_error("quality_factor: eta must lie in (0, 1/2)");
    }
    return 1.0 / std::tan(kPi * eta / (1.0 - 2.0 * eta));
}

double renormalized_gap(double gamma0, double omega_c, double eta) {
    if (gamma0 <= 0.0) throw domain_error("renormalized_gap: gamma0 must be > 0");
    if (omega_c <= 0.0) throw domain_error("renormalized_gap: omega_c must be > 0");
    if (!(eta >= 0.0 && eta < 0.5)) {
        throw domain_error("renormalized_gap: eta must lie in [0, 1/2)");
    }
    return gamma0 * std::pow(2.0 * gamma0 / omega_c, 2.0 * eta / (1.0 - 2.0 * eta));
}

double niba_asymptote(double eps, double beta) {
    if (beta == kInf) {
        return (eps > 0.0) ? 1.0 : (eps < 0.0 ? -1.0 : 0.0);
    }
    if (beta <= 0.0) throw domain_error("niba_asymptote: beta must be > 0");
    return std::tanh(0.5 * beta * eps);
}

}  // namespace qbath

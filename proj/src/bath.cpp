#include "qbath/bath.hpp"

#include <cmath>
#include <string>

#include "qbath/quadrature.hpp"

namespace qbath {

void validate(const BathSpec& spec) {
    if (!(spec.s > 0.0)) throw domain_error("bath: spectral exponent s must be > 0");
    if (!(spec.eta >= 0.0)) throw domain_error("bath: coupling eta must be >= 0");
    if (!(spec.omega_c > 0.0) || !std::isfinite(spec.omega_c))
        throw domain_error("bath: cutoff omega_c must be finite and > 0");
    if (!(spec.beta > 0.0)) throw domain_error("bath: inverse temperature beta must be > 0");
    if (spec.n_modes < 1) throw domain_error("bath: n_modes must be >= 1");
    if (spec.n_ph < 0) throw domain_error("bath: n_ph must be >= 0");
}

double spectral_density(const BathSpec& spec, double omega) {
    validate(spec);
    if (omega <= 0.0 || omega > spec.omega_c) return 0.0;
    return spec.eta * std::pow(omega, spec.s) / std::pow(spec.omega_c, spec.s - 1.0);
}

DiscreteBath discretize(const BathSpec& spec) {
    validate(spec);
    DiscreteBath bath;
    bath.spec = spec;
    const int m = spec.n_modes;
    bath.omega.resize(m);
    bath.g.resize(m);
    for (int k = 1; k <= m; ++k) {
        bath.omega[k - 1] = spec.omega_c * k / m;
        bath.g[k - 1] = spec.omega_c *
                        std::sqrt(spec.eta * std::pow(k, spec.s) / std::pow(m, spec.s + 1.0));
    }
    return bath;
}

double lindblad_gamma(const BathSpec& spec, double omega) {
    validate(spec);
    if (spec.eta == 0.0) return 0.0;
    if (omega > 0.0) {
        const double j = spectral_density(spec, omega);
        if (std::isinf(spec.beta)) return 2.0 * M_PI * j;
        return 2.0 * M_PI * j / (-std::expm1(-spec.beta * omega));
    }
    if (omega < 0.0) {
        if (std::isinf(spec.beta)) return 0.0;
        return std::exp(spec.beta * omega) * lindblad_gamma(spec, -omega);
    }
    // omega == 0: limit of the ω → 0⁺ rate.
    if (std::isinf(spec.beta) || spec.s > 1.0) return 0.0;
    if (spec.s == 1.0) return 2.0 * M_PI * spec.eta / spec.beta;
    return kInf;  // sub-Ohmic at finite temperature: encoded divergence
}

double lindblad_lamb_shift(const BathSpec& spec, double omega) {
    validate(spec);
    if (spec.eta == 0.0) return 0.0;
    const double wc = spec.omega_c;
    const double abs_tol = 1e-10 * spec.eta * wc;
    const double edge = 1e-12 * wc;
    if (std::abs(std::abs(omega) - wc) < edge)
        throw domain_error("lamb shift: log-divergent at the cutoff edge |omega| = omega_c");
    if (spec.s < 1.0 && !std::isinf(spec.beta) && std::abs(omega) < edge)
        throw domain_error("lamb shift: gamma diverges at omega = 0 for sub-Ohmic finite-T baths");

    auto g = [&](double u) { return lindblad_gamma(spec, u); };
    const double lo = std::isinf(spec.beta) ? 0.0 : -wc;  // support of γ

    double val = 0.0;
    if (omega <= lo || omega >= wc) {
        // Pole outside the support: ordinary integrals, split at 0 where γ can kink
        // (or integrably diverge for s < 1).
        auto f = [&](double u) { return g(u) / (omega - u); };
        if (lo < 0.0) val = integrate(f, lo, 0.0, 0.5 * abs_tol, 0.0) +
                            integrate(f, 0.0, wc, 0.5 * abs_tol, 0.0);
        else
            val = integrate(f, 0.0, wc, abs_tol, 0.0);
    } else if (omega > 0.0) {
        auto f = [&](double u) { return g(u) / (omega - u); };
        if (lo < 0.0) val = integrate(f, lo, 0.0, 0.5 * abs_tol, 0.0);
        val += principal_value(g, 0.0, wc, omega, 0.5 * abs_tol);
    } else if (omega < 0.0) {
        auto f = [&](double u) { return g(u) / (omega - u); };
        val = principal_value(g, lo, 0.0, omega, 0.5 * abs_tol) +
              integrate(f, 0.0, wc, 0.5 * abs_tol, 0.0);
    } else {
        // omega == 0 with γ(0) finite (s ≥ 1 or zero temperature).
        if (std::isinf(spec.beta)) {
            auto f = [&](double u) { return -g(u) / u; };  // integrable: γ ~ u^s
            val = integrate(f, 0.0, wc, abs_tol, 0.0);
        } else {
            val = principal_value(g, lo, wc, 0.0, abs_tol);
        }
    }
    return val / (2.0 * M_PI);
}

double bath_correlation_time(const BathSpec& spec) {
    validate(spec);
    return spec.beta / M_PI;
}

}  // namespace qbath

#include "qbath/special_functions.hpp"

#include <cmath>
#include <complex>

#include "qbath/types.hpp"

namespace qbath {

namespace {

constexpr double kCiSwitch = 4.0;
constexpr double kFresnelSwitch = 1.5;
constexpr int kMaxIter = 200;

/// E1(z) by the modified Lentz continued fraction
///   E1(z) = e^{-z} / (z + 1 - 1^2/(z + 3 - 2^2/(z + 5 - ...))),  Re z >= 0, z != 0.
std::complex<double> exp_int_e1_cf(std::complex<double> z) {
    const double tiny = 1e-290;
    std::complex<double> b = z + 1.0;
    std::complex<double> c = 1.0 / tiny;
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const std::complex<double> del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return std::exp(-z) * h;
    }
    throw numerics_error("E1 continued fraction did not converge");
}

/// erfc(z) * sqrt(pi) * exp(z^2) by the Lentz continued fraction
///   1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))),  Re z > 0.
std::complex<double> erfc_scaled_cf(std::complex<double> z) {
    const double tiny = 1e-290;
    std::complex<double> b = z;
    std::complex<double> c = 1.0 / tiny;
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double a = 0.5 * i;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const std::complex<double> del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return h;
    }
    throw numerics_error("erfc continued fraction did not converge");
}

}  // namespace

double cosine_integral(double x) {
    if (!(x > 0.0)) throw domain_error("cosine_integral: requires x > 0");
    if (x <= kCiSwitch) {
        // Ci(x) = gamma + ln x + sum_k (-x^2)^k / (2k (2k)!)
        const double x2 = x * x;
        double term = 1.0;  // (-x^2)^k / (2k)!
        double sum = 0.0;
        for (int k = 1; k <= kMaxIter; ++k) {
            term *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
            const double add = term / (2.0 * k);
            sum += add;
            if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
        }
        return kEulerGamma + std::log(x) + sum;
    }
    // Ci(x) = -Re E1(ix)
    return -exp_int_e1_cf({0.0, x}).real();
}

double fresnel_s(double x) {
    if (x < 0.0) return -fresnel_s(-x);
    if (x == 0.0) return 0.0;
    if (x <= kFresnelSwitch) {
        // S(x) = sum_k (-1)^k (pi/2)^(2k+1) x^(4k+3) / ((2k+1)! (4k+3))
        const double r = -(M_PI / 2.0) * (M_PI / 2.0) * x * x * x * x;
        double u = (M_PI / 2.0) * x * x * x;  // k = 0 numerator
        double sum = u / 3.0;
        for (int k = 1; k <= kMaxIter; ++k) {
            u *= r / ((2.0 * k) * (2.0 * k + 1.0));
            const double add = u / (4.0 * k + 3.0);
            sum += add;
            if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
        }
        return sum;
    }
    // C(x) + i S(x) = (1+i)/2 * erf(z), z = sqrt(pi) (1-i) x / 2;
    // e^{-z^2} = e^{i pi x^2/2} has unit modulus, so nothing overflows.
    const double half_sqrt_pi = 0.5 * std::sqrt(M_PI);
    const std::complex<double> z{half_sqrt_pi * x, -half_sqrt_pi * x};
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, M_PI * x * x / 2.0));
    const std::complex<double> erfc_z = phase * erfc_scaled_cf(z) / std::sqrt(M_PI);
    const std::complex<double> cs = std::complex<double>(0.5, 0.5) * (1.0 - erfc_z);
    return cs.imag();
}

}  // namespace qbath

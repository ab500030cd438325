#include "qbath/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>

namespace qbath {

namespace {

// model(t, p, f, J_row): fill the predicted value and the p-gradient at one sample.
using ModelFn = std::function<void(double, const std::vector<double>&, double&, double*)>;

constexpr int kMaxIter = 500;
constexpr double kParamTol = 1e-10;

FitResult levenberg(const std::vector<double>& t, const std::vector<double>& y,
                    std::vector<double> p0, const ModelFn& model) {
    const int n = static_cast<int>(t.size());
    const int np = static_cast<int>(p0.size());
    Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(p0.data(), np);
    Eigen::VectorXd r(n);
    Eigen::MatrixXd jac(n, np);

    auto evaluate = [&](const Eigen::VectorXd& q, Eigen::VectorXd& res, Eigen::MatrixXd* jm) {
        std::vector<double> qv(q.data(), q.data() + np);
        std::vector<double> row(np);
        for (int i = 0; i < n; ++i) {
            double f = 0.0;
            model(t[i], qv, f, jm ? row.data() : nullptr);
            res[i] = y[i] - f;
            if (jm)
                for (int j = 0; j < np; ++j) (*jm)(i, j) = row[j];
        }
    };

    evaluate(p, r, &jac);
    double chi2 = r.squaredNorm();
    double lambda = 1e-3;

    FitResult out;
    out.converged = chi2 <= 1e-28 * n;  // already an exact fit
    int iter = 0;
    while (!out.converged && iter < kMaxIter) {
        ++iter;
        Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::VectorXd jtr = jac.transpose() * r;
        bool stepped = false;
        for (int attempt = 0; attempt < 30 && !stepped; ++attempt) {
            Eigen::MatrixXd a = jtj;
            for (int j = 0; j < np; ++j)
                a(j, j) += lambda * std::max(jtj(j, j), 1e-300);
            Eigen::VectorXd delta = a.ldlt().solve(jtr);
            if (!delta.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            Eigen::VectorXd p_try = p + delta;
            Eigen::VectorXd r_try(n);
            evaluate(p_try, r_try, nullptr);
            const double chi2_try = r_try.squaredNorm();
            if (chi2_try <= chi2) {
                double rel = 0.0;
                for (int j = 0; j < np; ++j)
                    rel = std::max(rel, std::abs(delta[j]) / (std::abs(p[j]) + 1e-12));
                p = p_try;
                chi2 = chi2_try;
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                if (rel < kParamTol) out.converged = true;
            } else {
                lambda *= 3.0;
            }
        }
        if (!stepped) break;  // damping saturated: accept the current point
        evaluate(p, r, &jac);
    }

    out.iterations = iter;
    out.residual_norm = std::sqrt(chi2);
    out.params.assign(p.data(), p.data() + np);
    // Linearized covariance estimate around the optimum.
    Eigen::MatrixXd jtj = jac.transpose() * jac;
    const double dof = std::max(1, n - np);
    const double sigma2 = chi2 / dof;
    Eigen::MatrixXd cov =
        sigma2 * jtj.ldlt().solve(Eigen::MatrixXd::Identity(np, np));
    out.covariance.assign(cov.data(), cov.data() + np * np);
    return out;
}

void check_series(const std::vector<double>& t, const std::vector<double>& y,
                  std::size_t min_samples, const char* what) {
    if (t.size() != y.size())
        throw domain_error(std::string(what) + ": time and value arrays differ in length");
    if (t.size() < min_samples)
        throw domain_error(std::string(what) + ": need at least " +
                           std::to_string(min_samples) + " samples");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1]))
            throw domain_error(std::string(what) + ": time grid must be strictly increasing");
}

}  // namespace

FitResult fit_damped_cosine(const std::vector<double>& t, const std::vector<double>& y) {
    check_series(t, y, 20, "fit_damped_cosine");
    const int n = static_cast<int>(t.size());
    const double span = t.back() - t.front();

    // Frequency guess: scan the discrete spectrum on the natural bin grid and
    // keep the strongest line.  The sum against e^{-iΩt} isolates the
    // positive-frequency half of the cosine, so the bin amplitude also gives
    // amplitude and phase guesses.
    const int n_bins = 4 * n;  // oversampled to keep the peak within half a bin
    double best_pow = -1.0, omega0 = 0.0;
    std::complex<double> best_c;
    for (int j = 1; j <= n_bins / 2; ++j) {
        const double om = 2.0 * kPi * j / (4.0 * span);
        std::complex<double> c = 0.0;
        for (int i = 0; i < n; ++i)
            c += y[i] * std::exp(std::complex<double>(0.0, -om * (t[i] - t.front())));
        const double pw = std::norm(c);
        if (pw > best_pow) {
            best_pow = pw;
            omega0 = om;
            best_c = c;
        }
    }
    if (omega0 * span < 2.0 * (2.0 * kPi))
        throw domain_error("fit_damped_cosine: window spans fewer than two oscillation periods");

    // Envelope decay guess from the RMS ratio of the two half-windows.
    const int half = n / 2;
    double ss1 = 0.0, ss2 = 0.0;
    for (int i = 0; i < half; ++i) ss1 += y[i] * y[i];
    for (int i = half; i < n; ++i) ss2 += y[i] * y[i];
    double gamma0 = 0.0;
    if (ss1 > 0.0 && ss2 > 0.0) {
        const double ratio = std::sqrt(ss1 / half) / std::sqrt(ss2 / (n - half));
        if (ratio > 1.0) gamma0 = 2.0 * std::log(ratio) / span;
    }

    std::complex<double> c = best_c * (2.0 / static_cast<double>(n));
    double amp0 = std::abs(c);
    if (amp0 == 0.0) amp0 = 1e-12;
    // The scan used shifted times t - t_front, so arg(c) ≈ μ + Ω t_front.
    double mu0 = std::arg(c) - omega0 * t.front();

    auto model = [](double tt, const std::vector<double>& p, double& f, double* g) {
        const double a = p[0], om = p[1], mu = p[2], ga = p[3];
        const double env = std::exp(-ga * tt);
        const double cph = std::cos(om * tt + mu);
        const double sph = std::sin(om * tt + mu);
        f = a * cph * env;
        if (g) {
            g[0] = cph * env;
            g[1] = -a * tt * sph * env;
            g[2] = -a * sph * env;
            g[3] = -a * tt * cph * env;
        }
    };

    FitResult out = levenberg(t, y, {amp0, omega0, mu0, gamma0}, model);
    // Canonicalize: positive amplitude, phase in (-π, π].
    if (out.params[0] < 0.0) {
        out.params[0] = -out.params[0];
        out.params[2] += kPi;
    }
    if (out.params[1] < 0.0) {  // cos is even in (Ω, μ) jointly
        out.params[1] = -out.params[1];
        out.params[2] = -out.params[2];
    }
    out.params[2] = std::remainder(out.params[2], 2.0 * kPi);
    out.window = {t.front(), t.back()};
    return out;
}

FitResult fit_exponential_saturation(const std::vector<double>& t,
                                     const std::vector<double>& y, double window_start) {
    check_series(t, y, 4, "fit_exponential_saturation");
    std::vector<double> tw, yw;
    tw.reserve(t.size());
    yw.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= window_start) {
            tw.push_back(t[i]);
            yw.push_back(y[i]);
        }
    if (tw.size() < 4)
        throw domain_error("fit_exponential_saturation: fewer than 4 samples after window start");

    const double a0 = yw.back();
    const double b0 = yw.front() - yw.back();
    double tau0 = (tw.back() - tw.front()) / 3.0;
    if (tau0 <= 0.0) tau0 = 1.0;

    auto model = [](double tt, const std::vector<double>& p, double& f, double* g) {
        const double a = p[0], b = p[1], tau = p[2];
        const double e = std::exp(-tt / tau);
        f = a + b * e;
        if (g) {
            g[0] = 1.0;
            g[1] = e;
            g[2] = b * tt / (tau * tau) * e;
        }
    };

    FitResult out = levenberg(tw, yw, {a0, b0, tau0}, model);
    out.window = {tw.front(), tw.back()};
    return out;
}

std::vector<double> relative_error(const std::vector<double>& t_sim,
                                   const std::vector<double>& y_sim,
                                   const std::vector<double>& t_ref,
                                   const std::vector<double>& y_ref) {
    if (t_sim.size() != y_sim.size() || t_ref.size() != y_ref.size())
        throw domain_error("relative_error: time and value arrays differ in length");
    if (t_sim.size() != t_ref.size())
        throw domain_error("relative_error: time grids differ in length");
    std::vector<double> out(t_sim.size());
    for (std::size_t i = 0; i < t_sim.size(); ++i) {
        const double scale = std::max(1.0, std::abs(t_sim[i]));
        if (std::abs(t_sim[i] - t_ref[i]) > 1e-12 * scale)
            throw domain_error("relative_error: time grids do not coincide");
        out[i] = std::abs(y_ref[i]) < 1e-3
                     ? std::numeric_limits<double>::quiet_NaN()
                     : (y_sim[i] - y_ref[i]) / y_ref[i];
    }
    return out;
}

double max_abs_unmasked(const std::vector<double>& x) {
    double best = 0.0;
    for (double v : x)
        if (!std::isnan(v)) best = std::max(best, std::abs(v));
    return best;
}

}  // namespace qbath

#include "qbath/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qbath {

namespace {

// Gauss-Kronrod 7/15 pair on [-1, 1]: Kronrod abscissae (odd indices are the
// embedded Gauss points), Kronrod weights, Gauss weights.
constexpr double xk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
    double a, b, value, err;
    int depth;
};

Panel gk15(const std::function<double(double)>& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * xk[i]);
        fv[14 - i] = f(c + h * xk[i]);
    }
    fv[7] = f(c);
    double resk = wk[7] * fv[7];
    double resg = wg[3] * fv[7];
    for (int i = 0; i < 7; ++i) resk += wk[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i) resg += wg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    return {a, b, resk * h, std::abs((resk - resg) * h), depth};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    if (!(a < b)) return -integrate(f, b, a, abs_tol, rel_tol, max_depth);

    std::vector<Panel> panels;
    panels.push_back(gk15(f, a, b, 0));
    const double span = b - a;

    // Repeatedly split the panel with the worst error until the estimated total
    // error meets the tolerance.  Splitting is depth-limited, not count-limited,
    // so endpoint singularities refine geometrically toward the endpoint.
    for (;;) {
        double total = 0.0, err = 0.0, frozen_err = 0.0;
        std::size_t worst = 0;
        double worst_err = -1.0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].value;
            err += panels[i].err;
            const bool splittable =
                panels[i].depth < max_depth &&
                panels[i].b - panels[i].a > 64 * std::numeric_limits<double>::min();
            if (!splittable)
                frozen_err += panels[i].err;
            else if (panels[i].err > worst_err) {
                worst_err = panels[i].err;
                worst = i;
            }
        }
        const double tol = std::max(abs_tol, rel_tol * std::abs(total));
        if (err <= tol) return total;
        // Panels at the depth/width floor can no longer improve; once their
        // error alone exceeds the tolerance, further splitting elsewhere is
        // futile, so fail now instead of grinding through the panel budget.
        if (worst_err < 0.0 || frozen_err > tol)
            throw numerics_error("adaptive quadrature: subdivision limit reached, error " +
                                 std::to_string(err) + " > tolerance " + std::to_string(tol));
        const Panel p = panels[worst];
        const double m = 0.5 * (p.a + p.b);
        panels[worst] = gk15(f, p.a, m, p.depth + 1);
        panels.push_back(gk15(f, m, p.b, p.depth + 1));
        if (panels.size() > 20000)
            throw numerics_error("adaptive quadrature: panel budget exhausted over [" +
                                 std::to_string(a) + ", " + std::to_string(b) + "], span " +
                                 std::to_string(span));
    }
}

double principal_value(const std::function<double(double)>& g, double a, double b, double w,
                       double abs_tol, double rel_tol) {
    if (!(a < w && w < b))
        throw domain_error("principal value: pole must lie strictly inside the interval");
    const double gw = g(w);
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(w), 1.0});
    const double h_fd = 1e-6 * scale;
    auto reg = [&](double u) {
        const double d = w - u;
        if (std::abs(d) < 1e-13 * scale)  // removable point: limit is -g'(w)
            return -(g(w + h_fd) - g(w - h_fd)) / (2.0 * h_fd);
        return (g(u) - gw) / d;
    };
    // Split at the (removable) point so it sits at panel endpoints.
    const double left = integrate(reg, a, w, 0.5 * abs_tol, rel_tol);
    const double right = integrate(reg, w, b, 0.5 * abs_tol, rel_tol);
    return left + right + gw * std::log((w - a) / (b - w));
}

}  // namespace qbath

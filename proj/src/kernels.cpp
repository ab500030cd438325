#include "qbath/kernels.hpp"

#include <cstdlib>

namespace qbath::kern {

namespace {

void caxpy_s(std::size_t n, cplx a, const cplx* x, cplx* y) {
    const double ar = a.real(), ai = a.imag();
    const double* xs = reinterpret_cast<const double*>(x);
    double* ys = reinterpret_cast<double*>(y);
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = xs[2 * i], xi = xs[2 * i + 1];
        ys[2 * i] += ar * xr - ai * xi;
        ys[2 * i + 1] += ar * xi + ai * xr;
    }
}

cplx cdotc_s(std::size_t n, const cplx* x, const cplx* y) {
    // One partial per block, combined in block order: deterministic for fixed n.
    double re = 0.0, im = 0.0;
    for (std::size_t b = 0; b < n; b += kBlock) {
        const std::size_t e = b + kBlock < n ? b + kBlock : n;
        double pre = 0.0, pim = 0.0;
        for (std::size_t i = b; i < e; ++i) {
            const double xr = x[i].real(), xi = x[i].imag();
            const double yr = y[i].real(), yi = y[i].imag();
            pre += xr * yr + xi * yi;
            pim += xr * yi - xi * yr;
        }
        re += pre;
        im += pim;
    }
    return {re, im};
}

double cnrm2sq_s(std::size_t n, const cplx* x) {
    double acc = 0.0;
    for (std::size_t b = 0; b < n; b += kBlock) {
        const std::size_t e = b + kBlock < n ? b + kBlock : n;
        double p = 0.0;
        for (std::size_t i = b; i < e; ++i)
            p += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
        acc += p;
    }
    return acc;
}

void cscal_s(std::size_t n, cplx a, cplx* x) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        x[i] = {ar * xr - ai * xi, ar * xi + ai * xr};
    }
}

void cdotc_multi_s(std::size_t n, const cplx* const* v, std::size_t nv, const cplx* w,
                   cplx* out) {
    // Up to 4 vectors share each pass over w to keep it in cache.
    std::size_t j = 0;
    for (; j + 4 <= nv; j += 4) {
        const cplx *v0 = v[j], *v1 = v[j + 1], *v2 = v[j + 2], *v3 = v[j + 3];
        double r0 = 0, i0 = 0, r1 = 0, i1 = 0, r2 = 0, i2 = 0, r3 = 0, i3 = 0;
        for (std::size_t b = 0; b < n; b += kBlock) {
            const std::size_t e = b + kBlock < n ? b + kBlock : n;
            double p0r = 0, p0i = 0, p1r = 0, p1i = 0, p2r = 0, p2i = 0, p3r = 0, p3i = 0;
            for (std::size_t i = b; i < e; ++i) {
                const double wr = w[i].real(), wi = w[i].imag();
                p0r += v0[i].real() * wr + v0[i].imag() * wi;
                p0i += v0[i].real() * wi - v0[i].imag() * wr;
                p1r += v1[i].real() * wr + v1[i].imag() * wi;
                p1i += v1[i].real() * wi - v1[i].imag() * wr;
                p2r += v2[i].real() * wr + v2[i].imag() * wi;
                p2i += v2[i].real() * wi - v2[i].imag() * wr;
                p3r += v3[i].real() * wr + v3[i].imag() * wi;
                p3i += v3[i].real() * wi - v3[i].imag() * wr;
            }
            r0 += p0r; i0 += p0i; r1 += p1r; i1 += p1i;
            r2 += p2r; i2 += p2i; r3 += p3r; i3 += p3i;
        }
        out[j] = {r0, i0}; out[j + 1] = {r1, i1};
        out[j + 2] = {r2, i2}; out[j + 3] = {r3, i3};
    }
    for (; j < nv; ++j) out[j] = cdotc_s(n, v[j], w);
}

void caxpy_multi_s(std::size_t n, const cplx* const* v, const cplx* a, std::size_t nv,
                   cplx* w) {
    std::size_t j = 0;
    for (; j + 4 <= nv; j += 4) {
        const cplx *v0 = v[j], *v1 = v[j + 1], *v2 = v[j + 2], *v3 = v[j + 3];
        const cplx a0 = a[j], a1 = a[j + 1], a2 = a[j + 2], a3 = a[j + 3];
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc = w[i];
            acc -= a0 * v0[i];
            acc -= a1 * v1[i];
            acc -= a2 * v2[i];
            acc -= a3 * v3[i];
            w[i] = acc;
        }
    }
    for (; j < nv; ++j) caxpy_s(n, -a[j], v[j], w);
}

void qubit_local_s(std::size_t n_pat, const double* d, double gam, double eps, const cplx* x,
                   cplx* y) {
    for (std::size_t p = 0; p < n_pat; ++p) {
        const cplx xp = x[2 * p], xm = x[2 * p + 1];
        y[2 * p] = (d[p] - eps) * xp - gam * xm;
        y[2 * p + 1] = (d[p] + eps) * xm - gam * xp;
    }
}

const Ops scalar_table = {
    "scalar", caxpy_s, cdotc_s, cnrm2sq_s, cscal_s, cdotc_multi_s, caxpy_multi_s, qubit_local_s,
};

}  // namespace

const Ops& scalar_ops() { return scalar_table; }

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops& ops() {
    static const Ops& chosen = []() -> const Ops& {
        const char* force = std::getenv("QBATH_FORCE_SCALAR");
        if (force && force[0] == '1') return scalar_ops();
        return avx2_available() ? avx2_ops() : scalar_ops();
    }();
    return chosen;
}

}  // namespace qbath::kern

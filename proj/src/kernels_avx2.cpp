// AVX2+FMA variants of the complex vector kernels.  Layout is interleaved
// (re, im) doubles, so one 256-bit register holds two complex values.  Every
// kernel finishes with a scalar remainder loop; reductions keep the same
// fixed-block structure as the scalar reference so each implementation is
// deterministic on its own.

#include "qbath/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace qbath::kern {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// (a*b -/+ c) with alternating sub/add implements (ar + i*ai)*(br + i*bi) when
// a is the broadcast real part, b the complex operand, c = ai * swapped(b).
inline __m256d cmul(__m256d ar, __m256d ai, __m256d b) {
    const __m256d bswap = _mm256_permute_pd(b, 0x5);
    return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bswap));
}

void caxpy_v(std::size_t n, cplx a, const cplx* x, cplx* y) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    const double* xs = reinterpret_cast<const double*>(x);
    double* ys = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x0 = _mm256_loadu_pd(xs + 2 * i);
        __m256d x1 = _mm256_loadu_pd(xs + 2 * i + 4);
        __m256d y0 = _mm256_loadu_pd(ys + 2 * i);
        __m256d y1 = _mm256_loadu_pd(ys + 2 * i + 4);
        y0 = _mm256_add_pd(y0, cmul(ar, ai, x0));
        y1 = _mm256_add_pd(y1, cmul(ar, ai, x1));
        _mm256_storeu_pd(ys + 2 * i, y0);
        _mm256_storeu_pd(ys + 2 * i + 4, y1);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void cscal_v(std::size_t n, cplx a, cplx* x) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    double* xs = reinterpret_cast<double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        _mm256_storeu_pd(xs + 2 * i, cmul(ar, ai, _mm256_loadu_pd(xs + 2 * i)));
    for (; i < n; ++i) x[i] *= a;
}

// Block-local sums of conj(x)*y.  Even lanes of `im_raw` accumulate xr*yi, odd
// lanes xi*yr; the signed horizontal reduction happens once per block.
inline void dot_block(const double* xs, const double* ys, std::size_t m, double& re,
                      double& im) {
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= m; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
        const __m256d yv = _mm256_loadu_pd(ys + 2 * i);
        acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
        acc_im = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0x5), acc_im);
    }
    const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
    double pre = hsum(acc_re);
    double pim = hsum(_mm256_mul_pd(acc_im, sign));
    for (; i < m; ++i) {
        const double xr = xs[2 * i], xi = xs[2 * i + 1];
        const double yr = ys[2 * i], yi = ys[2 * i + 1];
        pre += xr * yr + xi * yi;
        pim += xr * yi - xi * yr;
    }
    re += pre;
    im += pim;
}

cplx cdotc_v(std::size_t n, const cplx* x, const cplx* y) {
    const double* xs = reinterpret_cast<const double*>(x);
    const double* ys = reinterpret_cast<const double*>(y);
    double re = 0.0, im = 0.0;
    for (std::size_t b = 0; b < n; b += kBlock) {
        const std::size_t e = b + kBlock < n ? b + kBlock : n;
        dot_block(xs + 2 * b, ys + 2 * b, e - b, re, im);
    }
    return {re, im};
}

double cnrm2sq_v(std::size_t n, const cplx* x) {
    const double* xs = reinterpret_cast<const double*>(x);
    double acc = 0.0;
    for (std::size_t b = 0; b < n; b += kBlock) {
        const std::size_t e = b + kBlock < n ? b + kBlock : n;
        __m256d av = _mm256_setzero_pd();
        std::size_t i = b;
        for (; i + 2 <= e; i += 2) {
            const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
            av = _mm256_fmadd_pd(xv, xv, av);
        }
        double p = hsum(av);
        for (; i < e; ++i) p += xs[2 * i] * xs[2 * i] + xs[2 * i + 1] * xs[2 * i + 1];
        acc += p;
    }
    return acc;
}

void cdotc_multi_v(std::size_t n, const cplx* const* v, std::size_t nv, const cplx* w,
                   cplx* out) {
    const double* ws = reinterpret_cast<const double*>(w);
    std::size_t j = 0;
    for (; j + 4 <= nv; j += 4) {
        const double* v0 = reinterpret_cast<const double*>(v[j]);
        const double* v1 = reinterpret_cast<const double*>(v[j + 1]);
        const double* v2 = reinterpret_cast<const double*>(v[j + 2]);
        const double* v3 = reinterpret_cast<const double*>(v[j + 3]);
        double re[4] = {0, 0, 0, 0}, im[4] = {0, 0, 0, 0};
        for (std::size_t b = 0; b < n; b += kBlock) {
            const std::size_t e = b + kBlock < n ? b + kBlock : n;
            __m256d r0 = _mm256_setzero_pd(), m0 = _mm256_setzero_pd();
            __m256d r1 = _mm256_setzero_pd(), m1 = _mm256_setzero_pd();
            __m256d r2 = _mm256_setzero_pd(), m2 = _mm256_setzero_pd();
            __m256d r3 = _mm256_setzero_pd(), m3 = _mm256_setzero_pd();
            std::size_t i = b;
            for (; i + 2 <= e; i += 2) {
                const __m256d wv = _mm256_loadu_pd(ws + 2 * i);
                const __m256d wsw = _mm256_permute_pd(wv, 0x5);
                __m256d t;
                t = _mm256_loadu_pd(v0 + 2 * i);
                r0 = _mm256_fmadd_pd(t, wv, r0);
                m0 = _mm256_fmadd_pd(t, wsw, m0);
                t = _mm256_loadu_pd(v1 + 2 * i);
                r1 = _mm256_fmadd_pd(t, wv, r1);
                m1 = _mm256_fmadd_pd(t, wsw, m1);
                t = _mm256_loadu_pd(v2 + 2 * i);
                r2 = _mm256_fmadd_pd(t, wv, r2);
                m2 = _mm256_fmadd_pd(t, wsw, m2);
                t = _mm256_loadu_pd(v3 + 2 * i);
                r3 = _mm256_fmadd_pd(t, wv, r3);
                m3 = _mm256_fmadd_pd(t, wsw, m3);
            }
            // conj(v)*w: im lanes carry vr*wi (even) and vi*wr (odd) -> even - odd.
            const __m256d s = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
            re[0] += hsum(r0);
            re[1] += hsum(r1);
            re[2] += hsum(r2);
            re[3] += hsum(r3);
            im[0] += hsum(_mm256_mul_pd(m0, s));
            im[1] += hsum(_mm256_mul_pd(m1, s));
            im[2] += hsum(_mm256_mul_pd(m2, s));
            im[3] += hsum(_mm256_mul_pd(m3, s));
            // scalar tail of the block
            for (; i < e; ++i) {
                const double wr = ws[2 * i], wi = ws[2 * i + 1];
                const double* vv[4] = {v0, v1, v2, v3};
                for (int q = 0; q < 4; ++q) {
                    const double xr = vv[q][2 * i], xi = vv[q][2 * i + 1];
                    re[q] += xr * wr + xi * wi;
                    im[q] += xr * wi - xi * wr;
                }
            }
        }
        for (int q = 0; q < 4; ++q) out[j + q] = {re[q], im[q]};
    }
    for (; j < nv; ++j) out[j] = cdotc_v(n, v[j], w);
}

void caxpy_multi_v(std::size_t n, const cplx* const* v, const cplx* a, std::size_t nv,
                   cplx* w) {
    double* ws = reinterpret_cast<double*>(w);
    std::size_t j = 0;
    for (; j + 4 <= nv; j += 4) {
        const double* v0 = reinterpret_cast<const double*>(v[j]);
        const double* v1 = reinterpret_cast<const double*>(v[j + 1]);
        const double* v2 = reinterpret_cast<const double*>(v[j + 2]);
        const double* v3 = reinterpret_cast<const double*>(v[j + 3]);
        const __m256d a0r = _mm256_set1_pd(a[j].real()), a0i = _mm256_set1_pd(a[j].imag());
        const __m256d a1r = _mm256_set1_pd(a[j + 1].real()), a1i = _mm256_set1_pd(a[j + 1].imag());
        const __m256d a2r = _mm256_set1_pd(a[j + 2].real()), a2i = _mm256_set1_pd(a[j + 2].imag());
        const __m256d a3r = _mm256_set1_pd(a[j + 3].real()), a3i = _mm256_set1_pd(a[j + 3].imag());
        std::size_t i = 0;
        for (; i + 2 <= n; i += 2) {
            __m256d wv = _mm256_loadu_pd(ws + 2 * i);
            wv = _mm256_sub_pd(wv, cmul(a0r, a0i, _mm256_loadu_pd(v0 + 2 * i)));
            wv = _mm256_sub_pd(wv, cmul(a1r, a1i, _mm256_loadu_pd(v1 + 2 * i)));
            wv = _mm256_sub_pd(wv, cmul(a2r, a2i, _mm256_loadu_pd(v2 + 2 * i)));
            wv = _mm256_sub_pd(wv, cmul(a3r, a3i, _mm256_loadu_pd(v3 + 2 * i)));
            _mm256_storeu_pd(ws + 2 * i, wv);
        }
        for (; i < n; ++i)
            w[i] -= a[j] * v[j][i] + a[j + 1] * v[j + 1][i] + a[j + 2] * v[j + 2][i] +
                    a[j + 3] * v[j + 3][i];
    }
    for (; j < nv; ++j) caxpy_v(n, -a[j], v[j], w);
}

void qubit_local_v(std::size_t n_pat, const double* d, double gam, double eps, const cplx* x,
                   cplx* y) {
    const double* xs = reinterpret_cast<const double*>(x);
    double* ys = reinterpret_cast<double*>(y);
    // One register covers one pattern: (re+, im+, re-, im-).
    const __m256d epsv = _mm256_setr_pd(-eps, -eps, eps, eps);
    const __m256d gamv = _mm256_set1_pd(gam);
    std::size_t p = 0;
    for (; p + 2 <= n_pat; p += 2) {
        const __m256d dv = _mm256_castpd128_pd256(_mm_loadu_pd(d + p));
        const __m256d d0 = _mm256_permute4x64_pd(dv, 0x00);
        const __m256d d1 = _mm256_permute4x64_pd(dv, 0x55);
        const __m256d x0 = _mm256_loadu_pd(xs + 4 * p);
        const __m256d x1 = _mm256_loadu_pd(xs + 4 * p + 4);
        const __m256d y0 = _mm256_fnmadd_pd(gamv, _mm256_permute2f128_pd(x0, x0, 0x01),
                                            _mm256_mul_pd(_mm256_add_pd(d0, epsv), x0));
        const __m256d y1 = _mm256_fnmadd_pd(gamv, _mm256_permute2f128_pd(x1, x1, 0x01),
                                            _mm256_mul_pd(_mm256_add_pd(d1, epsv), x1));
        _mm256_storeu_pd(ys + 4 * p, y0);
        _mm256_storeu_pd(ys + 4 * p + 4, y1);
    }
    for (; p < n_pat; ++p) {
        const cplx xp = x[2 * p], xm = x[2 * p + 1];
        y[2 * p] = (d[p] - eps) * xp - gam * xm;
        y[2 * p + 1] = (d[p] + eps) * xm - gam * xp;
    }
}

const Ops avx2_table = {
    "avx2", caxpy_v, cdotc_v, cnrm2sq_v, cscal_v, cdotc_multi_v, caxpy_multi_v, qubit_local_v,
};

}  // namespace

const Ops& avx2_ops() { return avx2_table; }

}  // namespace qbath::kern

#else  // non-x86: the dispatcher never selects this table

namespace qbath::kern {
const Ops& avx2_ops() { return scalar_ops(); }
}  // namespace qbath::kern

#endif

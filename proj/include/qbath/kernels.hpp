#pragma once

#include <cstddef>

#include "qbath/types.hpp"

namespace qbath::kern {

/// Reduction block length shared by every implementation.  Dot products and norms
/// accumulate one partial sum per block and combine the partials in block order, so
/// results are reproducible run to run regardless of the instruction set chosen.
inline constexpr std::size_t kBlock = 4096;

/// Complex vector kernels used by the propagator's inner loops.  `scalar` is the
/// portable reference; `avx2` is selected at runtime when the CPU supports AVX2+FMA.
/// The two implementations agree to rounding (FMA contraction differs), which the
/// equivalence tests pin down; within one implementation results are bit-stable.
struct Ops {
    const char* name;

    /// y += a*x
    void (*caxpy)(std::size_t n, cplx a, const cplx* x, cplx* y);
    /// sum over conj(x[i]) * y[i], blocked
    cplx (*cdotc)(std::size_t n, const cplx* x, const cplx* y);
    /// sum over |x[i]|^2, blocked
    double (*cnrm2sq)(std::size_t n, const cplx* x);
    /// x *= a
    void (*cscal)(std::size_t n, cplx a, cplx* x);
    /// out[j] = sum over conj(v[j][i]) * w[i] for nv vectors in one memory pass over w
    void (*cdotc_multi)(std::size_t n, const cplx* const* v, std::size_t nv, const cplx* w,
                        cplx* out);
    /// w -= sum over a[j] * v[j], one memory pass over w
    void (*caxpy_multi)(std::size_t n, const cplx* const* v, const cplx* a, std::size_t nv,
                        cplx* w);
    /// Qubit-local part of the Hamiltonian over interleaved (+,-) amplitude pairs:
    ///   y[2p]   = (d[p] - eps) * x[2p]   - gam * x[2p+1]
    ///   y[2p+1] = (d[p] + eps) * x[2p+1] - gam * x[2p]
    /// n_pat is the number of pairs; x and y hold 2*n_pat amplitudes.
    void (*qubit_local)(std::size_t n_pat, const double* d, double gam, double eps,
                        const cplx* x, cplx* y);
};

const Ops& scalar_ops();
const Ops& avx2_ops();

bool avx2_available();

/// Active implementation: AVX2 when the CPU supports it, unless QBATH_FORCE_SCALAR=1.
const Ops& ops();

}  // namespace qbath::kern

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qbath/types.hpp"

namespace qbath {

/// One truncated-basis label: a qubit bit plus the sparse signed occupation
/// displacements relative to the reference occupation.  Mode indices are 1..M;
/// only nonzero displacements are listed, sorted by mode.
struct BasisState {
    int qubit = 0;  // 0 = ẑ;+, 1 = ẑ;-
    std::vector<std::pair<std::int32_t, std::int32_t>> deltas;
};

/// Enumerated, indexed truncated basis: every displacement pattern with
/// Σ_k |Δn_k| ≤ N_ph and n_ref[k] + Δn_k ≥ 0, both qubit labels.  Canonical
/// order: ascending total displacement, then lexicographic on the sorted
/// (mode, Δn) pair sequence; the qubit bit varies fastest, so
/// ordinal = 2 * pattern_index + qubit.  Immutable after construction.
class FockBasis {
public:
    static constexpr std::int64_t kDefaultAmplitudeCap = 200'000'000;

    /// reference may be empty (vacuum) or one occupation per mode.  Throws
    /// resource_error (reporting the computed dimension) if 2 * #patterns would
    /// exceed amplitude_cap.
    static FockBasis enumerate(int m_modes, int n_ph, std::vector<std::int32_t> reference = {},
                               std::int64_t amplitude_cap = kDefaultAmplitudeCap);

    /// Amplitude dimension (2 x pattern count) enumerate() would produce, from
    /// the counting recurrence alone; saturates at INT64_MAX.
    static std::int64_t count_dim(int m_modes, int n_ph,
                                  std::vector<std::int32_t> reference = {});

    int m_modes() const { return m_modes_; }
    int n_ph() const { return n_ph_; }
    const std::vector<std::int32_t>& reference() const { return reference_; }
    std::int32_t n_patterns() const { return static_cast<std::int32_t>(pat_off_.size()) - 1; }
    std::int64_t dim() const { return 2 * static_cast<std::int64_t>(n_patterns()); }

    /// Zero-copy view of one displacement pattern (modes ascending, Δn ≠ 0).
    struct PatternView {
        const std::int32_t* modes;
        const std::int32_t* deltas;
        std::int32_t size;
    };
    PatternView pattern(std::int32_t p) const {
        const auto b = pat_off_[p];
        return {pat_modes_.data() + b, pat_deltas_.data() + b,
                static_cast<std::int32_t>(pat_off_[p + 1] - b)};
    }

    /// level_start()[d] is the first pattern index with total displacement d;
    /// the final entry is n_patterns().
    const std::vector<std::int32_t>& level_start() const { return level_start_; }
    std::int32_t displacement(std::int32_t p) const;

    /// Pattern index for an exact sorted (mode, Δn ≠ 0) pair list; -1 if the
    /// pattern is outside the truncation.
    std::int32_t find_pattern(const std::int32_t* modes, const std::int32_t* deltas,
                              std::int32_t n) const;

    /// Ordinal of a BasisState, or -1 when it falls outside the truncation
    /// (callers treat that as an annihilated amplitude).  The deltas list is
    /// normalized first (sorted, merged, zeros dropped), so any sparse-map
    /// encoding of the same state resolves identically.
    std::int64_t lookup(const BasisState& state) const;

    /// Inverse of lookup; throws domain_error on an out-of-range ordinal.
    BasisState state_at(std::int64_t ordinal) const;

private:
    int m_modes_ = 0;
    int n_ph_ = 0;
    std::vector<std::int32_t> reference_;
    std::vector<std::int64_t> pat_off_;     // size n_patterns + 1
    std::vector<std::int32_t> pat_modes_;   // flat (mode, Δn) pair storage
    std::vector<std::int32_t> pat_deltas_;
    std::vector<std::int32_t> level_start_; // size n_ph + 2
    std::vector<std::int32_t> slots_;       // open-addressing pattern index table, -1 empty
    std::uint64_t mask_ = 0;
};

/// Amplitude vector over a basis, interleaved as amps[2p] = (pattern p, ẑ;+),
/// amps[2p+1] = (pattern p, ẑ;-).
struct SystemState {
    std::vector<cplx> amps;
    const FockBasis* basis = nullptr;

    double norm() const;
};

/// Factorized start: qubit amplitudes (c₊, c₋) on the reference bath pattern,
/// zero elsewhere.  Throws domain_error unless |c₊|² + |c₋|² = 1 to 1e-10.
SystemState initial_state(const FockBasis& basis, cplx c_plus, cplx c_minus);

}  // namespace qbath

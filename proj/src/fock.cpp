#include "qbath/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

namespace qbath {

namespace {

// FNV-1a over the little-endian bytes of the sorted (mode, Δn) pairs.
std::uint64_t hash_pairs(const std::int32_t* ms, const std::int32_t* ds, std::int32_t n) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::int32_t v) {
        std::uint32_t u;
        std::memcpy(&u, &v, 4);
        for (int i = 0; i < 4; ++i) {
            h ^= (u >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    for (std::int32_t i = 0; i < n; ++i) {
        mix(ms[i]);
        mix(ds[i]);
    }
    return h;
}

// Exact pattern count per displacement level by a per-mode knapsack: a mode with
// reference occupation r contributes 2 displacement choices of magnitude a when
// r >= a (raise or lower) and 1 otherwise.  Counts saturate at 2^100 so oversized
// requests still compare correctly against the cap.
constexpr unsigned __int128 kSat = static_cast<unsigned __int128>(1) << 100;

std::vector<unsigned __int128> count_per_level(int m_modes, int n_ph,
                                               const std::int32_t* ref) {
    std::vector<unsigned __int128> ways(n_ph + 1, 0);
    ways[0] = 1;
    for (int k = 1; k <= m_modes; ++k) {
        for (int d = n_ph; d >= 1; --d) {
            unsigned __int128 acc = ways[d];
            for (int a = 1; a <= d; ++a) {
                const unsigned choices = (ref[k - 1] >= a) ? 2u : 1u;
                acc += choices * ways[d - a];
                if (acc > kSat) acc = kSat;
            }
            ways[d] = acc;
        }
    }
    return ways;
}

// Emits every pattern with total displacement exactly `rem` over modes
// start_mode..m_modes, in lexicographic (mode asc, Δn asc) order.  Positive
// displacements are never capped, so any leftover budget is absorbable as long
// as one later mode remains.
template <class Emit>
void enum_level(int m_modes, const std::int32_t* ref, int start_mode, int rem,
                std::int32_t* ms, std::int32_t* ds, int depth, Emit&& emit) {
    if (rem == 0) {
        emit(ms, ds, depth);
        return;
    }
    for (int k = start_mode; k <= m_modes; ++k) {
        const int neg_max = std::min(rem, static_cast<int>(ref[k - 1]));
        for (int d = -neg_max; d <= rem; ++d) {
            if (d == 0) continue;
            const int rem2 = rem - std::abs(d);
            if (rem2 > 0 && k == m_modes) continue;
            ms[depth] = k;
            ds[depth] = d;
            enum_level(m_modes, ref, k + 1, rem2, ms, ds, depth + 1, emit);
        }
    }
}

std::string count_to_string(unsigned __int128 v) {
    if (v >= kSat) return "more than 1e30";
    if (v == 0) return "0";
    std::string out;
    while (v > 0) {
        out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return out;
}

}  // namespace

std::int64_t FockBasis::count_dim(int m_modes, int n_ph,
                                  std::vector<std::int32_t> reference) {
    if (m_modes < 1) throw domain_error("fock: m_modes must be >= 1");
    if (n_ph < 0) throw domain_error("fock: n_ph must be >= 0");
    if (reference.empty()) reference.assign(m_modes, 0);
    if (static_cast<int>(reference.size()) != m_modes)
        throw domain_error("fock: reference occupation list must have one entry per mode");
    for (auto r : reference)
        if (r < 0) throw domain_error("fock: reference occupations must be >= 0");
    const auto per_level = count_per_level(m_modes, n_ph, reference.data());
    unsigned __int128 total = 0;
    for (const auto& c : per_level) total = std::min(total + c, kSat);
    const unsigned __int128 dim = std::min(2 * total, kSat);
    constexpr auto kI64Max = std::numeric_limits<std::int64_t>::max();
    return dim > static_cast<unsigned __int128>(kI64Max) ? kI64Max
                                                         : static_cast<std::int64_t>(dim);
}

FockBasis FockBasis::enumerate(int m_modes, int n_ph, std::vector<std::int32_t> reference,
                               std::int64_t amplitude_cap) {
    if (m_modes < 1) throw domain_error("fock: m_modes must be >= 1");
    if (n_ph < 0) throw domain_error("fock: n_ph must be >= 0");
    if (reference.empty()) reference.assign(m_modes, 0);
    if (static_cast<int>(reference.size()) != m_modes)
        throw domain_error("fock: reference occupation list must have one entry per mode");
    for (auto r : reference)
        if (r < 0) throw domain_error("fock: reference occupations must be >= 0");

    const auto per_level = count_per_level(m_modes, n_ph, reference.data());
    unsigned __int128 total = 0;
    for (const auto& c : per_level) total = std::min(total + c, kSat);
    const unsigned __int128 dim = std::min(2 * total, kSat);
    if (dim > static_cast<unsigned __int128>(amplitude_cap)) {
        throw resource_error("fock: basis dimension " + count_to_string(dim) +
                             " exceeds the amplitude cap " + std::to_string(amplitude_cap));
    }

    FockBasis b;
    b.m_modes_ = m_modes;
    b.n_ph_ = n_ph;
    b.reference_ = std::move(reference);

    const auto n_patterns = static_cast<std::size_t>(total);
    unsigned __int128 pair_bound = 0;
    for (int d = 0; d <= n_ph; ++d) pair_bound += static_cast<unsigned>(d) * per_level[d];
    b.pat_off_.reserve(n_patterns + 1);
    b.pat_modes_.reserve(static_cast<std::size_t>(pair_bound));
    b.pat_deltas_.reserve(static_cast<std::size_t>(pair_bound));
    b.pat_off_.push_back(0);
    b.level_start_.assign(n_ph + 2, 0);

    std::vector<std::int32_t> ms(std::max(n_ph, 1)), ds(std::max(n_ph, 1));
    for (int d = 0; d <= n_ph; ++d) {
        b.level_start_[d] = static_cast<std::int32_t>(b.pat_off_.size()) - 1;
        enum_level(m_modes, b.reference_.data(), 1, d, ms.data(), ds.data(), 0,
                   [&b](const std::int32_t* pm, const std::int32_t* pd, int n) {
                       b.pat_modes_.insert(b.pat_modes_.end(), pm, pm + n);
                       b.pat_deltas_.insert(b.pat_deltas_.end(), pd, pd + n);
                       b.pat_off_.push_back(static_cast<std::int64_t>(b.pat_modes_.size()));
                   });
    }
    b.level_start_[n_ph + 1] = static_cast<std::int32_t>(b.pat_off_.size()) - 1;
    if (b.pat_off_.size() - 1 != n_patterns)
        throw numerics_error("fock: enumeration disagrees with the counting recurrence");

    std::size_t table = 16;
    while (table < 2 * n_patterns) table *= 2;
    b.slots_.assign(table, -1);
    b.mask_ = table - 1;
    for (std::int32_t p = 0; p < b.n_patterns(); ++p) {
        const auto v = b.pattern(p);
        std::uint64_t i = hash_pairs(v.modes, v.deltas, v.size) & b.mask_;
        while (b.slots_[i] != -1) i = (i + 1) & b.mask_;
        b.slots_[i] = p;
    }
    return b;
}

std::int32_t FockBasis::displacement(std::int32_t p) const {
    const auto it = std::upper_bound(level_start_.begin() + 1, level_start_.end(), p);
    return static_cast<std::int32_t>(it - level_start_.begin()) - 1;
}

std::int32_t FockBasis::find_pattern(const std::int32_t* modes, const std::int32_t* deltas,
                                     std::int32_t n) const {
    std::uint64_t i = hash_pairs(modes, deltas, n) & mask_;
    while (true) {
        const std::int32_t p = slots_[i];
        if (p == -1) return -1;
        const auto v = pattern(p);
        if (v.size == n && std::equal(modes, modes + n, v.modes) &&
            std::equal(deltas, deltas + n, v.deltas)) {
            return p;
        }
        i = (i + 1) & mask_;
    }
}

std::int64_t FockBasis::lookup(const BasisState& state) const {
    if (state.qubit != 0 && state.qubit != 1)
        throw domain_error("fock: qubit label must be 0 or 1");
    auto pairs = state.deltas;
    std::sort(pairs.begin(), pairs.end());
    std::vector<std::int32_t> ms, ds;
    ms.reserve(pairs.size());
    ds.reserve(pairs.size());
    std::int64_t disp = 0;
    for (std::size_t i = 0; i < pairs.size();) {
        const std::int32_t mode = pairs[i].first;
        std::int64_t delta = 0;
        for (; i < pairs.size() && pairs[i].first == mode; ++i) delta += pairs[i].second;
        if (delta == 0) continue;
        if (mode < 1 || mode > m_modes_) return -1;
        if (reference_[mode - 1] + delta < 0) return -1;
        ms.push_back(mode);
        ds.push_back(static_cast<std::int32_t>(delta));
        disp += std::abs(delta);
        if (disp > n_ph_) return -1;
    }
    const std::int32_t p = find_pattern(ms.data(), ds.data(), static_cast<std::int32_t>(ms.size()));
    if (p == -1) return -1;
    return 2 * static_cast<std::int64_t>(p) + state.qubit;
}

BasisState FockBasis::state_at(std::int64_t ordinal) const {
    if (ordinal < 0 || ordinal >= dim())
        throw domain_error("fock: ordinal out of range");
    BasisState s;
    s.qubit = static_cast<int>(ordinal & 1);
    const auto v = pattern(static_cast<std::int32_t>(ordinal >> 1));
    s.deltas.reserve(v.size);
    for (std::int32_t i = 0; i < v.size; ++i) s.deltas.emplace_back(v.modes[i], v.deltas[i]);
    return s;
}

double SystemState::norm() const {
    double n2 = 0.0;
    for (const auto& a : amps) n2 += std::norm(a);
    return std::sqrt(n2);
}

SystemState initial_state(const FockBasis& basis, cplx c_plus, cplx c_minus) {
    const double n2 = std::norm(c_plus) + std::norm(c_minus);
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-10)
        throw domain_error("fock: qubit preparation must be unit norm");
    SystemState st;
    st.basis = &basis;
    st.amps.assign(static_cast<std::size_t>(basis.dim()), cplx{0.0, 0.0});
    st.amps[0] = c_plus;
    st.amps[1] = c_minus;
    return st;
}

}  // namespace qbath

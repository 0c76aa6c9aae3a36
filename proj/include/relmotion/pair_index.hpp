#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "relmotion/errors.hpp"

namespace relmotion {

/// An unordered pair of particle labels, stored as (hi, lo) with
/// 1 <= lo < hi. Pairs index the relative coordinates of an N-particle
/// system; validity against a concrete N is checked at the point of use.
struct IndexPair {
    int hi;
    int lo;

    IndexPair(int hi_, int lo_) : hi(hi_), lo(lo_) {
        if (lo < 1 || hi <= lo)
            throw CompositionError("IndexPair requires 1 <= lo < hi, got (" + std::to_string(hi_) +
                                   ", " + std::to_string(lo_) + ")");
    }

    /// True when the pair couples neighbouring labels (hi == lo + 1).
    bool adjacent() const noexcept { return hi == lo + 1; }

    bool contains(int k) const noexcept { return k == hi || k == lo; }

    friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

inline std::string to_string(const IndexPair& p) {
    return "(" + std::to_string(p.hi) + "," + std::to_string(p.lo) + ")";
}

/// Number of unordered pairs over n labels: n(n-1)/2.
inline std::size_t pair_count(std::size_t n) {
    if (n < 2) throw DimensionError("pair_count requires n >= 2");
    return n * (n - 1) / 2;
}

/// Inverse of pair_count: the label count whose pair set has size m.
inline std::size_t particles_for_pair_count(std::size_t m) {
    std::size_t n = 2;
    while (n * (n - 1) / 2 < m) ++n;
    if (n * (n - 1) / 2 != m)
        throw DimensionError(std::to_string(m) + " is not a pair count n(n-1)/2");
    return n;
}

inline void require_valid(const IndexPair& p, std::size_t n) {
    if (static_cast<std::size_t>(p.hi) > n)
        throw DimensionError("pair " + to_string(p) + " out of range for n = " + std::to_string(n));
}

/// All pairs over n labels in canonical order: ascending lexicographic by
/// (lo, hi). The adjacent pairs (2,1), ..., (n,n-1) are the subset with
/// hi == lo + 1.
inline std::vector<IndexPair> enumerate_pairs(std::size_t n) {
    std::vector<IndexPair> out;
    out.reserve(pair_count(n));
    for (int lo = 1; lo < static_cast<int>(n); ++lo)
        for (int hi = lo + 1; hi <= static_cast<int>(n); ++hi) out.emplace_back(hi, lo);
    return out;
}

/// Position of p in enumerate_pairs(n).
inline std::size_t pair_rank(const IndexPair& p, std::size_t n) {
    require_valid(p, n);
    const std::size_t lo = static_cast<std::size_t>(p.lo);
    const std::size_t hi = static_cast<std::size_t>(p.hi);
    return (lo - 1) * n - lo * (lo - 1) / 2 + (hi - lo - 1);
}

/// Signed incidence vector of a pair: +1 at position hi, -1 at position lo
/// (1-based), zero elsewhere.
inline std::vector<int> incidence_vector(const IndexPair& p, std::size_t n) {
    require_valid(p, n);
    std::vector<int> v(n, 0);
    v[static_cast<std::size_t>(p.hi) - 1] = 1;
    v[static_cast<std::size_t>(p.lo) - 1] = -1;
    return v;
}

/// Dot product of two signed incidence vectors, computed from label
/// coincidences in O(1). Equals 2 iff p == q and 0 iff the pairs are
/// disjoint; otherwise +-1.
inline int incidence_dot(const IndexPair& p, const IndexPair& q) noexcept {
    return (p.hi == q.hi) + (p.lo == q.lo) - (p.hi == q.lo) - (p.lo == q.hi);
}

/// Composition of two chaining pairs: (a,b) and (b,c) combine to (a,c).
/// Symmetric in its arguments; throws when the pairs do not chain.
inline IndexPair chain(const IndexPair& p, const IndexPair& q) {
    if (p.lo == q.hi) return IndexPair(p.hi, q.lo);
    if (q.lo == p.hi) return IndexPair(q.hi, p.lo);
    throw CompositionError("pairs " + to_string(p) + " and " + to_string(q) + " do not chain");
}

/// The unordered pair of two distinct labels: (max{i,j}, min{i,j}).
inline IndexPair unordered_pair(int i, int j) {
    if (i == j) throw CompositionError("unordered_pair requires i != j, got i = j = " + std::to_string(i));
    return i > j ? IndexPair(i, j) : IndexPair(j, i);
}

} // namespace relmotion

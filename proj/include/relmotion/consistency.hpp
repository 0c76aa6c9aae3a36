#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "relmotion/detail.hpp"
#include "relmotion/errors.hpp"
#include "relmotion/pair_index.hpp"
#include "relmotion/state.hpp"
#include "relmotion/transform.hpp"

namespace relmotion {

struct ConsistencyReport {
    bool ok;
    double max_violation;
};

namespace detail {

/// Worst violation of value(a,b) + value(b,c) = value(a,c) over all label
/// triples c < b < a, measured componentwise, on a flat family block in
/// canonical pair order.
inline double consistency_violation(std::size_t n, std::size_t d, std::span<const double> family) {
    double worst = 0.0;
    for (int lo = 1; lo + 2 <= static_cast<int>(n); ++lo) {
        for (int mid = lo + 1; mid + 1 <= static_cast<int>(n); ++mid) {
            for (int hi = mid + 1; hi <= static_cast<int>(n); ++hi) {
                const std::size_t top = pair_rank(IndexPair(hi, mid), n) * d;
                const std::size_t bottom = pair_rank(IndexPair(mid, lo), n) * d;
                const std::size_t full = pair_rank(IndexPair(hi, lo), n) * d;
                for (std::size_t c = 0; c < d; ++c) {
                    const double gap = family[top + c] + family[bottom + c] - family[full + c];
                    worst = std::max(worst, std::abs(gap));
                }
            }
        }
    }
    return worst;
}

} // namespace detail

/// Scale-aware default tolerance for consistency checks: 1e-9 absolute per
/// component, widened with the family's own magnitude to absorb rounding
/// accumulated over N-term telescoping sums.
inline double default_consistency_tolerance(const RelativeFamily& f) {
    return 1e-9 * std::max(1.0, detail::max_abs(f.data()));
}

/// Checks difference-consistency: for every chaining pair of pairs,
/// value(a,b) + value(b,c) must equal value(a,c) within tol (max norm per
/// component). Only chaining identities are checked; the telescoping
/// representation makes every derived identity follow from them.
inline ConsistencyReport check_difference_consistency(const RelativeFamily& f, double tol) {
    const double worst = detail::consistency_violation(f.n(), f.dim(), f.data());
    return {worst <= tol, worst};
}

inline bool is_difference_consistent(const RelativeFamily& f, double tol) {
    return check_difference_consistency(f, tol).ok;
}

/// Expands the adjacent coordinates to the full family by telescoping:
/// value(hi,lo) = value(hi,hi-1) + ... + value(lo+1,lo).
inline RelativeFamily telescope_expand(const AdjacentCoordinates& adj) {
    const std::size_t n = adj.n(), d = adj.dim();
    RelativeFamily f(n, d);
    for (int lo = 1; lo < static_cast<int>(n); ++lo) {
        for (int hi = lo + 1; hi <= static_cast<int>(n); ++hi) {
            auto out = f.value(IndexPair(hi, lo));
            for (int k = hi - 1; k >= lo; --k) {
                const auto step = adj.value(static_cast<std::size_t>(k - 1));
                for (std::size_t c = 0; c < d; ++c) out[c] += step[c];
            }
        }
    }
    return f;
}

/// Extracts the adjacent coordinates of a family. Pure projection; it does
/// not require or check consistency.
inline AdjacentCoordinates project_adjacent(const RelativeFamily& f) {
    const std::size_t n = f.n(), d = f.dim();
    AdjacentCoordinates adj(n, d);
    for (int k = 1; k < static_cast<int>(n); ++k) {
        const auto src = f.value(IndexPair(k + 1, k));
        auto dst = adj.value(static_cast<std::size_t>(k - 1));
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return adj;
}

/// Recovers particle states from a difference-consistent family and a
/// center of mass. The family alone never determines the states: the linear
/// system is rank-deficient for N = 3 and overdetermined for N >= 4, so the
/// center of mass must be supplied and consistency is a hard precondition.
inline StateVector recover_states(const RelativeFamily& f, std::span<const double> com,
                                  double tol) {
    const auto report = check_difference_consistency(f, tol);
    if (!report.ok)
        throw ConsistencyError("family is not difference-consistent (max violation " +
                                   std::to_string(report.max_violation) + ", tol " +
                                   std::to_string(tol) + ")",
                               report.max_violation);
    return from_relative_coordinates(project_adjacent(f), com);
}

/// The relative family induced by particle states:
/// value(hi,lo) = (z^hi - z^lo)/sqrt(2). Always difference-consistent up to
/// rounding.
inline RelativeFamily relative_family(const StateVector& z) {
    const std::size_t n = z.size(), d = z.dim();
    RelativeFamily f(n, d);
    std::size_t rank = 0;
    for (int lo = 1; lo < static_cast<int>(n); ++lo) {
        for (int hi = lo + 1; hi <= static_cast<int>(n); ++hi, ++rank) {
            const auto a = z.point(static_cast<std::size_t>(lo) - 1);
            const auto b = z.point(static_cast<std::size_t>(hi) - 1);
            auto out = f.value_at(rank);
            for (std::size_t c = 0; c < d; ++c) out[c] = (b[c] - a[c]) * detail::inv_sqrt2;
        }
    }
    return f;
}

/// Maps an arbitrary family to a difference-consistent one through signed
/// incidence weights: out(p) = -sum_q incidence_dot(p, q) * in(q). Up to
/// the factor -1/N this is the orthogonal projection onto the
/// difference-consistent subspace; in particular it fixes consistent
/// families up to scaling by -N.
///
/// Defined for every N >= 2. For N = 2 the family is a singleton and the
/// map degenerates to out = -2 * in, which is trivially consistent.
inline RelativeFamily incidence_map(const RelativeFamily& p) {
    const std::size_t n = p.n(), d = p.dim();
    const auto pairs = enumerate_pairs(n);
    RelativeFamily q(n, d);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto out = q.value_at(i);
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            const int dot = incidence_dot(pairs[i], pairs[j]);
            if (dot == 0) continue;
            const auto in = p.value_at(j);
            const double w = -static_cast<double>(dot);
            for (std::size_t c = 0; c < d; ++c) out[c] += w * in[c];
        }
    }
    return q;
}

} // namespace relmotion

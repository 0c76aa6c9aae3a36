#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "relmotion/detail.hpp"
#include "relmotion/errors.hpp"
#include "relmotion/matrix.hpp"
#include "relmotion/state.hpp"

namespace relmotion {

/// Role of a transform matrix.
///
/// The relative-coordinate matrix maps particle states (z^1, ..., z^N) to
/// the adjacent relative coordinates together with the center of mass:
/// rows 1..N-1 form scaled neighbour differences (z^{k+1} - z^k)/sqrt(2),
/// the last row averages. It factors as
///
///     coordinate = diag(1/sqrt(2), ..., 1/sqrt(2), 1/N) * integer_factor,
///
/// where the integer factor has rows (-1, +1) on neighbours plus a final
/// all-ones row. The inverse of the integer factor has entries that are
/// integer multiples of 1/N, which is what makes an exact (tolerance-free)
/// invertibility check possible.
enum class TransformKind { coordinate, coordinate_inverse, integer_factor, integer_factor_inverse };

struct TransformMatrix {
    TransformKind kind;
    std::size_t n;
    DenseMatrix<double> values;
};

namespace detail {
inline void require_system_size(std::size_t n) {
    if (n < 2) throw DimensionError("transform requires n >= 2");
}
} // namespace detail

/// The N x N relative-coordinate matrix.
inline TransformMatrix relative_coordinate_matrix(std::size_t n) {
    detail::require_system_size(n);
    DenseMatrix<double> m(n, n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        m(k, k) = -detail::inv_sqrt2;
        m(k, k + 1) = detail::inv_sqrt2;
    }
    for (std::size_t j = 0; j < n; ++j) m(n - 1, j) = 1.0 / static_cast<double>(n);
    return {TransformKind::coordinate, n, std::move(m)};
}

/// Closed form of the inverse coordinate matrix. Entry (i, j), 1-based:
/// -sqrt(2)(N-j)/N for i <= j <= N-1, sqrt(2) j/N for i > j with
/// j <= N-1, and 1 in the last column.
inline TransformMatrix relative_coordinate_inverse(std::size_t n) {
    detail::require_system_size(n);
    const double nd = static_cast<double>(n);
    DenseMatrix<double> m(n, n);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j + 1 <= n; ++j) {
            const double jd = static_cast<double>(j);
            m(i - 1, j - 1) = (i <= j) ? -detail::sqrt2 * (nd - jd) / nd : detail::sqrt2 * jd / nd;
        }
        m(i - 1, n - 1) = 1.0;
    }
    return {TransformKind::coordinate_inverse, n, std::move(m)};
}

/// Integer factor of the coordinate matrix (neighbour differences plus an
/// all-ones row), stored in doubles; every entry is -1, 0 or 1.
inline TransformMatrix integer_factor(std::size_t n) {
    detail::require_system_size(n);
    DenseMatrix<double> m(n, n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        m(k, k) = -1.0;
        m(k, k + 1) = 1.0;
    }
    for (std::size_t j = 0; j < n; ++j) m(n - 1, j) = 1.0;
    return {TransformKind::integer_factor, n, std::move(m)};
}

/// Inverse of the integer factor; entries are integer multiples of 1/N.
inline TransformMatrix integer_factor_inverse(std::size_t n) {
    detail::require_system_size(n);
    const double nd = static_cast<double>(n);
    DenseMatrix<double> m(n, n);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j + 1 <= n; ++j)
            m(i - 1, j - 1) =
                (i <= j) ? -(nd - static_cast<double>(j)) / nd : static_cast<double>(j) / nd;
        m(i - 1, n - 1) = 1.0 / nd;
    }
    return {TransformKind::integer_factor_inverse, n, std::move(m)};
}

/// Integer factor in exact integer arithmetic.
inline DenseMatrix<long long> integer_factor_exact(std::size_t n) {
    detail::require_system_size(n);
    DenseMatrix<long long> m(n, n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        m(k, k) = -1;
        m(k, k + 1) = 1;
    }
    for (std::size_t j = 0; j < n; ++j) m(n - 1, j) = 1;
    return m;
}

/// N times the inverse of the integer factor, in exact integer arithmetic.
inline DenseMatrix<long long> scaled_integer_factor_inverse_exact(std::size_t n) {
    detail::require_system_size(n);
    const long long nn = static_cast<long long>(n);
    DenseMatrix<long long> m(n, n);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j + 1 <= n; ++j)
            m(i - 1, j - 1) = (i <= j) ? -(nn - static_cast<long long>(j))
                                       : static_cast<long long>(j);
        m(i - 1, n - 1) = 1;
    }
    return m;
}

/// Image of a state vector under the coordinate transform: the adjacent
/// relative coordinates and the center of mass.
struct AdjacentSplit {
    AdjacentCoordinates adjacent;
    std::vector<double> com;
};

/// Center of mass of a state vector, componentwise mean over particles.
inline std::vector<double> center_of_mass(const StateVector& z) {
    const std::size_t n = z.size(), d = z.dim();
    std::vector<double> com(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = z.point(i);
        for (std::size_t c = 0; c < d; ++c) com[c] += p[c];
    }
    for (std::size_t c = 0; c < d; ++c) com[c] /= static_cast<double>(n);
    return com;
}

/// Applies the coordinate transform as the closed-form linear map in
/// O(N d): adjacent[k] = (z^{k+1} - z^k)/sqrt(2), com = mean. The dense
/// matrix exists for verification; this path never materializes it.
inline AdjacentSplit to_relative_coordinates(const StateVector& z) {
    const std::size_t n = z.size(), d = z.dim();
    AdjacentCoordinates adj(n, d);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const auto a = z.point(k);
        const auto b = z.point(k + 1);
        auto out = adj.value(k);
        for (std::size_t c = 0; c < d; ++c) out[c] = (b[c] - a[c]) * detail::inv_sqrt2;
    }
    return {std::move(adj), center_of_mass(z)};
}

/// Inverse coordinate transform in O(N d): accumulate positions relative to
/// the first particle, then recenter on the requested center of mass.
inline StateVector from_relative_coordinates(const AdjacentCoordinates& adj,
                                             std::span<const double> com) {
    const std::size_t n = adj.n(), d = adj.dim();
    if (com.size() != d) throw DimensionError("center-of-mass dimension mismatch");
    StateVector z(n, d);
    auto first = z.point(0);
    for (std::size_t c = 0; c < d; ++c) first[c] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const auto prev = z.point(i - 1);
        const auto step = adj.value(i - 1);
        auto cur = z.point(i);
        for (std::size_t c = 0; c < d; ++c) cur[c] = prev[c] + detail::sqrt2 * step[c];
    }
    const std::vector<double> mean = center_of_mass(z);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = z.point(i);
        for (std::size_t c = 0; c < d; ++c) p[c] += com[c] - mean[c];
    }
    return z;
}

struct InverseReport {
    /// Worst floating-point deviation of both products (forward * inverse
    /// and inverse * forward) from the identity.
    double max_abs_error;
    /// Whether integer_factor * (N * integer_factor_inverse) == N * Id holds
    /// exactly in integer arithmetic.
    bool exact_integer_identity;
};

/// Verifies invertibility of the coordinate transform for one N, both in
/// floating point and through the exact integer factorization.
inline InverseReport verify_coordinate_inverse(std::size_t n) {
    const auto fwd = relative_coordinate_matrix(n).values;
    const auto inv = relative_coordinate_inverse(n).values;
    const auto id = DenseMatrix<double>::identity(n);
    const double err =
        std::max(max_abs_deviation(fwd * inv, id), max_abs_deviation(inv * fwd, id));

    const auto q = integer_factor_exact(n);
    const auto scaled_inv = scaled_integer_factor_inverse_exact(n);
    DenseMatrix<long long> scaled_id(n, n);
    for (std::size_t i = 0; i < n; ++i) scaled_id(i, i) = static_cast<long long>(n);
    return {err, q * scaled_inv == scaled_id};
}

} // namespace relmotion

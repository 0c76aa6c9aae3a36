#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relmotion/errors.hpp"
#include "relmotion/pair_index.hpp"

namespace relmotion {

/// States z^1..z^N of N particles in R^d, stored flat in particle-major
/// order. Particle indices are 0-based in code; IndexPair labels stay
/// 1-based.
class StateVector {
public:
    StateVector(std::size_t n, std::size_t dim) : n_(n), dim_(dim), data_(check(n, dim), 0.0) {}

    StateVector(std::size_t n, std::size_t dim, std::vector<double> data)
        : n_(n), dim_(dim), data_(std::move(data)) {
        if (data_.size() != check(n, dim))
            throw DimensionError("StateVector data size " + std::to_string(data_.size()) +
                                 " does not match n*dim = " + std::to_string(n * dim));
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t dim() const noexcept { return dim_; }

    std::span<double> point(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
    std::span<const double> point(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

private:
    static std::size_t check(std::size_t n, std::size_t dim) {
        if (n < 2) throw DimensionError("StateVector requires n >= 2");
        if (dim < 1) throw DimensionError("StateVector requires dim >= 1");
        return n * dim;
    }

    std::size_t n_;
    std::size_t dim_;
    std::vector<double> data_;
};

/// The adjacent relative coordinates (z^(2,1), ..., z^(N,N-1)): N-1 points
/// of R^d. These coordinates parametrize every difference-consistent family.
class AdjacentCoordinates {
public:
    AdjacentCoordinates(std::size_t n, std::size_t dim)
        : n_(n), dim_(dim), data_(check(n, dim), 0.0) {}

    AdjacentCoordinates(std::size_t n, std::size_t dim, std::vector<double> data)
        : n_(n), dim_(dim), data_(std::move(data)) {
        if (data_.size() != check(n, dim))
            throw DimensionError("AdjacentCoordinates data size does not match (n-1)*dim");
    }

    /// Particle count N of the ambient system (one more than the point count).
    std::size_t n() const noexcept { return n_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t count() const noexcept { return n_ - 1; }

    /// k-th adjacent coordinate, 0-based: the pair (k+2, k+1).
    std::span<double> value(std::size_t k) { return {data_.data() + k * dim_, dim_}; }
    std::span<const double> value(std::size_t k) const { return {data_.data() + k * dim_, dim_}; }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

private:
    static std::size_t check(std::size_t n, std::size_t dim) {
        if (n < 2) throw DimensionError("AdjacentCoordinates requires n >= 2");
        if (dim < 1) throw DimensionError("AdjacentCoordinates requires dim >= 1");
        return (n - 1) * dim;
    }

    std::size_t n_;
    std::size_t dim_;
    std::vector<double> data_;
};

/// One point of R^d per pair over N labels, complete by construction and
/// stored flat in canonical pair order.
class RelativeFamily {
public:
    RelativeFamily(std::size_t n, std::size_t dim)
        : n_(n), dim_(dim), data_(check(n, dim), 0.0) {}

    RelativeFamily(std::size_t n, std::size_t dim, std::vector<double> data)
        : n_(n), dim_(dim), data_(std::move(data)) {
        if (data_.size() != check(n, dim))
            throw DimensionError("RelativeFamily data size does not match pair_count(n)*dim");
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t pairs() const noexcept { return n_ * (n_ - 1) / 2; }

    std::span<double> value(const IndexPair& p) { return value_at(pair_rank(p, n_)); }
    std::span<const double> value(const IndexPair& p) const { return value_at(pair_rank(p, n_)); }

    std::span<double> value_at(std::size_t rank) { return {data_.data() + rank * dim_, dim_}; }
    std::span<const double> value_at(std::size_t rank) const {
        return {data_.data() + rank * dim_, dim_};
    }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

private:
    static std::size_t check(std::size_t n, std::size_t dim) {
        if (n < 2) throw DimensionError("RelativeFamily requires n >= 2");
        if (dim < 1) throw DimensionError("RelativeFamily requires dim >= 1");
        return pair_count(n) * dim;
    }

    std::size_t n_;
    std::size_t dim_;
    std::vector<double> data_;
};

} // namespace relmotion

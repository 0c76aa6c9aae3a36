#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace relmotion {

/// Invalid particle count, dimension, or mismatched container shapes.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Pair operations applied to arguments they are not defined for
/// (non-chaining pairs, equal indices).
class CompositionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A relative family violated difference-consistency beyond the allowed
/// tolerance. Carries the worst violation and, for trajectory-level checks,
/// the offending step index.
class ConsistencyError : public std::runtime_error {
public:
    static constexpr std::size_t no_step = std::numeric_limits<std::size_t>::max();

    ConsistencyError(const std::string& what, double max_violation, std::size_t step = no_step)
        : std::runtime_error(what), max_violation_(max_violation), step_(step) {}

    double max_violation() const noexcept { return max_violation_; }

    /// Step index of the first violating state, or no_step for single-state checks.
    std::size_t step() const noexcept { return step_; }

private:
    double max_violation_;
    std::size_t step_;
};

/// A drift coefficient evaluated to a non-finite value outside a simulation
/// loop (inside one, the run is marked exploded instead).
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed trajectory or report file.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace relmotion

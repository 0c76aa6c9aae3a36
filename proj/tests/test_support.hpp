#pragma once

#include <cstdint>

#include "relmotion/relmotion.hpp"

namespace testsupport {

inline relmotion::StateVector random_states(std::size_t n, std::size_t d, std::uint64_t seed,
                                            double scale = 10.0) {
    relmotion::GaussianStream g(seed);
    relmotion::StateVector z(n, d);
    for (double& x : z.data()) x = scale * (2.0 * g.uniform() - 1.0);
    return z;
}

inline relmotion::RelativeFamily random_family(std::size_t n, std::size_t d, std::uint64_t seed,
                                               double scale = 10.0) {
    relmotion::GaussianStream g(seed);
    relmotion::RelativeFamily f(n, d);
    for (double& x : f.data()) x = scale * (2.0 * g.uniform() - 1.0);
    return f;
}

} // namespace testsupport

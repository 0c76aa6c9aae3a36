#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "relmotion/detail.hpp"
#include "relmotion/errors.hpp"
#include "relmotion/pair_index.hpp"
#include "relmotion/rng.hpp"

namespace relmotion {

namespace detail {
inline void require_noise_shape(std::size_t n, std::size_t dim, double dt, std::size_t steps) {
    if (n < 2) throw DimensionError("noise requires n >= 2");
    if (dim < 1) throw DimensionError("noise requires dim >= 1");
    if (!(dt > 0.0)) throw DimensionError("noise requires dt > 0");
    if (steps < 1) throw DimensionError("noise requires steps >= 1");
}
} // namespace detail

/// Increments of N independent d-dimensional Brownian motions on a uniform
/// grid: increments[(step * n + particle) * dim + c] ~ Normal(0, dt),
/// independent across step, particle and component.
struct ParticleNoise {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::size_t steps = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> increments;

    std::span<const double> increment(std::size_t step, std::size_t particle) const {
        return {increments.data() + (step * n + particle) * dim, dim};
    }
    std::span<const double> step_block(std::size_t step) const {
        return {increments.data() + step * n * dim, n * dim};
    }
};

/// Samples particle noise deterministically: particle i draws from its own
/// substream seeded with derive_stream_seed(seed, i).
inline ParticleNoise sample_particle_noise(std::size_t n, std::size_t dim, double dt,
                                           std::size_t steps, std::uint64_t seed) {
    detail::require_noise_shape(n, dim, dt, steps);
    ParticleNoise pn{n, dim, steps, dt, seed, std::vector<double>(steps * n * dim)};
    const double sd = std::sqrt(dt);
    for (std::size_t i = 0; i < n; ++i) {
        GaussianStream g(derive_stream_seed(seed, i));
        for (std::size_t k = 0; k < steps; ++k) {
            double* out = pn.increments.data() + (k * n + i) * dim;
            for (std::size_t c = 0; c < dim; ++c) out[c] = g.next() * sd;
        }
    }
    return pn;
}

/// Increments of the correlated pair-indexed Brownian motions together with
/// the center-of-mass stream. Each pair stream is standard (variance dt per
/// component); two pair streams covary as incidence_dot/2 per shared
/// component; the com stream is independent of the pair streams and
/// sqrt(N) * com is standard.
struct RelativeNoise {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::size_t steps = 0;
    double dt = 0.0;
    /// True when pair and com streams were built from one set of auxiliary
    /// i.i.d. particle streams, which yields the independence and
    /// covariation structure by construction rather than by calibration.
    bool independent_by_construction = false;
    std::vector<double> pair_increments; // steps x pair_count(n) x dim
    std::vector<double> com_increments;  // steps x dim

    std::size_t pairs() const noexcept { return n * (n - 1) / 2; }
    std::span<const double> pair_increment(std::size_t step, std::size_t rank) const {
        return {pair_increments.data() + (step * pairs() + rank) * dim, dim};
    }
    std::span<const double> pair_block(std::size_t step) const {
        return {pair_increments.data() + step * pairs() * dim, pairs() * dim};
    }
    std::span<const double> com_increment(std::size_t step) const {
        return {com_increments.data() + step * dim, dim};
    }
};

/// Derives the relative streams of a particle noise: per step,
/// pair (hi,lo) gets (dW^hi - dW^lo)/sqrt(2) and com gets the particle mean.
inline RelativeNoise derive_relative_noise(const ParticleNoise& pn) {
    const std::size_t n = pn.n, d = pn.dim, m = pair_count(n);
    RelativeNoise rn{n,    d,   pn.steps,
                     pn.dt, true, std::vector<double>(pn.steps * m * d),
                     std::vector<double>(pn.steps * d)};
    const auto pairs = enumerate_pairs(n);
    for (std::size_t k = 0; k < pn.steps; ++k) {
        const double* block = pn.increments.data() + k * n * d;
        double* out = rn.pair_increments.data() + k * m * d;
        for (std::size_t r = 0; r < m; ++r) {
            const double* hi = block + (static_cast<std::size_t>(pairs[r].hi) - 1) * d;
            const double* lo = block + (static_cast<std::size_t>(pairs[r].lo) - 1) * d;
            for (std::size_t c = 0; c < d; ++c) out[r * d + c] = (hi[c] - lo[c]) * detail::inv_sqrt2;
        }
        double* com = rn.com_increments.data() + k * d;
        for (std::size_t c = 0; c < d; ++c) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += block[i * d + c];
            com[c] = s / static_cast<double>(n);
        }
    }
    return rn;
}

/// Samples relative noise directly by building auxiliary i.i.d. particle
/// streams and deriving: this realizes the prescribed joint law exactly and
/// costs O(N d) per step, with no covariance factorization.
inline RelativeNoise sample_relative_noise(std::size_t n, std::size_t dim, double dt,
                                           std::size_t steps, std::uint64_t seed) {
    return derive_relative_noise(sample_particle_noise(n, dim, dt, steps, seed));
}

struct CovariationEntry {
    std::string left;  // stream label: r<hi>_<lo>[c] or com[c]
    std::string right;
    double estimate;
    double std_error;
    double reference;

    double zscore() const {
        if (std_error > 0.0) return (estimate - reference) / std_error;
        return estimate == reference ? 0.0 : std::numeric_limits<double>::infinity();
    }
};

struct CovariationReport {
    std::size_t steps = 0;
    double dt = 0.0;
    std::vector<CovariationEntry> entries;
    double max_abs_zscore = 0.0;

    bool within(double z) const { return max_abs_zscore <= z; }
};

/// Empirical covariation of every unordered pair of scalar streams
/// (all pair-stream components plus the com components), normalized per
/// unit time: mean over steps of dA * dB / dt, with the standard error of
/// that mean. References: incidence_dot/2 for two pair streams on the same
/// component, 1/N for the com stream against itself on the same component,
/// zero for every cross-component or pair-vs-com combination.
inline CovariationReport estimate_covariation(const RelativeNoise& rn) {
    if (rn.steps < 100)
        throw DimensionError("estimate_covariation requires at least 100 steps");
    const std::size_t m = rn.pairs(), d = rn.dim;
    const std::size_t scalar_streams = (m + 1) * d; // pair streams then com
    const auto pairs = enumerate_pairs(rn.n);

    auto label = [&](std::size_t s) {
        const std::size_t entity = s / d, c = s % d;
        if (entity < m)
            return "r" + std::to_string(pairs[entity].hi) + "_" + std::to_string(pairs[entity].lo) +
                   "[" + std::to_string(c) + "]";
        return "com[" + std::to_string(c) + "]";
    };
    auto value = [&](std::size_t s, std::size_t step) {
        const std::size_t entity = s / d, c = s % d;
        if (entity < m) return rn.pair_increments[(step * m + entity) * d + c];
        return rn.com_increments[step * d + c];
    };
    auto reference = [&](std::size_t s1, std::size_t s2) {
        const std::size_t e1 = s1 / d, c1 = s1 % d;
        const std::size_t e2 = s2 / d, c2 = s2 % d;
        if (c1 != c2) return 0.0;
        if (e1 < m && e2 < m) return incidence_dot(pairs[e1], pairs[e2]) / 2.0;
        if (e1 == m && e2 == m) return 1.0 / static_cast<double>(rn.n);
        return 0.0;
    };

    CovariationReport report{rn.steps, rn.dt, {}, 0.0};
    report.entries.reserve(scalar_streams * (scalar_streams + 1) / 2);
    for (std::size_t s1 = 0; s1 < scalar_streams; ++s1) {
        for (std::size_t s2 = s1; s2 < scalar_streams; ++s2) {
            // Welford accumulation of X_k = dA_k * dB_k / dt.
            double mean = 0.0, m2 = 0.0;
            for (std::size_t k = 0; k < rn.steps; ++k) {
                const double x = value(s1, k) * value(s2, k) / rn.dt;
                const double delta = x - mean;
                mean += delta / static_cast<double>(k + 1);
                m2 += delta * (x - mean);
            }
            const double var = m2 / static_cast<double>(rn.steps - 1);
            const double se = std::sqrt(var / static_cast<double>(rn.steps));
            CovariationEntry entry{label(s1), label(s2), mean, se, reference(s1, s2)};
            report.max_abs_zscore = std::max(report.max_abs_zscore, std::abs(entry.zscore()));
            report.entries.push_back(std::move(entry));
        }
    }
    return report;
}

} // namespace relmotion

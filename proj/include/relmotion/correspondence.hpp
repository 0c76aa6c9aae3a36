#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "relmotion/consistency.hpp"
#include "relmotion/detail.hpp"
#include "relmotion/errors.hpp"
#include "relmotion/sde.hpp"
#include "relmotion/transform.hpp"

namespace relmotion {

/// A particle trajectory expressed in relative coordinates: the full pair
/// family per step plus the center-of-mass path.
struct RelativeView {
    PathBundle pairs;
    PathBundle com;
};

/// Transforms a particle path stepwise into the full relative family and
/// the center of mass. An exploded input propagates its flag and truncation.
inline RelativeView particles_to_relative(const PathBundle& particles) {
    const std::size_t n = particles.entities, d = particles.dim;
    const auto pairs = enumerate_pairs(n);
    const std::size_t m = pairs.size();
    const std::size_t rows = particles.recorded_steps() + 1;

    RelativeView view{{particles.dt, m, d, particles.steps, {}, particles.exploded,
                       particles.explosion_step},
                      {particles.dt, 1, d, particles.steps, {}, particles.exploded,
                       particles.explosion_step}};
    view.pairs.states.resize(rows * m * d);
    view.com.states.resize(rows * d);
    for (std::size_t k = 0; k < rows; ++k) {
        const double* z = particles.states.data() + k * n * d;
        double* out = view.pairs.states.data() + k * m * d;
        for (std::size_t r = 0; r < m; ++r) {
            const double* hi = z + (static_cast<std::size_t>(pairs[r].hi) - 1) * d;
            const double* lo = z + (static_cast<std::size_t>(pairs[r].lo) - 1) * d;
            for (std::size_t c = 0; c < d; ++c) out[r * d + c] = (hi[c] - lo[c]) * detail::inv_sqrt2;
        }
        double* com = view.com.states.data() + k * d;
        for (std::size_t c = 0; c < d; ++c) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += z[i * d + c];
            com[c] = s / static_cast<double>(n);
        }
    }
    return view;
}

/// Transforms a whole run, deriving the relative noise alongside the states.
inline RelativeRun particles_to_relative(const ParticleRun& run) {
    auto view = particles_to_relative(run.path);
    return {std::move(view.pairs), std::move(view.com), derive_relative_noise(run.noise)};
}

/// Rebuilds the particle path from a relative path and a center-of-mass
/// path. Every step must be difference-consistent within tol (negative tol
/// selects the scale-aware default per step); the reconstruction then
/// matches every pair coordinate, not only the adjacent ones.
inline PathBundle reconstruct_particles(const PathBundle& pairs, const PathBundle& com,
                                        double tol = -1.0) {
    const std::size_t m = pairs.entities, d = pairs.dim;
    const std::size_t n = particles_for_pair_count(m);
    if (com.dim != d || com.entities != 1)
        throw DimensionError("center-of-mass path shape mismatch");
    const std::size_t rows = std::min(pairs.recorded_steps(), com.recorded_steps()) + 1;

    std::size_t explosion_step = 0;
    if (pairs.exploded && com.exploded)
        explosion_step = std::min(pairs.explosion_step, com.explosion_step);
    else if (pairs.exploded || com.exploded)
        explosion_step = pairs.exploded ? pairs.explosion_step : com.explosion_step;
    PathBundle out{pairs.dt, n, d, pairs.steps, {}, pairs.exploded || com.exploded,
                   explosion_step};
    out.states.reserve(rows * n * d);
    for (std::size_t k = 0; k < rows; ++k) {
        RelativeFamily f(n, d,
                         std::vector<double>(pairs.states.begin() + k * m * d,
                                             pairs.states.begin() + (k + 1) * m * d));
        const double step_tol = tol >= 0.0 ? tol : default_consistency_tolerance(f);
        const auto report = check_difference_consistency(f, step_tol);
        if (!report.ok)
            throw ConsistencyError("relative path is not difference-consistent at step " +
                                       std::to_string(k) + " (max violation " +
                                       std::to_string(report.max_violation) + ")",
                                   report.max_violation, k);
        const StateVector z = from_relative_coordinates(project_adjacent(f), com.state(k, 0));
        out.states.insert(out.states.end(), z.data().begin(), z.data().end());
    }
    return out;
}

struct DriftIdentityReport {
    double max_error;
};

/// Checks the drift identity behind the correspondence: scaled pairwise
/// differences of the particle drift must reproduce the relative drift of
/// the induced family with the same coefficients, for every pair.
inline DriftIdentityReport verify_drift_identity(const StateVector& z, const DriftSpec& a,
                                                 double t) {
    const RelativeFamily lhs = relative_family(drift_particles(z, a, t));
    const RelativeFamily rhs = drift_relative(relative_family(z), a, t);
    return {detail::max_abs_diff(lhs.data(), rhs.data())};
}

struct CorrespondenceReport {
    /// Worst deviation over steps, pairs and components between the
    /// transformed particle path and the directly simulated relative path.
    double max_residual = 0.0;
    /// Worst deviation between the particle center of mass and the
    /// driftless center-of-mass path.
    double com_residual = 0.0;
    /// Worst deviation of reconstruct(transform(particle path)) from the
    /// particle path itself.
    double roundtrip_residual = 0.0;
    bool particle_exploded = false;
    bool relative_exploded = false;
    std::size_t compared_steps = 0;
    /// Rounding-accumulation scale steps * N * eps * max |path|; the
    /// identity is exact in real arithmetic, so residuals should sit near
    /// this scale.
    double suggested_tolerance = 0.0;
};

/// Runs both simulations on shared noise - the particle system directly,
/// the relative system on the derived noise with the same drift
/// coefficients - and reports the pathwise residuals.
inline CorrespondenceReport verify_pathwise_correspondence(const StateVector& z0,
                                                           const DriftSpec& a,
                                                           ParticleNoise noise) {
    RelativeNoise rn = derive_relative_noise(noise);
    const std::size_t n = z0.size(), d = z0.dim();
    const ParticleRun prun = simulate_particles(z0, a, std::move(noise));
    const std::vector<double> com0 = center_of_mass(z0);
    const RelativeRun rrun = simulate_relative(relative_family(z0), com0, a, std::move(rn));

    CorrespondenceReport report;
    report.particle_exploded = prun.path.exploded;
    report.relative_exploded = rrun.pairs.exploded;
    report.compared_steps =
        std::min(prun.path.recorded_steps(), rrun.pairs.recorded_steps());

    const auto view = particles_to_relative(prun.path);
    for (std::size_t k = 0; k <= report.compared_steps; ++k) {
        report.max_residual =
            std::max(report.max_residual,
                     detail::max_abs_diff(view.pairs.state(k), rrun.pairs.state(k)));
        report.com_residual = std::max(
            report.com_residual, detail::max_abs_diff(view.com.state(k), rrun.com.state(k)));
    }

    const PathBundle rebuilt = reconstruct_particles(view.pairs, view.com);
    const std::size_t rebuilt_rows =
        std::min(rebuilt.recorded_steps(), prun.path.recorded_steps()) + 1;
    report.roundtrip_residual = detail::max_abs_diff(
        {prun.path.states.data(), rebuilt_rows * n * d},
        {rebuilt.states.data(), rebuilt_rows * n * d});

    report.suggested_tolerance = static_cast<double>(prun.path.recorded_steps()) *
                                 static_cast<double>(n) *
                                 std::numeric_limits<double>::epsilon() *
                                 std::max(1.0, detail::max_abs(prun.path.states));
    return report;
}

} // namespace relmotion

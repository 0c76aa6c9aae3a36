#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "relmotion/consistency.hpp"
#include "relmotion/detail.hpp"
#include "relmotion/errors.hpp"
#include "relmotion/noise.hpp"
#include "relmotion/pair_index.hpp"
#include "relmotion/state.hpp"

namespace relmotion {

/// What a drift coefficient may read at evaluation time: the unordered
/// pair, the current time, the step index, and the pair separation
/// z^hi - z^lo (recovered as sqrt(2) * value when the state lives in
/// relative coordinates). Coefficients see the present state only; this is
/// the adaptedness contract, and the struct is the extension point if
/// richer (history-dependent) evaluation is ever needed.
struct DriftQuery {
    IndexPair pair;
    double time;
    std::size_t step;
    std::span<const double> separation;

    double distance() const { return detail::l2_norm(separation); }
};

/// Symmetric pairwise drift coefficient. Symmetry is structural: a
/// coefficient exists per unordered pair only and is evaluated once per
/// pair per step, so a(i,j) == a(j,i) cannot be violated.
class DriftSpec {
public:
    enum class Kind { constant, kernel, time_varying, custom };
    using Callback = std::function<double(const DriftQuery&)>;

    static DriftSpec constant(double rate) {
        return DriftSpec(Kind::constant, [rate](const DriftQuery&) { return rate; });
    }

    /// Coefficient as a function of the separation distance |z^hi - z^lo|.
    static DriftSpec distance_kernel(std::function<double(double)> g) {
        return DriftSpec(Kind::kernel,
                         [g = std::move(g)](const DriftQuery& q) { return g(q.distance()); });
    }

    static DriftSpec time_varying(std::function<double(double)> h) {
        return DriftSpec(Kind::time_varying,
                         [h = std::move(h)](const DriftQuery& q) { return h(q.time); });
    }

    static DriftSpec custom(Callback cb) { return DriftSpec(Kind::custom, std::move(cb)); }

    Kind kind() const noexcept { return kind_; }

    double coefficient(const DriftQuery& q) const { return eval_(q); }

private:
    DriftSpec(Kind kind, Callback cb) : kind_(kind), eval_(std::move(cb)) {}

    Kind kind_;
    Callback eval_;
};

/// The pairs whose state enters the relative drift of pair p: p itself plus
/// every pair sharing exactly one label with p, in canonical order.
inline std::vector<IndexPair> contributing_pairs(const IndexPair& p, std::size_t n) {
    require_valid(p, n);
    std::vector<IndexPair> out;
    out.reserve(2 * n - 3);
    out.push_back(p);
    for (int k = 1; k <= static_cast<int>(n); ++k) {
        if (p.contains(k)) continue;
        out.push_back(unordered_pair(p.hi, k));
        out.push_back(unordered_pair(p.lo, k));
    }
    std::sort(out.begin(), out.end(),
              [](const IndexPair& a, const IndexPair& b) {
                  return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
              });
    return out;
}

namespace detail {

/// Evaluates the coefficient of every pair in canonical order, reading
/// separations from particle states. Returns false on a non-finite value.
inline bool particle_coefficients(const StateVector& z, const DriftSpec& a, double t,
                                  std::size_t step, std::span<const IndexPair> pairs,
                                  std::vector<double>& sep, std::vector<double>& out) {
    const std::size_t d = z.dim();
    sep.resize(d);
    out.resize(pairs.size());
    bool finite = true;
    for (std::size_t r = 0; r < pairs.size(); ++r) {
        const auto hi = z.point(static_cast<std::size_t>(pairs[r].hi) - 1);
        const auto lo = z.point(static_cast<std::size_t>(pairs[r].lo) - 1);
        for (std::size_t c = 0; c < d; ++c) sep[c] = hi[c] - lo[c];
        out[r] = a.coefficient({pairs[r], t, step, sep});
        finite = finite && std::isfinite(out[r]);
    }
    return finite;
}

/// Same, reading separations from a relative family as sqrt(2) * value.
inline bool relative_coefficients(const RelativeFamily& f, const DriftSpec& a, double t,
                                  std::size_t step, std::span<const IndexPair> pairs,
                                  std::vector<double>& sep, std::vector<double>& out) {
    const std::size_t d = f.dim();
    sep.resize(d);
    out.resize(pairs.size());
    bool finite = true;
    for (std::size_t r = 0; r < pairs.size(); ++r) {
        const auto v = f.value_at(r);
        for (std::size_t c = 0; c < d; ++c) sep[c] = sqrt2 * v[c];
        out[r] = a.coefficient({pairs[r], t, step, sep});
        finite = finite && std::isfinite(out[r]);
    }
    return finite;
}

/// Accumulates particle drifts from per-pair coefficients. Each pair
/// contributes the same term with opposite signs to its two endpoints, so
/// the drift sum over particles cancels pairwise.
inline void accumulate_particle_drift(const StateVector& z, std::span<const IndexPair> pairs,
                                      std::span<const double> coeff, std::span<double> drift) {
    const std::size_t d = z.dim();
    std::fill(drift.begin(), drift.end(), 0.0);
    for (std::size_t r = 0; r < pairs.size(); ++r) {
        const std::size_t hi = static_cast<std::size_t>(pairs[r].hi) - 1;
        const std::size_t lo = static_cast<std::size_t>(pairs[r].lo) - 1;
        const auto zh = z.point(hi);
        const auto zl = z.point(lo);
        for (std::size_t c = 0; c < d; ++c) {
            const double term = coeff[r] * (zh[c] - zl[c]);
            drift[hi * d + c] -= term;
            drift[lo * d + c] += term;
        }
    }
}

/// Precomputed sparsity of the relative drift: for each target pair, the
/// (rank, incidence dot) of every contributing pair in canonical order.
struct RelativeDriftPlan {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<std::size_t, int>>> terms;

    explicit RelativeDriftPlan(std::size_t n_) : n(n_) {
        const auto pairs = enumerate_pairs(n);
        terms.resize(pairs.size());
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            for (const auto& q : contributing_pairs(pairs[i], n)) {
                const int dot = incidence_dot(pairs[i], q);
                terms[i].emplace_back(pair_rank(q, n), dot);
            }
        }
    }
};

/// drift(p) = -sum over contributing q of incidence_dot(p, q) * a_q * value(q).
inline void accumulate_relative_drift(const RelativeFamily& f, const RelativeDriftPlan& plan,
                                      std::span<const double> coeff, std::span<double> drift) {
    const std::size_t d = f.dim();
    std::fill(drift.begin(), drift.end(), 0.0);
    for (std::size_t i = 0; i < plan.terms.size(); ++i) {
        double* out = drift.data() + i * d;
        for (const auto& [rank, dot] : plan.terms[i]) {
            const double w = -static_cast<double>(dot) * coeff[rank];
            const auto v = f.value_at(rank);
            for (std::size_t c = 0; c < d; ++c) out[c] += w * v[c];
        }
    }
}

} // namespace detail

/// Pairwise attraction drift of the particle system:
/// drift^i = -sum_{j != i} a(i,j) (z^i - z^j).
inline StateVector drift_particles(const StateVector& z, const DriftSpec& a, double t,
                                   std::size_t step = 0) {
    const auto pairs = enumerate_pairs(z.size());
    std::vector<double> sep, coeff;
    if (!detail::particle_coefficients(z, a, t, step, pairs, sep, coeff))
        throw EvaluationError("drift coefficient evaluated to a non-finite value");
    StateVector out(z.size(), z.dim());
    detail::accumulate_particle_drift(z, pairs, coeff, out.data());
    return out;
}

/// Incidence-weighted drift of the relative system:
/// drift(p) = -sum_q incidence_dot(p, q) a_q value(q), visiting only the
/// pairs that share a label with p.
inline RelativeFamily drift_relative(const RelativeFamily& f, const DriftSpec& a, double t,
                                     std::size_t step = 0) {
    const auto pairs = enumerate_pairs(f.n());
    std::vector<double> sep, coeff;
    if (!detail::relative_coefficients(f, a, t, step, pairs, sep, coeff))
        throw EvaluationError("drift coefficient evaluated to a non-finite value");
    const detail::RelativeDriftPlan plan(f.n());
    RelativeFamily out(f.n(), f.dim());
    detail::accumulate_relative_drift(f, plan, coeff, out.data());
    return out;
}

/// Dense trajectory on the uniform grid t_k = k * dt. Rows hold
/// entities x dim states per recorded step. When a run explodes
/// (non-finite drift or state), the path is truncated after the last finite
/// state and explosion_step records the offending transition; runs are
/// never silently continued.
struct PathBundle {
    double dt = 0.0;
    std::size_t entities = 0;
    std::size_t dim = 0;
    std::size_t steps = 0; // increments requested; recorded_steps() < steps after explosion
    std::vector<double> states;
    bool exploded = false;
    std::size_t explosion_step = 0;

    std::size_t recorded_steps() const { return states.size() / (entities * dim) - 1; }
    double time(std::size_t step) const { return static_cast<double>(step) * dt; }

    std::span<const double> state(std::size_t step) const {
        return {states.data() + step * entities * dim, entities * dim};
    }
    std::span<double> state(std::size_t step) {
        return {states.data() + step * entities * dim, entities * dim};
    }
    std::span<const double> state(std::size_t step, std::size_t entity) const {
        return {states.data() + (step * entities + entity) * dim, dim};
    }
};

struct ParticleRun {
    PathBundle path;
    ParticleNoise noise;
};

/// Explicit Euler scheme for the particle system:
/// Z_{k+1} = Z_k + drift(Z_k, t_k) dt + dW_k. Deterministic given
/// (z0, drift, noise); the per-pair evaluation and canonical summation
/// order make repeated runs bitwise identical.
inline ParticleRun simulate_particles(const StateVector& z0, const DriftSpec& a,
                                      ParticleNoise noise) {
    const std::size_t n = z0.size(), d = z0.dim();
    if (noise.n != n || noise.dim != d)
        throw DimensionError("noise shape does not match the initial state");

    PathBundle path{noise.dt, n, d, noise.steps, {}, false, 0};
    path.states.reserve((noise.steps + 1) * n * d);
    path.states.insert(path.states.end(), z0.data().begin(), z0.data().end());
    if (!detail::all_finite(z0.data())) {
        path.exploded = true;
        path.explosion_step = 0;
        return {std::move(path), std::move(noise)};
    }

    const auto pairs = enumerate_pairs(n);
    StateVector cur = z0;
    std::vector<double> sep, coeff, drift(n * d), next(n * d);
    for (std::size_t k = 0; k < noise.steps; ++k) {
        const bool ok =
            detail::particle_coefficients(cur, a, path.time(k), k, pairs, sep, coeff);
        if (ok) detail::accumulate_particle_drift(cur, pairs, coeff, drift);
        bool finite = ok;
        if (ok) {
            const double* dw = noise.increments.data() + k * n * d;
            for (std::size_t j = 0; j < n * d; ++j) {
                next[j] = cur.data()[j] + drift[j] * noise.dt + dw[j];
                finite = finite && std::isfinite(next[j]);
            }
        }
        if (!finite) {
            path.exploded = true;
            path.explosion_step = k;
            break;
        }
        path.states.insert(path.states.end(), next.begin(), next.end());
        std::copy(next.begin(), next.end(), cur.data().begin());
    }
    return {std::move(path), std::move(noise)};
}

struct RelativeRun {
    PathBundle pairs;
    PathBundle com; // single driftless entity: com_0 + cumulative com noise
    RelativeNoise noise;
};

/// Explicit Euler scheme for the relative system, plus the driftless
/// center-of-mass path. The initial family must be difference-consistent
/// (pass a negative tol to use the scale-aware default); with consistent
/// noise the state then stays difference-consistent at every step up to
/// rounding.
inline RelativeRun simulate_relative(const RelativeFamily& f0, std::span<const double> com0,
                                     const DriftSpec& a, RelativeNoise noise,
                                     double consistency_tol = -1.0) {
    const std::size_t n = f0.n(), d = f0.dim(), m = f0.pairs();
    if (noise.n != n || noise.dim != d)
        throw DimensionError("noise shape does not match the initial family");
    if (com0.size() != d) throw DimensionError("center-of-mass dimension mismatch");
    const double tol =
        consistency_tol >= 0.0 ? consistency_tol : default_consistency_tolerance(f0);
    const auto initial = check_difference_consistency(f0, tol);
    if (!initial.ok)
        throw ConsistencyError("initial family is not difference-consistent (max violation " +
                                   std::to_string(initial.max_violation) + ")",
                               initial.max_violation, 0);

    PathBundle pairs_path{noise.dt, m, d, noise.steps, {}, false, 0};
    pairs_path.states.reserve((noise.steps + 1) * m * d);
    pairs_path.states.insert(pairs_path.states.end(), f0.data().begin(), f0.data().end());
    PathBundle com_path{noise.dt, 1, d, noise.steps, {}, false, 0};
    com_path.states.reserve((noise.steps + 1) * d);
    com_path.states.insert(com_path.states.end(), com0.begin(), com0.end());

    if (!detail::all_finite(f0.data()) || !detail::all_finite(com0)) {
        pairs_path.exploded = com_path.exploded = true;
        pairs_path.explosion_step = com_path.explosion_step = 0;
        return {std::move(pairs_path), std::move(com_path), std::move(noise)};
    }

    const auto pairs = enumerate_pairs(n);
    const detail::RelativeDriftPlan plan(n);
    RelativeFamily cur = f0;
    std::vector<double> com(com0.begin(), com0.end());
    std::vector<double> sep, coeff, drift(m * d), next(m * d), next_com(d);
    for (std::size_t k = 0; k < noise.steps; ++k) {
        const bool ok =
            detail::relative_coefficients(cur, a, pairs_path.time(k), k, pairs, sep, coeff);
        if (ok) detail::accumulate_relative_drift(cur, plan, coeff, drift);
        bool finite = ok;
        if (ok) {
            const double* dw = noise.pair_increments.data() + k * m * d;
            for (std::size_t j = 0; j < m * d; ++j) {
                next[j] = cur.data()[j] + drift[j] * noise.dt + dw[j];
                finite = finite && std::isfinite(next[j]);
            }
            const double* dc = noise.com_increments.data() + k * d;
            for (std::size_t c = 0; c < d; ++c) {
                next_com[c] = com[c] + dc[c];
                finite = finite && std::isfinite(next_com[c]);
            }
        }
        if (!finite) {
            pairs_path.exploded = com_path.exploded = true;
            pairs_path.explosion_step = com_path.explosion_step = k;
            break;
        }
        pairs_path.states.insert(pairs_path.states.end(), next.begin(), next.end());
        com_path.states.insert(com_path.states.end(), next_com.begin(), next_com.end());
        std::copy(next.begin(), next.end(), cur.data().begin());
        com = next_com;
    }
    return {std::move(pairs_path), std::move(com_path), std::move(noise)};
}

} // namespace relmotion

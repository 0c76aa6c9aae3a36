// Acceptance suite: runs every release criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "relmotion/relmotion.hpp"

using namespace relmotion;

namespace {

std::string human(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

struct Outcome {
    bool pass;
    std::string detail;
};

// Shared runs: criterion 6 re-examines the class-[N] simulations of
// criterion 5.
struct SharedRuns {
    std::optional<ParticleRun> constant_run;
    std::optional<ParticleRun> kernel_run;
};

Outcome criterion_inverse() {
    double worst = 0.0;
    for (std::size_t n = 2; n <= 64; ++n) {
        const auto r = verify_coordinate_inverse(n);
        worst = std::max(worst, r.max_abs_error);
        if (!r.exact_integer_identity)
            return {false, "integer identity failed at N=" + std::to_string(n)};
    }
    return {worst <= 1e-12,
            "exact integer identity N=2..64; max |R R^-1 - Id| = " + human(worst) + " (<= 1e-12)"};
}

Outcome criterion_roundtrip() {
    GaussianStream g(424242);
    double worst_state = 0.0, worst_recovered = 0.0, worst_pairs = 0.0;
    for (int draw = 0; draw < 1000; ++draw) {
        const std::size_t n = 2 + static_cast<std::size_t>(g.uniform() * 31.0);
        const std::size_t d = 1 + static_cast<std::size_t>(g.uniform() * 8.0);
        StateVector z(n, d);
        for (double& x : z.data()) x = 10.0 * (2.0 * g.uniform() - 1.0);

        const auto split = to_relative_coordinates(z);
        const StateVector back = from_relative_coordinates(split.adjacent, split.com);
        worst_state = std::max(worst_state, detail::max_abs_diff(back.data(), z.data()));

        const RelativeFamily f = relative_family(z);
        const StateVector rec = recover_states(f, center_of_mass(z), 1e-9);
        worst_recovered = std::max(worst_recovered, detail::max_abs_diff(rec.data(), z.data()));
        const RelativeFamily f2 = relative_family(rec);
        worst_pairs = std::max(worst_pairs, detail::max_abs_diff(f2.data(), f.data()));
    }
    const bool pass = worst_state <= 1e-12 && worst_recovered <= 1e-12 && worst_pairs <= 1e-12;
    return {pass, "1000 draws (N<=32, d<=8): split/join " + human(worst_state) +
                      ", recover " + human(worst_recovered) + ", all-pair match " +
                      human(worst_pairs) + " (<= 1e-12)"};
}

Outcome criterion_consistency() {
    GaussianStream g(777);
    double worst_induced = 0.0, worst_mapped = 0.0, worst_gap = 0.0;
    for (int draw = 0; draw < 400; ++draw) {
        const std::size_t n = 3 + static_cast<std::size_t>(g.uniform() * 6.0);
        const std::size_t d = 1 + static_cast<std::size_t>(g.uniform() * 3.0);
        StateVector z(n, d);
        for (double& x : z.data()) x = 10.0 * (2.0 * g.uniform() - 1.0);
        const RelativeFamily f = relative_family(z);
        worst_induced =
            std::max(worst_induced, check_difference_consistency(f, 1e-12).max_violation);

        RelativeFamily p(n, d);
        for (double& x : p.data()) x = 10.0 * (2.0 * g.uniform() - 1.0);
        worst_mapped = std::max(
            worst_mapped, check_difference_consistency(incidence_map(p), 1e-12).max_violation);

        RelativeFamily perturbed = f;
        const double eps = 1e-3 + g.uniform();
        const std::size_t rank =
            std::min(static_cast<std::size_t>(g.uniform() * static_cast<double>(f.pairs())),
                     f.pairs() - 1);
        perturbed.value_at(rank)[0] += eps;
        const auto rep = check_difference_consistency(perturbed, 1e-12);
        if (rep.ok) return {false, "perturbed family passed the check"};
        worst_gap = std::max(worst_gap, std::abs(rep.max_violation - eps));
    }
    const bool pass = worst_induced <= 1e-12 && worst_mapped <= 1e-12 && worst_gap <= 1e-12;
    return {pass, "induced " + human(worst_induced) + ", incidence-mapped " + human(worst_mapped) +
                      ", perturbation gap " + human(worst_gap) + " (<= 1e-12)"};
}

Outcome criterion_drift_identity() {
    GaussianStream g(31337);
    double worst = 0.0;
    for (int draw = 0; draw < 1000; ++draw) {
        const std::size_t n = 2 + static_cast<std::size_t>(g.uniform() * 7.0);
        const std::size_t d = 1 + static_cast<std::size_t>(g.uniform() * 3.0);
        StateVector z(n, d);
        for (double& x : z.data()) x = 2.0 * (2.0 * g.uniform() - 1.0);

        DriftSpec drift = DriftSpec::constant(0.0);
        if (draw % 2 == 0) {
            // random symmetric per-pair coefficient table in [-1, 1]
            const std::uint64_t table_seed = derive_stream_seed(99, static_cast<std::uint64_t>(draw));
            drift = DriftSpec::custom([table_seed, n](const DriftQuery& q) {
                const std::uint64_t h = derive_stream_seed(table_seed, pair_rank(q.pair, n));
                return 2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0;
            });
        } else {
            const double lambda = 2.0 * g.uniform() - 1.0;
            drift = DriftSpec::distance_kernel(
                [lambda](double r) { return lambda / (1.0 + r * r); });
        }
        worst = std::max(worst, verify_drift_identity(z, drift, g.uniform()).max_error);
    }

    for (std::size_t n = 2; n <= 8; ++n) {
        const auto pairs = enumerate_pairs(n);
        for (const auto& p : pairs) {
            std::vector<IndexPair> brute;
            for (const auto& q : pairs)
                if (incidence_dot(p, q) != 0) brute.push_back(q);
            if (contributing_pairs(p, n) != brute)
                return {false, "contributing-pair enumeration mismatch at N=" + std::to_string(n)};
        }
    }
    return {worst <= 1e-12, "1000 draws (N in 2..8): max drift mismatch " + human(worst) +
                                " (<= 1e-12); contributing sets exact for N<=8"};
}

Outcome criterion_correspondence(SharedRuns& shared) {
    const std::size_t n = 5, d = 2, steps = 10000;
    const double dt = 1e-3;
    GaussianStream g(5150);
    StateVector z0(n, d);
    for (double& x : z0.data()) x = 2.0 * g.uniform() - 1.0;

    struct Config {
        const char* name;
        DriftSpec drift;
    };
    const Config configs[2] = {
        {"constant", DriftSpec::constant(0.7)},
        {"kernel", DriftSpec::distance_kernel([](double r) { return 1.0 / (1.0 + r * r); })},
    };

    double worst_residual = 0.0, worst_roundtrip = 0.0;
    for (int c = 0; c < 2; ++c) {
        auto noise = sample_particle_noise(n, d, dt, steps, 6000 + static_cast<std::uint64_t>(c));
        RelativeNoise rn = derive_relative_noise(noise);
        ParticleRun prun = simulate_particles(z0, configs[c].drift, std::move(noise));
        const RelativeRun rrun =
            simulate_relative(relative_family(z0), center_of_mass(z0), configs[c].drift,
                              std::move(rn));
        if (prun.path.exploded || rrun.pairs.exploded)
            return {false, std::string(configs[c].name) + " run exploded"};

        const auto view = particles_to_relative(prun.path);
        for (std::size_t k = 0; k <= steps; ++k)
            worst_residual = std::max(
                worst_residual, detail::max_abs_diff(view.pairs.state(k), rrun.pairs.state(k)));

        const PathBundle rebuilt = reconstruct_particles(view.pairs, view.com);
        worst_roundtrip = std::max(
            worst_roundtrip, detail::max_abs_diff(rebuilt.states, prun.path.states));

        (c == 0 ? shared.constant_run : shared.kernel_run).emplace(std::move(prun));
    }
    const bool pass = worst_residual <= 1e-8 && worst_roundtrip <= 1e-12;
    return {pass, "N=5 d=2 dt=1e-3 1e4 steps: max residual " + human(worst_residual) +
                      " (<= 1e-8), reconstruction " + human(worst_roundtrip) + " (<= 1e-12)"};
}

Outcome criterion_center_of_mass(const SharedRuns& shared) {
    if (!shared.constant_run || !shared.kernel_run)
        return {false, "correspondence runs unavailable"};
    double worst = 0.0;
    for (const ParticleRun* run : {&*shared.constant_run, &*shared.kernel_run}) {
        const std::size_t n = run->path.entities, d = run->path.dim;
        for (std::size_t k = 0; k < run->path.recorded_steps(); ++k) {
            for (std::size_t c = 0; c < d; ++c) {
                double before = 0.0, after = 0.0, dw = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    before += run->path.state(k, i)[c];
                    after += run->path.state(k + 1, i)[c];
                    dw += run->noise.increment(k, i)[c];
                }
                const double nn = static_cast<double>(n);
                worst = std::max(worst, std::abs(after / nn - before / nn - dw / nn));
            }
        }
    }
    return {worst <= 1e-13,
            "per-step drift contribution to the com: max " + human(worst) + " (<= 1e-13)"};
}

Outcome criterion_covariation() {
    const auto rn = sample_relative_noise(4, 2, 1e-3, 200000, 909090);
    const auto report = estimate_covariation(rn);
    std::string worst_entry;
    double worst = 0.0;
    for (const auto& e : report.entries) {
        if (std::abs(e.zscore()) >= worst) {
            worst = std::abs(e.zscore());
            worst_entry = e.left + " x " + e.right;
        }
    }
    return {report.within(4.0), "N=4 d=2 2e5 increments, " +
                                    std::to_string(report.entries.size()) +
                                    " entries: max |z| = " + human(worst) + " at " + worst_entry +
                                    " (<= 4 SE)"};
}

Outcome criterion_ou_variance() {
    // Constant rate 0.5 makes every pair coordinate an OU process with
    // reversion N * 0.5 = 1.5 and stationary variance 1/(2 N lambda) = 1/3.
    const std::size_t n = 3, steps = 1000000;
    const double lambda = 0.5, dt = 1e-2;
    const RelativeFamily f0(n, 1);
    const std::vector<double> com0{0.0};
    const auto run = simulate_relative(f0, com0, DriftSpec::constant(lambda),
                                       sample_relative_noise(n, 1, dt, steps, 112233));
    if (run.pairs.exploded) return {false, "run exploded"};

    const std::size_t burn = steps / 5;
    const double target = 1.0 / (2.0 * static_cast<double>(n) * lambda);
    double worst_rel = 0.0;
    std::ostringstream detail_txt;
    for (std::size_t r = 0; r < pair_count(n); ++r) {
        double sum = 0.0, sumsq = 0.0;
        const std::size_t count = steps + 1 - burn;
        for (std::size_t k = burn; k <= steps; ++k) {
            const double x = run.pairs.state(k, r)[0];
            sum += x;
            sumsq += x * x;
        }
        const double mean = sum / static_cast<double>(count);
        const double var = sumsq / static_cast<double>(count) - mean * mean;
        worst_rel = std::max(worst_rel, std::abs(var - target) / target);
        detail_txt << (r ? ", " : "") << human(var);
    }
    return {worst_rel <= 0.05, "1e6 steps, dt=1e-2: variances (" + detail_txt.str() +
                                   ") vs 1/3, worst deviation " + human(100.0 * worst_rel) +
                                   "% (<= 5%)"};
}

} // namespace

int main() {
    SharedRuns shared;
    struct Criterion {
        int number;
        const char* name;
        double limit_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "inverse-formula", 5.0, criterion_inverse},
        {2, "round-trip-transforms", 10.0, criterion_roundtrip},
        {3, "difference-consistency", 5.0, criterion_consistency},
        {4, "drift-identity", 10.0, criterion_drift_identity},
        {5, "pathwise-correspondence", 30.0, [&] { return criterion_correspondence(shared); }},
        {6, "center-of-mass", 30.0, [&] { return criterion_center_of_mass(shared); }},
        {7, "covariation-structure", 60.0, criterion_covariation},
        {8, "ou-stationary-variance", 60.0, criterion_ou_variance},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome outcome{false, "exception"};
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = seconds < c.limit_seconds;
        const bool pass = outcome.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("[%s] %d %s: %s [%.2f s, limit %.0f s]\n", pass ? "PASS" : "FAIL", c.number,
                    c.name, outcome.detail.c_str(), seconds, c.limit_seconds);
        std::fflush(stdout);
    }
    std::printf("%s: %d/%zu criteria passed\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}

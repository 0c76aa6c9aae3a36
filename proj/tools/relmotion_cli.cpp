// Command-line front end: seeded simulation of both SDE classes, stepwise
// coordinate transforms of trajectory files, and the built-in verification
// suites. Exit codes: 0 success, 1 failed verification check, 2 usage or
// config error, 3 explosion / inconsistency (with step index), 4 I/O failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "relmotion/relmotion.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRun = 3;
constexpr int kExitIo = 4;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid " + what + ": '" + s + "'");
    }
}

// Drift specs: constant:<rate> | kernel:cauchy[:scale] | kernel:gaussian[:scale]
//            | timevary:cosine:<amp>:<omega> | timevary:decay:<amp>:<rate>
relmotion::DriftSpec parse_drift(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts[0] == "constant" && parts.size() == 2)
        return relmotion::DriftSpec::constant(parse_number(parts[1], "drift rate"));
    if (parts[0] == "kernel" && (parts.size() == 2 || parts.size() == 3)) {
        const double scale = parts.size() == 3 ? parse_number(parts[2], "kernel scale") : 1.0;
        if (!(scale > 0.0)) throw std::invalid_argument("kernel scale must be positive");
        if (parts[1] == "cauchy")
            return relmotion::DriftSpec::distance_kernel(
                [scale](double r) { return 1.0 / (1.0 + (r / scale) * (r / scale)); });
        if (parts[1] == "gaussian")
            return relmotion::DriftSpec::distance_kernel(
                [scale](double r) { return std::exp(-(r / scale) * (r / scale)); });
        throw std::invalid_argument("unknown kernel '" + parts[1] + "'");
    }
    if (parts[0] == "timevary" && parts.size() == 4) {
        const double a = parse_number(parts[2], "amplitude");
        const double b = parse_number(parts[3], "parameter");
        if (parts[1] == "cosine")
            return relmotion::DriftSpec::time_varying([a, b](double t) { return a * std::cos(b * t); });
        if (parts[1] == "decay")
            return relmotion::DriftSpec::time_varying([a, b](double t) { return a * std::exp(-b * t); });
        throw std::invalid_argument("unknown time-varying drift '" + parts[1] + "'");
    }
    throw std::invalid_argument("unrecognized drift spec '" + spec + "'");
}

std::vector<double> parse_inline_values(const std::string& csv) {
    std::vector<double> out;
    for (const auto& tok : split(csv, ',')) out.push_back(parse_number(tok, "initial value"));
    return out;
}

std::vector<double> read_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        // allow comma or whitespace separation
        for (const auto& piece : split(tok, ','))
            if (!piece.empty()) out.push_back(parse_number(piece, "initial value"));
    }
    return out;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
    std::string cls = "particles";
    std::size_t n = 0;
    std::size_t dim = 1;
    double dt = 0.0;
    std::size_t steps = 0;
    std::uint64_t seed = 0;
    std::string drift = "constant:0";
    std::string initial_inline;
    std::string initial_file;
    std::string com0_inline;
    std::string out_path;
};

int run_simulate(const SimulateOptions& opt) {
    using namespace relmotion;
    DriftSpec drift = DriftSpec::constant(0.0);
    std::vector<double> initial;
    try {
        drift = parse_drift(opt.drift);
        if (!opt.initial_inline.empty() && !opt.initial_file.empty())
            throw std::invalid_argument("--initial and --initial-file are mutually exclusive");
        if (!opt.initial_inline.empty()) initial = parse_inline_values(opt.initial_inline);
        if (!opt.initial_file.empty()) initial = read_value_file(opt.initial_file);
    } catch (const std::runtime_error& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return kExitUsage;
    }

    const auto t0 = std::chrono::steady_clock::now();
    PathBundle* main_path = nullptr;
    std::vector<double> final_com;
    std::ofstream out(opt.out_path);
    if (!out) {
        std::cerr << "error: io: cannot open '" << opt.out_path << "' for writing\n";
        return kExitIo;
    }

    ParticleRun prun;
    RelativeRun rrun;
    const bool user_initial = !opt.initial_inline.empty() || !opt.initial_file.empty();
    try {
        if (opt.cls == "particles") {
            const std::size_t want = opt.n * opt.dim;
            if (!user_initial) initial.assign(want, 0.0);
            if (initial.size() != want)
                throw std::invalid_argument("initial state needs n*dim = " +
                                            std::to_string(want) + " values, got " +
                                            std::to_string(initial.size()));
            StateVector z0(opt.n, opt.dim, std::move(initial));
            prun = simulate_particles(
                z0, drift, sample_particle_noise(opt.n, opt.dim, opt.dt, opt.steps, opt.seed));
            write_particles_csv(out, prun.path);
            main_path = &prun.path;
            const std::size_t last = prun.path.recorded_steps();
            StateVector final_state(opt.n, opt.dim,
                                    std::vector<double>(prun.path.state(last).begin(),
                                                        prun.path.state(last).end()));
            final_com = center_of_mass(final_state);
        } else {
            const std::size_t want = pair_count(opt.n) * opt.dim;
            if (!user_initial) initial.assign(want, 0.0);
            if (initial.size() != want)
                throw std::invalid_argument("initial family needs pair_count(n)*dim = " +
                                            std::to_string(want) + " values, got " +
                                            std::to_string(initial.size()));
            std::vector<double> com0(opt.dim, 0.0);
            if (!opt.com0_inline.empty()) {
                com0 = parse_inline_values(opt.com0_inline);
                if (com0.size() != opt.dim)
                    throw std::invalid_argument("--com0 needs dim values");
            }
            RelativeFamily f0(opt.n, opt.dim, std::move(initial));
            rrun = simulate_relative(
                f0, com0, drift,
                sample_relative_noise(opt.n, opt.dim, opt.dt, opt.steps, opt.seed));
            write_relative_csv(out, rrun.pairs, &rrun.com);
            main_path = &rrun.pairs;
            const std::size_t last = rrun.com.recorded_steps();
            final_com.assign(rrun.com.state(last, 0).begin(), rrun.com.state(last, 0).end());
        }
    } catch (const ConsistencyError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DimensionError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return kExitUsage;
    }
    out.flush();
    if (!out) {
        std::cerr << "error: io: failed writing '" << opt.out_path << "'\n";
        return kExitIo;
    }

    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    std::cout << "wrote " << opt.out_path << " (class=" << opt.cls << " n=" << opt.n
              << " dim=" << opt.dim << " steps=" << opt.steps << " dt=" << opt.dt
              << " seed=" << opt.seed << ")\n";
    std::cout << "final com =";
    for (double c : final_com) std::cout << ' ' << c;
    std::cout << "\nexploded = " << (main_path->exploded ? "yes" : "no");
    if (main_path->exploded) std::cout << " (step " << main_path->explosion_step << ")";
    std::cout << "\nwall time = " << elapsed << " ms\n";
    if (main_path->exploded) {
        std::cerr << "error: run: exploded at step " << main_path->explosion_step << "\n";
        return kExitRun;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// transform

struct TransformOptions {
    std::string in_path;
    std::string out_path;
    std::string direction;
    std::string com_path;
    double tol = -1.0;
};

int run_transform(const TransformOptions& opt) {
    using namespace relmotion;
    std::ifstream in(opt.in_path);
    if (!in) {
        std::cerr << "error: io: cannot open '" << opt.in_path << "'\n";
        return kExitIo;
    }
    Trajectory traj;
    try {
        traj = read_trajectory_csv(in);
    } catch (const ParseError& e) {
        std::cerr << "error: parse: " << e.what() << "\n";
        return kExitUsage;
    }

    std::ofstream out(opt.out_path);
    if (!out) {
        std::cerr << "error: io: cannot open '" << opt.out_path << "' for writing\n";
        return kExitIo;
    }

    try {
        if (opt.direction == "to-relative") {
            if (traj.kind != TrajectoryKind::particles) {
                std::cerr << "error: usage: to-relative expects a particle trajectory\n";
                return kExitUsage;
            }
            const RelativeView view = particles_to_relative(traj.states);
            write_relative_csv(out, view.pairs, &view.com);
        } else {
            if (traj.kind != TrajectoryKind::relative) {
                std::cerr << "error: usage: to-particles expects a relative trajectory\n";
                return kExitUsage;
            }
            PathBundle com;
            if (!opt.com_path.empty()) {
                std::ifstream com_in(opt.com_path);
                if (!com_in) {
                    std::cerr << "error: io: cannot open '" << opt.com_path << "'\n";
                    return kExitIo;
                }
                Trajectory com_traj = read_trajectory_csv(com_in);
                if (com_traj.kind == TrajectoryKind::com_only)
                    com = std::move(com_traj.states);
                else if (com_traj.kind == TrajectoryKind::relative && com_traj.com)
                    com = std::move(*com_traj.com);
                else {
                    std::cerr << "error: usage: --com file carries no com entity\n";
                    return kExitUsage;
                }
            } else if (traj.com) {
                com = std::move(*traj.com);
            } else {
                std::cerr << "error: usage: to-particles needs a com path (embedded or --com)\n";
                return kExitUsage;
            }
            const PathBundle particles = reconstruct_particles(traj.states, com, opt.tol);
            write_particles_csv(out, particles);
        }
    } catch (const ConsistencyError& e) {
        std::cerr << "error: run: " << e.what() << "\n";
        return kExitRun;
    } catch (const ParseError& e) {
        std::cerr << "error: parse: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DimensionError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return kExitUsage;
    }
    out.flush();
    if (!out) {
        std::cerr << "error: io: failed writing '" << opt.out_path << "'\n";
        return kExitIo;
    }
    std::cout << "wrote " << opt.out_path << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
    std::vector<std::pair<std::string, std::string>> metrics;
};

struct VerifyOptions {
    std::string suite;
    std::size_t n_max = 0;   // 0 -> suite default
    std::size_t n = 0;       // 0 -> suite default
    std::size_t dim = 2;
    double dt = 1e-3;
    std::size_t steps = 0;   // 0 -> suite default
    std::uint64_t seed = 20240901;
    double tol = -1.0;       // <0 -> suite default
    std::size_t draws = 200;
    std::size_t replicates = 1;
    std::size_t threads = 1;
    std::string report_path;
};

std::string fmt(double x) { return relmotion::format_double(x); }

std::vector<CheckResult> verify_inverse_suite(const VerifyOptions& opt) {
    using namespace relmotion;
    const std::size_t n_max = opt.n_max ? opt.n_max : 64;
    const double tol = opt.tol >= 0.0 ? opt.tol : 1e-12;
    double worst = 0.0;
    bool all_exact = true;
    std::size_t first_bad = 0;
    for (std::size_t n = 2; n <= n_max; ++n) {
        const auto r = verify_coordinate_inverse(n);
        worst = std::max(worst, r.max_abs_error);
        if (!r.exact_integer_identity && all_exact) {
            all_exact = false;
            first_bad = n;
        }
    }
    std::vector<CheckResult> out;
    out.push_back({"inverse.exact-integer-identity", all_exact,
                   all_exact ? "Q * (N*M) = N*Id for N=2.." + std::to_string(n_max)
                             : "first failure at N=" + std::to_string(first_bad),
                   {{"n_max", std::to_string(n_max)}}});
    out.push_back({"inverse.float-identity", worst <= tol,
                   "max |R R^-1 - Id| = " + fmt(worst) + " (tol " + fmt(tol) + ")",
                   {{"max_abs_error", fmt(worst)}, {"tol", fmt(tol)}}});
    return out;
}

std::vector<CheckResult> verify_consistency_suite(const VerifyOptions& opt) {
    using namespace relmotion;
    const std::size_t n_max = std::max<std::size_t>(3, opt.n_max ? opt.n_max : 8);
    const double tol = opt.tol >= 0.0 ? opt.tol : 1e-12;
    GaussianStream g(derive_stream_seed(opt.seed, 17));

    double worst_induced = 0.0, worst_mapped = 0.0, worst_perturb_gap = 0.0;
    for (std::size_t n = 2; n <= n_max; ++n) {
        for (std::size_t draw = 0; draw < opt.draws; ++draw) {
            const std::size_t d = 1 + static_cast<std::size_t>(g.uniform() * 3.0);
            StateVector z(n, d);
            for (double& x : z.data()) x = 10.0 * (2.0 * g.uniform() - 1.0);
            const RelativeFamily f = relative_family(z);
            worst_induced =
                std::max(worst_induced, check_difference_consistency(f, tol).max_violation);

            if (n >= 3) {
                RelativeFamily p(n, d);
                for (double& x : p.data()) x = 10.0 * (2.0 * g.uniform() - 1.0);
                const RelativeFamily q = incidence_map(p);
                worst_mapped =
                    std::max(worst_mapped, check_difference_consistency(q, tol).max_violation);

                RelativeFamily perturbed = f;
                const double eps = 1e-3;
                const std::size_t rank =
                    static_cast<std::size_t>(g.uniform() * static_cast<double>(f.pairs()));
                perturbed.value_at(std::min(rank, f.pairs() - 1))[0] += eps;
                const auto rep = check_difference_consistency(perturbed, tol);
                worst_perturb_gap =
                    std::max(worst_perturb_gap, std::abs(rep.max_violation - eps));
            }
        }
    }
    std::vector<CheckResult> out;
    out.push_back({"consistency.induced-families", worst_induced <= tol,
                   "max violation " + fmt(worst_induced) + " (tol " + fmt(tol) + ")",
                   {{"max_violation", fmt(worst_induced)}}});
    out.push_back({"consistency.incidence-map", worst_mapped <= tol,
                   "max violation " + fmt(worst_mapped) + " (tol " + fmt(tol) + ")",
                   {{"max_violation", fmt(worst_mapped)}}});
    out.push_back({"consistency.perturbation-detection", worst_perturb_gap <= 1e-12,
                   "max |violation - injected| = " + fmt(worst_perturb_gap),
                   {{"max_gap", fmt(worst_perturb_gap)}}});
    return out;
}

std::vector<CheckResult> verify_covariance_suite(const VerifyOptions& opt) {
    using namespace relmotion;
    const std::size_t n = opt.n ? opt.n : 4;
    const std::size_t steps = opt.steps ? opt.steps : 200000;
    const auto rn = sample_relative_noise(n, opt.dim, opt.dt, steps, opt.seed);
    const auto report = estimate_covariation(rn);
    std::string worst_entry;
    double worst_z = 0.0;
    for (const auto& e : report.entries) {
        if (std::abs(e.zscore()) >= worst_z) {
            worst_z = std::abs(e.zscore());
            worst_entry = e.left + " x " + e.right;
        }
    }
    std::vector<CheckResult> out;
    out.push_back({"covariance.structure", report.within(4.0),
                   std::to_string(report.entries.size()) + " entries, max |z| = " + fmt(worst_z) +
                       " at " + worst_entry + " (limit 4)",
                   {{"entries", std::to_string(report.entries.size())},
                    {"max_abs_zscore", fmt(report.max_abs_zscore)}}});
    return out;
}

std::vector<CheckResult> verify_correspondence_suite(const VerifyOptions& opt) {
    using namespace relmotion;
    const std::size_t n = opt.n ? opt.n : 5;
    const std::size_t steps = opt.steps ? opt.steps : 10000;
    const double tol = opt.tol >= 0.0 ? opt.tol : 1e-8;

    struct Config {
        std::string name;
        DriftSpec drift;
    };
    const std::vector<Config> configs = {
        {"constant-drift", DriftSpec::constant(0.7)},
        {"kernel-drift", DriftSpec::distance_kernel([](double r) { return 1.0 / (1.0 + r * r); })},
    };

    struct ReplicateResult {
        double residual = 0.0, com = 0.0, roundtrip = 0.0;
        bool exploded = false;
    };
    std::vector<ReplicateResult> results(opt.replicates * configs.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= results.size()) return;
            const std::size_t rep = idx / configs.size();
            const std::size_t cfg = idx % configs.size();
            const std::uint64_t rep_seed = derive_stream_seed(opt.seed, rep);
            StateVector z0(n, opt.dim);
            GaussianStream init(derive_stream_seed(rep_seed, 999));
            for (double& x : z0.data()) x = 2.0 * init.uniform() - 1.0;
            auto noise = sample_particle_noise(n, opt.dim, opt.dt, steps, rep_seed);
            const auto report =
                verify_pathwise_correspondence(z0, configs[cfg].drift, std::move(noise));
            results[idx] = {report.max_residual, report.com_residual,
                            report.roundtrip_residual,
                            report.particle_exploded || report.relative_exploded};
        }
    };
    const std::size_t nthreads = std::max<std::size_t>(1, std::min(opt.threads, results.size()));
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i + 1 < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<CheckResult> out;
    for (std::size_t cfg = 0; cfg < configs.size(); ++cfg) {
        double worst = 0.0;
        bool exploded = false;
        for (std::size_t rep = 0; rep < opt.replicates; ++rep) {
            const auto& r = results[rep * configs.size() + cfg];
            worst = std::max(worst, r.residual);
            exploded = exploded || r.exploded;
        }
        out.push_back({"correspondence." + configs[cfg].name + ".residual",
                       worst <= tol && !exploded,
                       "max path residual " + fmt(worst) + " (tol " + fmt(tol) + ")" +
                           (exploded ? ", exploded" : ""),
                       {{"max_residual", fmt(worst)}, {"tol", fmt(tol)}}});
    }
    double worst_round = 0.0, worst_com = 0.0;
    for (const auto& r : results) {
        worst_round = std::max(worst_round, r.roundtrip);
        worst_com = std::max(worst_com, r.com);
    }
    out.push_back({"correspondence.roundtrip", worst_round <= 1e-12,
                   "max reconstruction residual " + fmt(worst_round) + " (tol 1e-12)",
                   {{"max_residual", fmt(worst_round)}}});
    out.push_back({"correspondence.center-of-mass", worst_com <= 1e-10,
                   "max com residual " + fmt(worst_com) + " (tol 1e-10)",
                   {{"max_residual", fmt(worst_com)}}});
    return out;
}

int run_verify(const VerifyOptions& opt) {
    std::vector<CheckResult> checks;
    const bool all = opt.suite == "all";
    if (all || opt.suite == "inverse") {
        const auto r = verify_inverse_suite(opt);
        checks.insert(checks.end(), r.begin(), r.end());
    }
    if (all || opt.suite == "consistency") {
        const auto r = verify_consistency_suite(opt);
        checks.insert(checks.end(), r.begin(), r.end());
    }
    if (all || opt.suite == "covariance") {
        const auto r = verify_covariance_suite(opt);
        checks.insert(checks.end(), r.begin(), r.end());
    }
    if (all || opt.suite == "correspondence") {
        const auto r = verify_correspondence_suite(opt);
        checks.insert(checks.end(), r.begin(), r.end());
    }

    const CheckResult* first_fail = nullptr;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        if (!c.pass && first_fail == nullptr) first_fail = &c;
    }

    if (!opt.report_path.empty()) {
        std::ofstream report(opt.report_path);
        if (!report) {
            std::cerr << "error: io: cannot open '" << opt.report_path << "'\n";
            return kExitIo;
        }
        report << "suite = " << opt.suite << "\n";
        report << "seed = " << opt.seed << "\n";
        for (const auto& c : checks) {
            report << c.name << ".status = " << (c.pass ? "pass" : "fail") << "\n";
            for (const auto& [k, v] : c.metrics) report << c.name << "." << k << " = " << v << "\n";
        }
        report << "result = " << (first_fail == nullptr ? "pass" : "fail") << "\n";
        report.flush();
        if (!report) {
            std::cerr << "error: io: failed writing '" << opt.report_path << "'\n";
            return kExitIo;
        }
    }

    if (first_fail != nullptr) {
        std::cerr << "error: check failed: " << first_fail->name << "\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relmotion: interacting-particle SDEs and their relative motions"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "INI config file with a [simulate] section; flags override file values");

    SimulateOptions sim_opt;
    CLI::App* sim = app.add_subcommand("simulate", "run one seeded Euler simulation");
    sim->fallthrough();
    sim->add_option("--class", sim_opt.cls, "system class: particles | relative")
        ->check(CLI::IsMember({"particles", "relative"}))
        ->capture_default_str();
    sim->add_option("--n", sim_opt.n, "particle count (>= 2)")->required()->check(CLI::Range(2u, 100000u));
    sim->add_option("--dim", sim_opt.dim, "state dimension d")->check(CLI::PositiveNumber)->capture_default_str();
    sim->add_option("--dt", sim_opt.dt, "time step")->required()->check(CLI::PositiveNumber);
    sim->add_option("--steps", sim_opt.steps, "number of increments")->required()->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_opt.seed, "master RNG seed")->envname("RELMOTION_SEED")->capture_default_str();
    sim->add_option("--drift", sim_opt.drift,
                    "drift spec: constant:<rate> | kernel:cauchy[:scale] | kernel:gaussian[:scale] "
                    "| timevary:cosine:<amp>:<omega> | timevary:decay:<amp>:<rate>")
        ->capture_default_str();
    sim->add_option("--initial", sim_opt.initial_inline,
                    "initial state, comma-separated (n*dim values; pairs*dim for --class relative)");
    sim->add_option("--initial-file", sim_opt.initial_file, "file with initial values");
    sim->add_option("--com0", sim_opt.com0_inline, "initial center of mass (relative class)");
    sim->add_option("--out", sim_opt.out_path, "output trajectory CSV")->required();

    TransformOptions tr_opt;
    CLI::App* tr = app.add_subcommand("transform", "transform a trajectory file between classes");
    tr->add_option("--in", tr_opt.in_path, "input trajectory CSV")->required();
    tr->add_option("--out", tr_opt.out_path, "output trajectory CSV")->required();
    tr->add_option("--direction", tr_opt.direction, "to-relative | to-particles")
        ->required()
        ->check(CLI::IsMember({"to-relative", "to-particles"}));
    tr->add_option("--com", tr_opt.com_path, "com trajectory for to-particles (overrides embedded)");
    tr->add_option("--tol", tr_opt.tol, "consistency tolerance (default: scale-aware)");

    VerifyOptions v_opt;
    CLI::App* ver = app.add_subcommand("verify", "run verification suites");
    ver->add_option("suite", v_opt.suite, "inverse | consistency | covariance | correspondence | all")
        ->required()
        ->check(CLI::IsMember({"inverse", "consistency", "covariance", "correspondence", "all"}));
    ver->add_option("--n-max", v_opt.n_max, "largest N (inverse: 64, consistency: 8)");
    ver->add_option("--n", v_opt.n, "N (covariance: 4, correspondence: 5)");
    ver->add_option("--dim", v_opt.dim, "state dimension")->capture_default_str();
    ver->add_option("--dt", v_opt.dt, "time step")->check(CLI::PositiveNumber)->capture_default_str();
    ver->add_option("--steps", v_opt.steps, "increments (covariance: 200000, correspondence: 10000)");
    ver->add_option("--seed", v_opt.seed, "master RNG seed")->envname("RELMOTION_SEED")->capture_default_str();
    ver->add_option("--tol", v_opt.tol, "tolerance (inverse: 1e-12, correspondence: 1e-8)");
    ver->add_option("--draws", v_opt.draws, "random draws per N (consistency)")->capture_default_str();
    ver->add_option("--replicates", v_opt.replicates, "independent replicates (correspondence)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ver->add_option("--threads", v_opt.threads, "worker threads for replicates")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ver->add_option("--report", v_opt.report_path, "write a key-value report file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sim->parsed()) return run_simulate(sim_opt);
        if (tr->parsed()) return run_transform(tr_opt);
        if (ver->parsed()) return run_verify(v_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

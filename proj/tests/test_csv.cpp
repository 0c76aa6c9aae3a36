#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "relmotion/csv.hpp"
#include "test_support.hpp"

using namespace relmotion;
using testsupport::random_states;

TEST_CASE("format_double round trips exactly") {
    GaussianStream g(2025);
    for (int i = 0; i < 2000; ++i) {
        const double x = std::ldexp(g.next(), static_cast<int>(g.uniform() * 120.0) - 60);
        REQUIRE(parse_double(format_double(x)) == x);
    }
    REQUIRE(parse_double(format_double(0.0)) == 0.0);
    REQUIRE_THROWS_AS(parse_double("1.5x"), ParseError);
    REQUIRE_THROWS_AS(parse_double(""), ParseError);
}

TEST_CASE("particle trajectory round trip is exact") {
    const auto run = simulate_particles(random_states(3, 2, 1), DriftSpec::constant(0.5),
                                        sample_particle_noise(3, 2, 1e-3, 25, 2));
    std::ostringstream out;
    write_particles_csv(out, run.path);

    std::istringstream in(out.str());
    const Trajectory traj = read_trajectory_csv(in);
    REQUIRE(traj.kind == TrajectoryKind::particles);
    REQUIRE(traj.n == 3);
    REQUIRE(traj.states.dim == 2);
    REQUIRE(traj.states.recorded_steps() == 25);
    REQUIRE(traj.states.states == run.path.states);
    REQUIRE(traj.states.dt == run.path.dt);
}

TEST_CASE("relative trajectory round trip keeps pairs and com") {
    const RelativeFamily f0 = relative_family(random_states(4, 1, 3));
    const std::vector<double> com0{0.75};
    const auto run = simulate_relative(f0, com0, DriftSpec::constant(0.25),
                                       sample_relative_noise(4, 1, 1e-2, 30, 4));
    std::ostringstream out;
    write_relative_csv(out, run.pairs, &run.com);

    std::istringstream in(out.str());
    const Trajectory traj = read_trajectory_csv(in);
    REQUIRE(traj.kind == TrajectoryKind::relative);
    REQUIRE(traj.n == 4);
    REQUIRE(traj.states.states == run.pairs.states);
    REQUIRE(traj.com.has_value());
    REQUIRE(traj.com->states == run.com.states);

    SECTION("without com the file still parses") {
        std::ostringstream bare;
        write_relative_csv(bare, run.pairs);
        std::istringstream bare_in(bare.str());
        const Trajectory t2 = read_trajectory_csv(bare_in);
        REQUIRE(t2.kind == TrajectoryKind::relative);
        REQUIRE_FALSE(t2.com.has_value());
    }
}

TEST_CASE("single-step trajectories parse") {
    PathBundle path{0.0, 2, 1, 0, {1.0, 2.0}, false, 0};
    std::ostringstream out;
    write_particles_csv(out, path);
    std::istringstream in(out.str());
    const Trajectory traj = read_trajectory_csv(in);
    REQUIRE(traj.states.recorded_steps() == 0);
    REQUIRE(traj.states.states == path.states);
}

TEST_CASE("reader rejects malformed files") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_trajectory_csv(in);
    };
    REQUIRE_THROWS_AS(parse(""), ParseError);
    REQUIRE_THROWS_AS(parse("time,entity,c0\n"), ParseError);
    REQUIRE_THROWS_AS(parse("t,entity,c1\n"), ParseError);
    REQUIRE_THROWS_AS(parse("t,entity,c0\n"), ParseError);                 // no rows
    REQUIRE_THROWS_AS(parse("t,entity,c0\n0,x1,1\n0,x2,2\n"), ParseError); // unknown label
    REQUIRE_THROWS_AS(parse("t,entity,c0\n0,p1,1\n0,p2\n"), ParseError);   // ragged row
    REQUIRE_THROWS_AS(parse("t,entity,c0\n0,p1,1\n0,r2_1,2\n"), ParseError); // mixed kinds
    REQUIRE_THROWS_AS(parse("t,entity,c0\n0,p2,1\n0,p1,2\n"), ParseError); // label order
    REQUIRE_THROWS_AS(parse("t,entity,c0\n0,p1,1\n0,p2,2\n1,p1,1\n"), ParseError); // truncated block
    REQUIRE_THROWS_AS(parse("t,entity,c0\n0,p1,bad\n0,p2,2\n"), ParseError);
    // r-labels must be the complete canonical pair set
    REQUIRE_THROWS_AS(parse("t,entity,c0\n0,r2_1,1\n0,r3_1,2\n"), ParseError);
}

TEST_CASE("com-only files are recognized") {
    std::istringstream in("t,entity,c0,c1\n0,com,1,2\n0.5,com,3,4\n");
    const Trajectory traj = read_trajectory_csv(in);
    REQUIRE(traj.kind == TrajectoryKind::com_only);
    REQUIRE(traj.states.entities == 1);
    REQUIRE(traj.states.recorded_steps() == 1);
    REQUIRE(traj.states.states == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    REQUIRE(traj.states.dt == 0.5);
}

#include <cmath>
#include <cstdio>

#include "doctest.h"
#include "dsf/errors.hpp"
#include "dsf/oracle.hpp"

using namespace dsf;

TEST_CASE("mode grid layout") {
    const ModeGrid g = make_mode_grid(2.0, 0.5);
    CHECK(g.per_direction() == 9);
    CHECK(g.size() == 18);
    CHECK(g.detuning.front() == -2.0);
    CHECK(g.detuning.back() == 2.0);
    CHECK(g.mode_direction(3) == 1);
    CHECK(g.mode_direction(12) == -1);
    CHECK(g.mode_detuning(12) == g.detuning[3]);
    CHECK(g.coupling == doctest::Approx(std::sqrt(0.5 / (4 * kPi))));
    CHECK(g.recurrence_time() == doctest::Approx(kTwoPi / 0.5));
    CHECK(disabled_delay(g) == doctest::Approx(kPi / 0.5));
    CHECK_THROWS_AS(make_mode_grid(0.1, 0.5), ValidationError);
    CHECK_THROWS_AS(make_mode_grid(2.0, 0.0), ValidationError);
}

TEST_CASE("pair index enumerates the upper triangle") {
    const std::size_t M = 7;
    std::size_t expect = 0;
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t n = m + 1; n < M; ++n) CHECK(pair_index(m, n, M) == expect++);
    CHECK(expect == M * (M - 1) / 2);
}

TEST_CASE("initial state is the doubly excited vacuum") {
    const ModeGrid g = make_mode_grid(2.0, 0.5);
    const OracleState s = initial_state(g);
    CHECK(s.norm() == 1.0);
    CHECK(s.modes() == g.size());
    CHECK(s.c_pair.size() == g.size() * (g.size() - 1) / 2);
    const auto obs = observables_from_state(s, g);
    CHECK(obs.p2 == 1.0);
    CHECK(obs.p1 == 0.0);
}

TEST_CASE("simulate_full rejects unusable grids") {
    const ModeGrid g = make_mode_grid(4.0, 0.5);
    FullOracleOptions opt;
    opt.dt = 0.01;
    CHECK_THROWS_AS(simulate_full(make_params(1.0, 0.5, 0.0, 20.0, 5), g, opt), ValidationError);  // recurrence
    opt.dt = 0.1;
    CHECK_THROWS_AS(simulate_full(make_params(1.0, 0.5, 0.0, 5.0, 5), g, opt), ValidationError);  // dt
    opt.dt = 0.01;
    CHECK_THROWS_AS(simulate_full(make_params(1.0, 0.5, 0.0, 7.0, 5, true), g, opt), ValidationError);
}

TEST_CASE("mirror and general integrators agree") {
    const ModeGrid g = make_mode_grid(6.0, 0.25);
    const auto p = make_params(1.0, 0.6, kPi, 4.0, 9);
    FullOracleOptions a;
    a.dt = 0.005;
    FullOracleOptions b = a;
    b.atom_weight = {1.0, 1.0 - 1e-13};
    const auto ra = simulate_full(p, g, a);
    const auto rb = simulate_full(p, g, b);
    REQUIRE(ra.samples.size() == 9);
    for (std::size_t i = 0; i < ra.samples.size(); ++i) {
        CHECK(std::abs(ra.samples[i].p2 - rb.samples[i].p2) < 1e-10);
        CHECK(std::abs(ra.samples[i].p1 - rb.samples[i].p1) < 1e-10);
        CHECK(std::abs(ra.samples[i].coherence - rb.samples[i].coherence) < 1e-10);
        CHECK(std::abs(ra.samples[i].pair - rb.samples[i].pair) < 1e-10);
        CHECK(std::abs(ra.samples[i].norm - 1.0) < 1e-9);
    }
    // mirror symmetry: both atoms carry the same population
    const auto& last = ra.samples.back();
    CHECK(last.p1_atom[0] == doctest::Approx(last.p1_atom[1]).epsilon(1e-10));
}

TEST_CASE("a lone coupled atom decays exponentially") {
    const ModeGrid g = make_mode_grid(10.0, 0.2);
    const auto p = make_params(1.0, 0.5, 0.0, 5.0, 11);
    FullOracleOptions opt;
    opt.dt = 0.004;
    opt.atom_weight = {1.0, 0.0};
    const auto run = simulate_full(p, g, opt);
    for (const auto& s : run.samples) {
        CHECK(std::abs(s.p2 - std::exp(-s.t)) < 0.03);
        CHECK(s.p1_atom[0] < 1e-12);  // atom 1 stays excited only alongside atom 2
        CHECK(std::abs(s.p2 + s.p1_atom[1] - 1.0) < 1e-9);
    }
}

TEST_CASE("coincident atoms: P2 follows exp(-2 g t) up to the band edge") {
    const ModeGrid g = make_mode_grid(10.0, 0.2);
    const auto p = make_params(1.0, 0.0, 0.0, 5.0, 11);
    FullOracleOptions opt;
    opt.dt = 0.004;
    const auto run = simulate_full(p, g, opt);
    for (const auto& s : run.samples) {
        CHECK(std::abs(s.p2 - std::exp(-2 * s.t)) < 0.05);
        CHECK(std::abs(s.norm - 1.0) < 1e-7);
    }
    CHECK(run.tau_used == 0.0);
    CHECK(run.steps > 0);
}

TEST_CASE("snapshot round trip") {
    const ModeGrid g = make_mode_grid(3.0, 0.5);
    const auto p = make_params(1.0, 0.4, 1.0, 2.0, 3);
    OracleState last;
    FullOracleOptions opt;
    opt.dt = 0.01;
    opt.on_sample = [&](const OracleState& s) { last = s; };
    simulate_full(p, g, opt);
    REQUIRE(last.t == doctest::Approx(2.0));
    const std::string path = "dsf_test_snapshot.bin";
    write_snapshot(path, last);
    const OracleState back = read_snapshot(path);
    std::remove(path.c_str());
    CHECK(back.t == last.t);
    CHECK(back.a == last.a);
    CHECK(back.b[0] == last.b[0]);
    CHECK(back.b[1] == last.b[1]);
    CHECK(back.c_pair == last.c_pair);
    CHECK(back.c_same == last.c_same);
    CHECK_THROWS(read_snapshot("/nonexistent/snap.bin"));
}

#include <cmath>

#include "doctest.h"
#include "dsf/config.hpp"
#include "dsf/errors.hpp"
#include "dsf/params.hpp"

using namespace dsf;

TEST_CASE("make_params validates and reduces the phase") {
    const auto p = make_params(1.0, 0.5, 3.0 * kPi, 10.0, 100);
    CHECK(p.phi == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(p.sample_time(0) == 0.0);
    CHECK(p.sample_time(99) == 10.0);

    CHECK_THROWS_AS(make_params(0.0, 0.5, 0.0, 10.0, 100), ValidationError);
    CHECK_THROWS_AS(make_params(1.0, -0.1, 0.0, 10.0, 100), ValidationError);
    CHECK_THROWS_AS(make_params(1.0, 0.5, 0.0, 0.0, 100), ValidationError);
    CHECK_THROWS_AS(make_params(1.0, 0.5, 0.0, 10.0, 1), ValidationError);
    CHECK_THROWS_AS(make_params(1.0, NAN, 0.0, 10.0, 10), ValidationError);
}

TEST_CASE("reduce_phase lands in [0, 2pi)") {
    CHECK(reduce_phase(-kPi / 2) == doctest::Approx(1.5 * kPi));
    CHECK(reduce_phase(kTwoPi) == 0.0);
    CHECK(reduce_phase(0.25) == 0.25);
}

TEST_CASE("phase_multiple recognizes n pi") {
    CHECK(phase_multiple(make_params(1, 0.5, 0.0, 1, 2)) == 0);
    CHECK(phase_multiple(make_params(1, 0.5, kPi, 1, 2)) == 1);
    CHECK(phase_multiple(make_params(1, 0.5, kTwoPi, 1, 2)) == 0);
    CHECK_FALSE(phase_multiple(make_params(1, 0.5, kPi / 2, 1, 2)).has_value());
    CHECK_THROWS_AS(require_phase_multiple(make_params(1, 0.5, kPi / 2, 1, 2)), DomainError);
}

TEST_CASE("lambert argument r = (g tau / 2) exp(g tau / 2 + i phi)") {
    const auto p = make_params(2.0, 0.4, kPi, 1, 2);
    const Complex r = lambert_argument(p);
    CHECK(r.real() == doctest::Approx(-0.4 * std::exp(0.4)).epsilon(1e-14));
    CHECK(std::abs(r.imag()) < 1e-15);
    const auto ctx = make_series_context(p, 50);
    CHECK(context_matches(ctx, p));
    CHECK_FALSE(context_matches(ctx, make_params(2.0, 0.5, kPi, 1, 2)));
    CHECK_THROWS_AS(make_series_context(p, 0), ValidationError);
}

TEST_CASE("parse_real understands multiples of pi") {
    CHECK(parse_real("pi") == doctest::Approx(kPi));
    CHECK(parse_real("0.5pi") == doctest::Approx(kPi / 2));
    CHECK(parse_real("3*pi/2") == doctest::Approx(1.5 * kPi));
    CHECK(parse_real("-pi") == doctest::Approx(-kPi));
    CHECK(parse_real("1e-3") == 1e-3);
    CHECK_THROWS_AS(parse_real("abc"), ValidationError);
    CHECK_THROWS_AS(parse_real("pi/0"), ValidationError);
}

TEST_CASE("config text round-trips exactly") {
    const std::string text =
        "# comment line\n"
        "gamma = 1.5\n"
        "tau = 0.895   # trailing comment\n"
        "phi = pi\n"
        "t_max = 40\n"
        "n_samples = 81\n"
        "engine = series\n"
        "tail = none\n"
        "tau_list = 0:1:0.25\n"
        "phi_list = 0, pi/2, pi\n"
        "threads = 2\n";
    const RunConfig c = parse_config(text);
    CHECK(c.params.gamma == 1.5);
    CHECK(c.params.tau == 0.895);
    CHECK(c.params.phi == doctest::Approx(kPi));
    CHECK(c.engine == Engine::series);
    CHECK(c.tail == TailMode::none);
    REQUIRE(c.tau_list.size() == 5);
    CHECK(c.tau_list.back() == 1.0);
    REQUIRE(c.phi_list.size() == 3);
    CHECK(c.threads == 2);

    const RunConfig back = parse_config(write_config(c));
    CHECK(write_config(back) == write_config(c));
    CHECK(back.params.phi == c.params.phi);
    CHECK(back.tau_list == c.tau_list);
}

TEST_CASE("config errors name the problem") {
    CHECK_THROWS_WITH_AS(parse_config("gamma = 1\nbogus = 2\n"), doctest::Contains("line 2"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_config("tau\n"), doctest::Contains("key = value"), ValidationError);
    CHECK_THROWS_AS(parse_config("tau = -1\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("engine = magic\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("k_max = 0\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("n_samples = 3.5\n"), ValidationError);
    CHECK_THROWS_AS(read_config_file("/nonexistent/file.cfg"), ValidationError);
}

TEST_CASE("config_keys covers every settable key") {
    for (const auto& key : config_keys()) {
        RunConfig c;
        std::string value = "1";
        if (key == "engine") value = "series";
        else if (key == "tail") value = "none";
        else if (key == "delay_disabled") value = "false";
        else if (key == "n_samples" || key == "spectrum_points") value = "5";
        CHECK_NOTHROW(apply_setting(c, key, value));
    }
    RunConfig c;
    CHECK_THROWS_AS(apply_setting(c, "nope", "1"), ValidationError);
}

#include <cmath>

#include "doctest.h"
#include "dsf/analytic.hpp"
#include "dsf/errors.hpp"
#include "dsf/quadrature.hpp"
#include "steps_oracle.hpp"

using namespace dsf;

namespace {

BetaEngine engine(Engine kind) {
    BetaEngine e;
    e.kind = kind;
    return e;
}

}  // namespace

TEST_CASE("quadrature settings validation and realized spacing") {
    CHECK_THROWS_AS(make_quadrature_spec(0.0, 0.1, 1e-4), ValidationError);
    CHECK_THROWS_AS(make_quadrature_spec(10.0, -0.1, 1e-4), ValidationError);
    const auto p = make_params(1.0, 0.0, 0.0, 10.0, 5);
    const auto in = integrate_single_excitation(p, engine(Engine::series), make_quadrature_spec(20.0, 0.5, 1e-4),
                                                {0.0, 10.0});
    CHECK(in.spacing <= kPi / 40.0 + 1e-15);
    CHECK(in.points % 4 == 1);
}

TEST_CASE("coincident atoms: P1 = 2 g t exp(-2 g t)") {
    const auto p = make_params(1.0, 0.0, 0.0, 10.0, 21);
    std::vector<double> times;
    for (int i = 0; i < 21; ++i) times.push_back(p.sample_time(i));
    for (Engine kind : {Engine::series, Engine::dde}) {
        const auto in = integrate_single_excitation(p, engine(kind), make_quadrature_spec(40.0, 0.1, 1e-4), times);
        for (std::size_t i = 0; i < times.size(); ++i) {
            CHECK(std::abs(in.p1[i] - p1_coincident(1.0, times[i])) < 1e-5);
            CHECK(std::abs(in.coherence[i] - 0.5 * in.p1[i]) < 1e-5);
        }
    }
}

TEST_CASE("independent atoms: P1 = 2 exp(-g t)(1 - exp(-g t)), no coherence") {
    const auto p = make_params(1.0, 0.895, kPi, 10.0, 11, true);
    std::vector<double> times;
    for (int i = 0; i < 11; ++i) times.push_back(p.sample_time(i));
    const auto in = integrate_single_excitation(p, engine(Engine::dde), make_quadrature_spec(40.0, 0.1, 1e-4), times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(std::abs(in.p1[i] - p1_independent(1.0, times[i])) < 1e-5);
        CHECK(std::abs(in.coherence[i]) < 1e-5);
    }
}

TEST_CASE("engines agree and approach the stationary value") {
    const auto p = make_params(1.0, 0.895, kPi, 40.0, 3);
    const auto quad = make_quadrature_spec(40.0, 0.1, 1e-4);
    const auto a = integrate_single_excitation(p, engine(Engine::series), quad, {2.0, 40.0});
    const auto b = integrate_single_excitation(p, engine(Engine::dde), quad, {2.0, 40.0});
    CHECK(std::abs(a.p1[0] - b.p1[0]) < 1e-6);
    CHECK(std::abs(a.p1[1] - prob_one_excited_ss(p)) < 2e-4);
    CHECK(std::abs(a.coherence[1] - dipole_correlation_ss(p)) < 2e-4);
}

TEST_CASE("P1 at one time matches the batch result") {
    const auto p = make_params(1.0, 0.375, kPi, 5.0, 3);
    const auto quad = make_quadrature_spec(30.0, 0.1, 1e-4);
    const auto in = integrate_single_excitation(p, engine(Engine::series), quad, {1.5});
    CHECK(prob_one_excited(1.5, p, engine(Engine::series), quad) == doctest::Approx(in.p1[0]).epsilon(1e-14));
}

TEST_CASE("detuning tail equals the brute-force integral beyond the cutoff") {
    // Independent atoms: |beta|^2 known in closed form
    const double L = 15.0;
    for (double t : {0.05, 0.5, 3.0}) {
        const auto p = make_params(1.0, 0.5, 0.0, 10.0, 3, true);
        double s = 0.0;
        const double h = 1e-3;
        const double far = 3000.0;
        for (double d = L + h / 2; d < far; d += h) {
            for (int sign : {1, -1}) {
                const auto b = ref::beta_independent(1.0, 0.5, 0.0, sign * d, 1, t);
                s += 2.0 * (std::norm(b[0]) + std::norm(b[1])) * h;  // two directions
            }
        }
        // remainder beyond `far`: |beta|^2 ~ |e^{-t} e^{i d t} - e^{-t/2}|^2 / d^2, averaged
        const double avg = std::exp(-2 * t) + std::exp(-t);
        s += 2.0 * 2.0 * 2.0 * avg / far;
        s /= 4.0 * kPi;
        const auto tail = detuning_tail(p, t, L);
        CAPTURE(t);
        CHECK(tail.p1 == doctest::Approx(s).epsilon(2e-3));
        CHECK(std::abs(tail.coherence) < 1e-12);
    }
}

TEST_CASE("an impossible tolerance raises QuadratureError with both estimates") {
    const auto p = make_params(1.0, 0.895, kPi, 10.0, 3);
    try {
        integrate_single_excitation(p, engine(Engine::series), make_quadrature_spec(20.0, 0.5, 1e-15), {6.0});
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(std::isfinite(e.previous()));
        CHECK(std::isfinite(e.last()));
    }
}

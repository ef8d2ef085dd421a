#include <cmath>
#include <random>

#include "doctest.h"
#include "dsf/analytic.hpp"
#include "dsf/errors.hpp"
#include "dsf/observables.hpp"

using namespace dsf;

TEST_CASE("density matrix construction enforces a physical state") {
    const auto rho = make_density(0.1, 0.2, 0.3, Complex(0.05, 0.02));
    CHECK(rho.rho44() == doctest::Approx(0.4));
    CHECK(rho.rho32() == std::conj(rho.rho23()));
    CHECK(rho.m(0, 3) == Complex(0.0));
    CHECK_THROWS_AS(make_density(0.5, 0.3, 0.3, 0.0), NumericalError);   // rho44 < 0
    CHECK_THROWS_AS(make_density(0.0, 0.1, 0.1, 0.5), NumericalError);   // coherence too large
    AtomDensityMatrix bad = make_density(1.0, 0.0, 0.0, 0.0);
    bad.m(1, 2) = 0.1;
    CHECK_THROWS_AS(check_state(bad), NumericalError);
}

TEST_CASE("concurrence of textbook states") {
    CHECK(concurrence(make_density(0.0, 0.5, 0.5, 0.5)) == doctest::Approx(1.0));   // Psi+
    CHECK(concurrence(make_density(0.0, 0.5, 0.5, -0.5)) == doctest::Approx(1.0));  // Psi-
    CHECK(concurrence(make_density(1.0, 0.0, 0.0, 0.0)) == 0.0);
    // 0.141 |Psi-><Psi-| + 0.859 |gg><gg|
    CHECK(concurrence(make_density(0.0, 0.0705, 0.0705, -0.0705)) == doctest::Approx(0.141));
    // Werner state p |Psi-><Psi-| + (1 - p) I / 4: C = max(0, (3p - 1) / 2)
    for (double pw : {0.2, 1.0 / 3.0, 0.6, 0.9}) {
        const double q = (1.0 - pw) / 4.0;
        const auto rho = make_density(q, q + pw / 2, q + pw / 2, -pw / 2);
        CHECK(concurrence(rho) == doctest::Approx(std::max(0.0, (3 * pw - 1) / 2)).epsilon(1e-12));
    }
}

TEST_CASE("Wootters construction agrees with the block formula on random X states") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        const double s = a + b + c + d;
        a /= s, b /= s, c /= s;
        const Complex z = std::polar(u(rng) * std::sqrt(b * c), 6.283 * u(rng));
        const auto rho = make_density(a, b, c, z);
        const double quick = 2.0 * std::max(0.0, std::abs(z) - std::sqrt(a * (1 - a - b - c)));
        CHECK(concurrence_wootters(rho.m) == doctest::Approx(quick).epsilon(1e-9));
        ++checked;
    }
    CHECK(checked == 2000);
}

TEST_CASE("concurrence refuses a matrix outside the block structure") {
    AtomDensityMatrix rho;
    rho.m = Eigen::Matrix4cd::Zero();
    rho.m(0, 0) = rho.m(3, 3) = rho.m(0, 3) = rho.m(3, 0) = 0.5;  // Phi+: the shortcut misses it
    CHECK_THROWS_AS(concurrence(rho), ConsistencyError);
    CHECK(concurrence_wootters(rho.m) == doctest::Approx(1.0));
}

TEST_CASE("reduced density from integrals") {
    const auto p = make_params(1.0, 0.0, 0.0, 2.0, 3);
    SingleExcitationIntegrals in;
    in.times = {0.0, 1.0};
    in.p1 = {0.0, p1_coincident(1.0, 1.0)};
    in.coherence = {0.0, 0.5 * in.p1[1]};
    const auto rho = reduced_density(p, in);
    CHECK(rho[0].m.isApprox(make_density(1.0, 0.0, 0.0, 0.0).m));
    CHECK(rho[1].rho11() == doctest::Approx(std::exp(-2.0)));
    CHECK(rho[1].rho22() == doctest::Approx(std::exp(-2.0)));
    CHECK(dipole_correlation(rho[1]) == rho[1].m(2, 1));
}

TEST_CASE("reduced density and dipole correlation from an engine") {
    BetaEngine e;
    e.kind = Engine::series;
    const auto quad = make_quadrature_spec(40.0, 0.1, 1e-4);
    const auto p = make_params(1.0, 0.895, kPi, 40.0, 3);
    // before the delay the atoms decay independently
    CHECK(std::abs(dipole_correlation(0.5, p, e, quad)) < 1e-6);
    const auto late = reduced_density(40.0, p, e, quad);
    CHECK(late.rho22() + late.rho33() == doctest::Approx(prob_one_excited_ss(p)).epsilon(2e-3));
    CHECK(late.rho23().real() > 0.0);
    CHECK(std::abs(dipole_correlation(late)) == doctest::Approx(prob_one_excited_ss(p) / 2).epsilon(2e-3));
    const auto even = reduced_density(40.0, make_params(1.0, 0.895, 0.0, 40.0, 3), e, quad);
    CHECK(even.rho23().real() < 0.0);
    const auto off = reduced_density(3.0, make_params(1.0, 0.895, kPi, 40.0, 3, true), e, quad);
    CHECK(std::abs(off.rho23()) < 1e-6);
}

TEST_CASE("instantaneous rate") {
    std::vector<double> t, flat, quad, p1;
    for (int i = 0; i <= 2000; ++i) {
        t.push_back(0.005 * i);
        flat.push_back(0.3);
        quad.push_back(t.back() * t.back());
        p1.push_back(p1_coincident(1.0, t.back()));
    }
    for (double r : instantaneous_rate(t, flat)) CHECK(r == 0.0);
    const auto rq = instantaneous_rate(t, quad);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(rq[i] == doctest::Approx(-2.0 * t[i]).epsilon(1e-9));
    // -d/dt 2 t e^{-2t} = 2 e^{-2t} (2t - 1), maximal at t = 1 with value 2 e^{-2}
    const auto r = instantaneous_rate(t, p1);
    const auto it = std::max_element(r.begin(), r.end());
    CHECK(t[it - r.begin()] == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(*it == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-5));
    CHECK_THROWS_AS(instantaneous_rate({0, 1, 2, 3}, {0, 0, 0, 0}), ValidationError);
    CHECK_THROWS_AS(instantaneous_rate({0, 1, 2, 3, 5}, {0, 0, 0, 0, 0}), ValidationError);
}

TEST_CASE("sudden birth detection") {
    EntanglementTrace tr;
    tr.times = {0, 1, 2, 3, 4};
    tr.concurrence = {0, 0, 0, 0, 0};
    CHECK_FALSE(detect_sbe(tr).has_value());
    tr.concurrence = {0, 0, 0, 0.2, 0.4};
    const auto lin = detect_sbe(tr, 0.1);
    REQUIRE(lin.has_value());
    CHECK(*lin == doctest::Approx(2.5));
    // C(t) = max(0, t - 2.37): bisection to 1e-3
    const auto bis = detect_sbe(tr, 1e-4, [](double t) { return std::max(0.0, t - 2.37); });
    REQUIRE(bis.has_value());
    CHECK(std::abs(*bis - 2.37) < 1e-3);
    CHECK(*bis >= 2.0);
    CHECK(*bis <= 3.0);
}

#include <atomic>
#include <cmath>

#include "doctest.h"
#include "dsf/errors.hpp"
#include "dsf/numerics.hpp"

using namespace dsf;

TEST_CASE("phi1 is (exp(z) - 1) / z without cancellation") {
    CHECK(phi1(0.0) == Complex(1.0));
    const Complex z(1e-9, 2e-9);
    CHECK(std::abs(phi1(z) - (1.0 + z / 2.0)) < 1e-17);
    for (const Complex w : {Complex(0.4, -0.2), Complex(3.0, 1.0), Complex(-20.0, 5.0)})
        CHECK(std::abs(phi1(w) - (std::exp(w) - 1.0) / w) < 1e-14 * std::abs(phi1(w)));
}

TEST_CASE("exp_difference stays finite when the rates meet") {
    const Complex a(-1.0, 0.5), b(-0.5, 0.2);
    const double t = 2.0;
    CHECK(std::abs(exp_difference(a, b, t) - (std::exp(a * t) - std::exp(b * t)) / (a - b)) < 1e-14);
    CHECK(std::abs(exp_difference(a, a, t) - t * std::exp(a * t)) < 1e-15);
}

TEST_CASE("sine integral against frozen values") {
    // scipy.special.sici(x)[0]
    const double table[][2] = {{0.5, 0.49310741804306674}, {3.0, 1.848652527999468},   {4.0, 1.758203138949053},
                               {4.5, 1.654140414379244},   {10.0, 1.658347594218874},  {50.0, 1.551617072485936},
                               {-2.0, -1.605412976802695}, {1e-3, 0.0009999999444444462}};
    for (const auto& row : table) CHECK(sine_integral(row[0]) == doctest::Approx(row[1]).epsilon(1e-13));
    CHECK(sine_integral(0.0) == 0.0);
}

TEST_CASE("cos_tail_integral = cos x - x (pi/2 - Si(x))") {
    const double table[][2] = {{0.5, 0.3387381075144579},   {3.0, -0.15642389298673076},
                               {4.5, 0.16425259469878367},  {10.0, 0.036441145163320976},
                               {50.0, 0.0060033130440826366}, {-2.0, -0.3469135365315455}};
    for (const auto& row : table) {
        // the closed form is odd in its x term; the integral itself is even
        const double expected = row[0] < 0 ? cos_tail_integral(-row[0]) : row[1];
        CHECK(cos_tail_integral(row[0]) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(cos_tail_integral(0.0) == 1.0);
    // direct quadrature of int_1^V cos(x v)/v^2 dv plus the 1/V remainder bound
    const double x = 1.7;
    const int n = 400000;
    const double V = 400.0;
    const auto w = simpson_weights(n + 1, (V - 1.0) / n);
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double v = 1.0 + (V - 1.0) * i / n;
        s += w[i] * std::cos(x * v) / (v * v);
    }
    CHECK(std::abs(s - cos_tail_integral(x)) < 2.0 / (x * V * V));
}

TEST_CASE("hermite interpolation is exact for cubics") {
    auto f = [](double t) { return Complex(t * t * t - 2 * t, 0.5 * t * t); };
    auto df = [](double t) { return Complex(3 * t * t - 2, t); };
    const double t0 = 0.3, t1 = 1.1;
    for (double t : {0.3, 0.5, 0.9, 1.1})
        CHECK(std::abs(hermite(t0, t1, f(t0), f(t1), df(t0), df(t1), t) - f(t)) < 1e-14);
}

TEST_CASE("simpson weights integrate cubics exactly") {
    const std::size_t n = 11;
    const double h = 0.2;
    const auto w = simpson_weights(n, h);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = h * i;
        s += w[i] * (x * x * x - x);
    }
    CHECK(s == doctest::Approx(4.0 - 2.0).epsilon(1e-14));
    CHECK_THROWS_AS(simpson_weights(4, 0.1), ValidationError);
    CHECK_THROWS_AS(simpson_weights(1, 0.1), ValidationError);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(100, 3,
                                 [](std::size_t i) {
                                     if (i == 42) throw NumericalError("boom");
                                 }),
                    NumericalError);
}

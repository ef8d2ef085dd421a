#include <cmath>

#include "doctest.h"
#include "dsf/analytic.hpp"
#include "dsf/errors.hpp"
#include "steps_oracle.hpp"

using namespace dsf;

TEST_CASE("doubly excited amplitude is exp(-gamma t)") {
    const auto p = make_params(1.3, 0.895, kPi, 10, 10);
    CHECK(amp_a(p, 0.0) == Complex(1.0));
    CHECK(prob_two_excited(p, 2.0) == doctest::Approx(std::exp(-2 * 1.3 * 2.0)).epsilon(1e-15));
}

TEST_CASE("single-atom amplitude before the delay") {
    const auto p = make_params(1.0, 2.0, 0.7, 10, 10);
    const SeriesEvaluator s(p, make_series_context(p));
    for (double t : {0.0, 0.5, 1.99}) {
        for (double delta : {-2.0, 0.5}) {
            const auto ref = ref::beta_independent(1.0, 2.0, 0.7, delta, 1, t);
            CHECK(std::abs(amp_b_single(1, delta, 1, t, p) - ref[0]) < 1e-14);
            CHECK(std::abs(s.beta(2, delta, 1, t) - ref[1]) < 1e-13);
        }
    }
}

TEST_CASE("position phase convention") {
    const auto p = make_params(1.0, 0.5, 0.3, 10, 10);
    CHECK(std::abs(position_phase(1, 2.0, 1, p) - std::polar(1.0, (0.3 + 1.0) / 2)) < 1e-15);
    CHECK(std::abs(position_phase(2, 2.0, -1, p) - std::polar(1.0, (0.3 + 1.0) / 2)) < 1e-15);
}

TEST_CASE("residue series equals the method-of-steps closed form") {
    for (double tau : {0.0, 0.375, 0.895, 1.7}) {
        for (double phi : {0.0, kPi / 2, kPi, 2.3}) {
            const auto p = make_params(1.0, tau, phi, 10, 10);
            const SeriesEvaluator s(p, make_series_context(p, 2000));
            double worst = 0.0;
            for (double delta : {-2.5, -0.6, 0.0, 0.3, 1.9}) {
                for (int eta : {1, -1}) {
                    for (double t : {0.1, tau + 0.05, 1.5 * tau + 0.3, 3.0, 9.0}) {
                        const auto b = s.beta(delta, eta, t);
                        const auto r = ref::beta(1.0, tau, phi, delta, eta, t);
                        worst = std::max({worst, std::abs(b[0] - r[0]), std::abs(b[1] - r[1])});
                    }
                }
            }
            CAPTURE(tau);
            CAPTURE(phi);
            CHECK(worst < SeriesEvaluator::kConvergenceTol);
        }
    }
}

TEST_CASE("series handles the source sitting on a pole") {
    // gamma tau = 0.895, phi = 0: the dark channel has a pole at s = i Delta - gamma
    // when Delta tau is a multiple of 2 pi shifted by the phase; probe a dense set
    const auto p = make_params(1.0, 0.895, 0.0, 10, 10);
    const SeriesEvaluator s(p, make_series_context(p));
    for (double delta = -3.0; delta <= 3.0; delta += 0.25) {
        for (double t : {1.0, 4.0}) {
            const auto b = s.beta(delta, 1, t);
            const auto r = ref::beta(1.0, 0.895, 0.0, delta, 1, t);
            CHECK(std::abs(b[0] - r[0]) < 1e-3);
        }
    }
}

TEST_CASE("amp_b_series agrees with the evaluator") {
    const auto p = make_params(1.0, 0.5, kPi, 10, 10);
    const auto ctx = make_series_context(p);
    const SeriesEvaluator s(p, ctx);
    CHECK(amp_b_series(1, 0.4, -1, 2.0, p, ctx) == s.beta(1, 0.4, -1, 2.0));
}

TEST_CASE("series converges to the stationary amplitude") {
    for (double phi : {0.0, kPi}) {
        const auto p = make_params(1.0, 0.895, phi, 10, 10);
        const SeriesEvaluator s(p, make_series_context(p));
        for (double delta : {-1.0, 0.2, 2.0}) {
            for (int atom : {1, 2}) {
                const Complex late = s.beta(atom, delta, 1, 60.0);
                CHECK(std::abs(late - amp_b_steady(atom, delta, 1, p)) < 1e-8);
            }
        }
    }
    CHECK_THROWS_AS(amp_b_steady(1, 0.0, 1, make_params(1.0, 0.895, 1.0, 10, 10)), DomainError);
}

TEST_CASE("steady single-excitation probability") {
    const auto p = make_params(1.0, 0.895, kPi, 10, 10);
    // closed form derived by integrating |b_ss|^2 over Delta
    CHECK(prob_one_excited_ss(p) == doctest::Approx(ref::p1_steady(1.0, 0.895)).epsilon(1e-13));
    CHECK(prob_one_excited_ss(p) == doctest::Approx(0.1411).epsilon(1e-3 / 0.1411));
    CHECK(std::abs(prob_one_excited_ss(p) - prob_one_excited_ss_exp(p)) < 1e-14);
    CHECK(bic_probability(p) == doctest::Approx(0.282).epsilon(2e-3 / 0.282));
    CHECK(prob_one_excited_ss(make_params(1.0, 0.0, 0.0, 10, 10)) == 0.0);
    CHECK(prob_one_excited_ss(make_params(1.0, 0.895, 0.0, 10, 10, true)) == 0.0);

    // direct quadrature of (gamma/4pi) sum_{r,eta} int |b_ss|^2, phi = 0
    double s = 0.0;
    const double h = 0.01, L = 4000.0;
    for (double d = -L; d <= L; d += h)
        for (int eta : {1, -1})
            for (int r : {1, 2}) s += std::norm(amp_b_steady(r, d, eta, make_params(1.0, 0.895, 0.0, 10, 10))) * h;
    s *= 1.0 / (4 * kPi);
    CHECK(s == doctest::Approx(prob_one_excited_ss(p)).epsilon(1e-3));
}

TEST_CASE("bound-state probability peaks near gamma tau = 0.895") {
    double best = 0.0, arg = 0.0;
    for (double tau = 0.5; tau <= 1.5; tau += 1e-4) {
        const double v = prob_one_excited_ss(make_params(1.0, tau, 0.0, 10, 10));
        if (v > best) best = v, arg = tau;
    }
    CHECK(arg >= 0.885);
    CHECK(arg <= 0.905);
    CHECK(2 * best == doctest::Approx(0.282).epsilon(2e-3 / 0.282));
}

TEST_CASE("dipole correlation parity") {
    const auto even = make_params(1.0, 0.895, kTwoPi, 10, 10);
    const auto odd = make_params(1.0, 0.895, kPi, 10, 10);
    CHECK(dipole_correlation_ss(even) < 0.0);
    CHECK(dipole_correlation_ss(odd) > 0.0);
    CHECK(std::abs(dipole_correlation_ss(odd)) == doctest::Approx(prob_one_excited_ss(odd) / 2).epsilon(1e-14));
}

TEST_CASE("Markovian reference curves") {
    CHECK(p1_coincident(1.0, 0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(p1_independent(1.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("kick response solves the homogeneous delay equation") {
    // h(t) from the method of steps with a delta source: channel kernels
    const double tau = 0.7, phi = 0.4;
    const auto p = make_params(1.0, tau, phi, 10, 10);
    const Complex cp = -0.5 * std::polar(1.0, phi);
    auto kernel = [&](Complex c, double t) {
        Complex s = 0.0, cj = 1.0;
        double fact = 1.0;
        for (int j = 0; t - j * tau > 0.0; ++j) {
            if (j > 0) fact *= j;
            s += cj * std::pow(t - j * tau, j) / fact;
            cj *= c * std::exp(0.5 * tau);
        }
        return std::exp(-0.5 * t) * s;
    };
    for (double t : {0.3, 1.0, 2.2, 5.0}) {
        const auto h = kick_response(p, t);
        const Complex hp = kernel(cp, t), hm = kernel(-cp, t);
        CHECK(std::abs(h[0][0] - 0.5 * (hp + hm)) < 1e-13);
        CHECK(std::abs(h[0][1] - 0.5 * (hp - hm)) < 1e-13);
        CHECK(std::abs(h[1][1] - h[0][0]) < 1e-15);
    }
}

#include "dsf/lambertw.hpp"

#include <cmath>
#include <sstream>

#include "dsf/errors.hpp"

namespace dsf {
namespace {

constexpr double kExpM1 = 0.36787944117144232159553;  // 1/e
constexpr int kMaxIterations = 100;

Complex branch_point_guess(Complex z, double sign) {
    // W = -1 + p - p^2/3 + 11 p^3/72, p = +-sqrt(2(ez + 1))
    const Complex p = sign * std::sqrt(2.0 * (std::exp(1.0) * z + 1.0));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
}

Complex asymptotic_guess(Complex z, long k) {
    const Complex l1 = std::log(z) + Complex(0.0, kTwoPi * static_cast<double>(k));
    return l1 - std::log(l1);
}

Complex pade0(Complex z) {
    // (3,2) Pade approximant of W_0 about the origin
    const Complex num = 12.85106382978723404255 + z * (12.34042553191489361902 + z);
    const Complex den = 32.53191489361702127660 + z * (14.34042553191489361702 + z);
    return z * num / den;
}

Complex initial_guess(long k, Complex z) {
    const bool near_branch = std::abs(z + kExpM1) < 0.3;
    if (k == 0) {
        if (near_branch) return branch_point_guess(z, 1.0);
        if (z.real() > -1.0 && z.real() < 1.5 && std::abs(z.imag()) < 1.0 &&
            -2.5 * std::abs(z.imag()) - 0.2 < z.real())
            return pade0(z);
        return asymptotic_guess(z, 0);
    }
    if (near_branch && ((k == -1 && z.imag() >= 0.0) || (k == 1 && z.imag() < 0.0)))
        return branch_point_guess(z, -1.0);
    if (k == -1 && z.imag() == 0.0 && z.real() < 0.0 && z.real() > -kExpM1)
        return std::log(-z.real());
    return asymptotic_guess(z, k);
}

[[noreturn]] void fail(long k, Complex z) {
    std::ostringstream os;
    os << "lambert_w: Halley iteration did not converge for k=" << k << ", z=" << z;
    throw NumericalError(os.str());
}

}  // namespace

Complex lambert_w(long k, Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("lambert_w: non-finite argument");
    // -0 imaginary parts would put cut points on the lower side and repeat a branch
    if (z.imag() == 0.0) z = Complex(z.real(), 0.0);
    if (z == Complex(0.0)) {
        if (k == 0) return 0.0;
        throw DomainError("lambert_w: W_k(0) diverges for k != 0");
    }
    if (std::abs(z + kExpM1) < 1e-300 && (k == 0 || k == -1)) return -1.0;

    Complex w = initial_guess(k, z);
    const double tol = 4.0 * std::numeric_limits<double>::epsilon();
    for (int it = 0; it < kMaxIterations; ++it) {
        Complex wn;
        if (w.real() >= 0.0) {
            // written with exp(-w) so large Re w cannot overflow
            const Complex ew = std::exp(-w);
            const Complex f = w - z * ew;
            wn = w - f / (w + 1.0 - (w + 2.0) * f / (2.0 * w + 2.0));
        } else {
            const Complex ew = std::exp(w);
            const Complex f = w * ew - z;
            wn = w - f / (w * ew + ew - (w + 2.0) * f / (2.0 * w + 2.0));
        }
        if (!std::isfinite(wn.real()) || !std::isfinite(wn.imag())) {
            // only happens right at the branch point where w + 1 -> 0
            if (std::abs(w * std::exp(w) - z) <= 1e-12 * std::abs(z)) return w;
            fail(k, z);
        }
        if (std::abs(wn - w) <= tol * std::abs(wn)) return wn;
        w = wn;
    }
    if (std::abs(w * std::exp(w) - z) <= 1e-12 * std::abs(z)) return w;
    fail(k, z);
}

Complex lambert_w_asymptotic(double k, Complex z) {
    const Complex l1 = std::log(z) + Complex(0.0, kTwoPi * k);
    const Complex l2 = std::log(l1);
    // de Bruijn series through O(l2^2 / l1^2)
    return l1 - l2 + l2 / l1 + l2 * (l2 - 2.0) / (2.0 * l1 * l1);
}

namespace {

void check_branch_sum_args(Complex z, int K) {
    if (K < 1) throw ValidationError("branch sum: K must be >= 1");
    if (z == Complex(0.0)) throw DomainError("branch sum: z = 0");
    if (std::abs(z + kExpM1) < 1e-14) throw DomainError("branch sum: z = -1/e is a branch point");
}

// Tail sum over |k| > K of term(W_k) using the asymptotic branch values and a
// midpoint-rule integral in k, mapped onto (0, 1] with Gauss-Legendre nodes.
template <class Term>
Complex asymptotic_tail(Complex z, int K, Term term) {
    static const double x[] = {-0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
                               -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
                               -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
                               0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
                               0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
                               0.9894009349916499};
    static const double w[] = {0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
                               0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
                               0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
                               0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
                               0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
                               0.0271524594117541};
    // k = k0 / u, dk = k0 / u^2 du, u in (0, 1]; integrand decays like k^-2,
    // so in u it is smooth. Split (0,1] into panels to resolve the log terms.
    const double k0 = K + 0.5;
    Complex total = 0.0;
    const double edges[] = {0.0, 0.0625, 0.25, 0.5, 1.0};
    for (int p = 0; p < 4; ++p) {
        const double a = edges[p], b = edges[p + 1];
        for (int i = 0; i < 16; ++i) {
            const double u = 0.5 * (b - a) * x[i] + 0.5 * (b + a);
            const double k = k0 / u;
            const Complex f = term(lambert_w_asymptotic(k, z)) + term(lambert_w_asymptotic(-k, z));
            total += 0.5 * (b - a) * w[i] * f * (k0 / (u * u));
        }
    }
    return total;
}

template <class Term>
Complex branch_sum(Complex z, int K, TailMode tail, Term term) {
    check_branch_sum_args(z, K);
    Complex s = term(lambert_w(0, z));
    for (int k = 1; k <= K; ++k) s += term(lambert_w(k, z)) + term(lambert_w(-k, z));
    if (tail == TailMode::asymptotic) s += asymptotic_tail(z, K, term);
    return s;
}

}  // namespace

Complex branch_sum_one_over_one_plus_w(Complex z, int K, TailMode tail) {
    return branch_sum(z, K, tail, [](Complex w) { return 1.0 / (1.0 + w); });
}

Complex branch_sum_one_over_w_plus_w2(Complex z, int K, TailMode tail) {
    return branch_sum(z, K, tail, [](Complex w) { return 1.0 / (w + w * w); });
}

}  // namespace dsf

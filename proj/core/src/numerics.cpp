#include "dsf/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "dsf/errors.hpp"

namespace dsf {

Complex phi1(Complex z) {
    if (std::abs(z) < 0.5) {
        Complex term = 1.0, sum = 1.0;
        for (int n = 2; n <= 20; ++n) {
            term *= z / static_cast<double>(n);
            sum += term;
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / z;
}

Complex exp_difference(Complex a, Complex b, double t) {
    return std::exp(b * t) * t * phi1((a - b) * t);
}

double sine_integral(double x) {
    const double ax = std::abs(x);
    double si;
    if (ax <= 4.0) {
        double term = ax, sum = ax;
        for (int k = 1; k < 40; ++k) {
            term *= -ax * ax / ((2.0 * k) * (2.0 * k + 1.0));
            const double add = term / (2.0 * k + 1.0);
            sum += add;
            if (std::abs(add) < 1e-17 * std::abs(sum)) break;
        }
        si = sum;
    } else {
        // E1(i x) = -Ci(x) + i (Si(x) - pi/2), modified Lentz continued fraction
        const Complex z(0.0, ax);
        Complex b = z + 1.0, c = 1.0 / 1e-300, d = 1.0 / b, h = d;
        for (int i = 1; i < 1000; ++i) {
            const double an = -static_cast<double>(i) * i;
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            const Complex del = c * d;
            h *= del;
            if (std::abs(del - 1.0) < 1e-16) break;
        }
        const Complex e1 = h * std::exp(-z);
        si = 0.5 * kPi + e1.imag();
    }
    return x < 0.0 ? -si : si;
}

double cos_tail_integral(double x) {
    const double ax = std::abs(x);
    return std::cos(ax) - ax * (0.5 * kPi - sine_integral(ax));
}

Complex hermite(double t0, double t1, Complex y0, Complex y1, Complex f0, Complex f1, double t) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1;
}

std::vector<double> simpson_weights(std::size_t n, double h) {
    if (n < 3 || n % 2 == 0) throw ValidationError("simpson_weights: need an odd number of points >= 3");
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    for (auto& x : w) x *= h / 3.0;
    return w;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(std::max(1, threads), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace dsf

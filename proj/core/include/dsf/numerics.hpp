#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "dsf/params.hpp"

namespace dsf {

/// (exp(z) - 1) / z, accurate near z = 0.
Complex phi1(Complex z);

/// (exp(a t) - exp(b t)) / (a - b), finite and accurate when a -> b.
Complex exp_difference(Complex a, Complex b, double t);

/// Sine integral Si(x).
double sine_integral(double x);

/// int_1^inf cos(x v) / v^2 dv, even in x; equals 1 at x = 0.
double cos_tail_integral(double x);

/// Cubic Hermite interpolation on [t0, t1] from values and derivatives.
Complex hermite(double t0, double t1, Complex y0, Complex y1, Complex f0, Complex f1, double t);

/// Composite Simpson weights for n (odd, >= 3) equally spaced points.
std::vector<double> simpson_weights(std::size_t n, double h);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Results must be
/// written to per-index slots so the outcome is independent of scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace dsf

#pragma once

#include <complex>

#include "dsf/params.hpp"

namespace dsf {

/// Branch k of the Lambert W function, standard counterclockwise cut convention.
/// Points on a cut take the value from above for either sign of a zero imaginary part.
/// Throws DomainError for z = 0 with k != 0, NumericalError if Halley stalls.
Complex lambert_w(long k, Complex z);

/// Sum over k in [-K, K] of 1/(1 + W_k(z)); tends to 1/2.
Complex branch_sum_one_over_one_plus_w(Complex z, int K, TailMode tail);

/// Sum over k in [-K, K] of 1/(W_k(z) + W_k(z)^2); tends to 1/z.
Complex branch_sum_one_over_w_plus_w2(Complex z, int K, TailMode tail);

/// Asymptotic W_k(z) for large |k|, evaluated at a continuous branch index.
Complex lambert_w_asymptotic(double k, Complex z);

}  // namespace dsf

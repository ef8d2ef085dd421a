#pragma once

#include <complex>
#include <optional>

namespace dsf {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Physical configuration in natural units (times in 1/gamma).
struct SystemParams {
    double gamma = 1.0;
    double tau = 0.0;
    double phi = 0.0;      ///< reduced to [0, 2pi)
    double t_max = 10.0;
    int n_samples = 400;
    /// Infinitely distant atoms: the delayed exchange term is switched off.
    bool delay_disabled = false;

    double sample_time(int i) const { return t_max * i / (n_samples - 1); }
};

/// Validates and builds SystemParams. Throws ValidationError.
SystemParams make_params(double gamma, double tau, double phi, double t_max, int n_samples,
                         bool delay_disabled = false);

/// Reduces an angle to [0, 2pi).
double reduce_phase(double phi);

/// n with phi = n*pi within 1e-9 (n in {0, 1}), empty otherwise.
std::optional<int> phase_multiple(const SystemParams& p);

/// Same as phase_multiple but throws DomainError when phi is not a multiple of pi.
int require_phase_multiple(const SystemParams& p);

/// r = (gamma tau / 2) exp(gamma tau / 2 + i phi).
Complex lambert_argument(const SystemParams& p);

enum class TailMode { none, asymptotic };

struct LambertSeriesContext {
    Complex r;
    int k_max = 2000;
    TailMode tail_mode = TailMode::asymptotic;
};

/// Builds the series context for p. Throws ValidationError if k_max < 1.
LambertSeriesContext make_series_context(const SystemParams& p, int k_max = 2000,
                                         TailMode tail = TailMode::asymptotic);

/// True when ctx.r is exactly the value recomputed from p.
bool context_matches(const LambertSeriesContext& ctx, const SystemParams& p);

}  // namespace dsf

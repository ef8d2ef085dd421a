#include "dsf/params.hpp"

#include <cmath>
#include <sstream>

#include "dsf/errors.hpp"

namespace dsf {
namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ValidationError(what);
}

}  // namespace

double reduce_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

SystemParams make_params(double gamma, double tau, double phi, double t_max, int n_samples,
                         bool delay_disabled) {
    require(std::isfinite(gamma) && std::isfinite(tau) && std::isfinite(phi) && std::isfinite(t_max),
            "params: all numeric inputs must be finite");
    require(gamma > 0.0, "params: gamma must be > 0");
    require(tau >= 0.0, "params: tau must be >= 0");
    require(t_max > 0.0, "params: t_max must be > 0");
    require(n_samples >= 2, "params: n_samples must be >= 2");
    SystemParams p;
    p.gamma = gamma;
    p.tau = tau;
    p.phi = reduce_phase(phi);
    p.t_max = t_max;
    p.n_samples = n_samples;
    p.delay_disabled = delay_disabled;
    return p;
}

std::optional<int> phase_multiple(const SystemParams& p) {
    constexpr double tol = 1e-9;
    if (std::abs(p.phi) <= tol || std::abs(p.phi - kTwoPi) <= tol) return 0;
    if (std::abs(p.phi - kPi) <= tol) return 1;
    return std::nullopt;
}

int require_phase_multiple(const SystemParams& p) {
    const auto n = phase_multiple(p);
    if (!n) {
        std::ostringstream os;
        os << "phi = " << p.phi << " is not a multiple of pi; no stationary bound state";
        throw DomainError(os.str());
    }
    return *n;
}

Complex lambert_argument(const SystemParams& p) {
    const double x = 0.5 * p.gamma * p.tau;
    return std::polar(x * std::exp(x), p.phi);
}

LambertSeriesContext make_series_context(const SystemParams& p, int k_max, TailMode tail) {
    if (k_max < 1) throw ValidationError("series context: k_max must be >= 1");
    return LambertSeriesContext{lambert_argument(p), k_max, tail};
}

bool context_matches(const LambertSeriesContext& ctx, const SystemParams& p) {
    return ctx.r == lambert_argument(p) && ctx.k_max >= 1;
}

}  // namespace dsf

#include <cmath>
#include <sstream>

#include "dsf/analytic.hpp"
#include "dsf/errors.hpp"
#include "dsf/lambertw.hpp"
#include "dsf/numerics.hpp"

namespace dsf {

Complex amp_a(const SystemParams& p, double t) {
    if (t < 0.0) throw ValidationError("amp_a: t must be >= 0");
    return std::exp(-p.gamma * t);
}

double prob_two_excited(const SystemParams& p, double t) { return std::norm(amp_a(p, t)); }

Complex position_phase(int atom, double delta, int eta, const SystemParams& p) {
    if (atom != 1 && atom != 2) throw ValidationError("atom must be 1 or 2");
    if (eta != 1 && eta != -1) throw ValidationError("eta must be +1 or -1");
    const double theta = eta * 0.5 * (p.phi + delta * p.tau);
    return std::polar(1.0, atom == 1 ? theta : -theta);
}

Complex amp_b_single(int atom, double delta, int eta, double t, const SystemParams& p) {
    return position_phase(atom, delta, eta, p) *
           exp_difference(Complex(-p.gamma, delta), Complex(-0.5 * p.gamma, 0.0), t);
}

SeriesEvaluator::SeriesEvaluator(const SystemParams& p, const LambertSeriesContext& ctx) : p_(p), ctx_(ctx) {
    if (!context_matches(ctx, p)) throw ValidationError("series context does not match parameters");
    if (p.delay_disabled || p.tau == 0.0) return;
    for (int c = 0; c < 2; ++c) {
        const Complex z = c == 0 ? -ctx.r : ctx.r;
        auto& out = branches_[c];
        out.reserve(2 * ctx.k_max + 1);
        auto add = [&](long k) {
            const Complex w = lambert_w(k, z);
            out.push_back({-0.5 * p.gamma + w / p.tau, 1.0 / (1.0 + w)});
        };
        add(0);
        for (long k = 1; k <= ctx.k_max; ++k) {
            add(-k);
            add(k);
        }
    }
}

// Delayed contribution f(t') of channel b_+ (sign = 0) or b_- (sign = 1),
// t' = t - tau > 0, from the residues of the Laplace-domain solution.
Complex SeriesEvaluator::delayed_part(int sign, double delta, double t_after) const {
    const double g = p_.gamma, tau = p_.tau;
    const Complex c = (sign == 0 ? -0.5 : 0.5) * g * std::polar(1.0, p_.phi);
    const Complex sa(-g, delta), mu(-0.5 * g, delta);
    const Complex d = mu - c * std::exp(-sa * tau);
    if (std::abs(d) < 1e-7 * g) {
        // source frequency sits on a pole: the singular terms cancel, average around it
        const double eps = 1e-5 * g;
        return 0.5 * (delayed_part(sign, delta - eps, t_after) + delayed_part(sign, delta + eps, t_after));
    }
    Complex val = std::exp(sa * t_after) * c / (mu * d) + std::exp(-0.5 * g * (t_after + tau)) / mu;
    const double t = t_after + tau;
    const auto& br = branches_[sign];
    Complex sum = 0.0, half = 0.0;
    const std::size_t half_index = 2 * static_cast<std::size_t>(ctx_.k_max / 2) + 1;
    bool truncated = false;
    int quiet = 0;
    for (std::size_t i = 0; i < br.size(); ++i) {
        const Complex term = std::exp(br[i].s * t) * br[i].weight / (br[i].s - sa);
        sum += term;
        if (i + 1 == half_index) half = sum;
        if (i > 20 && std::abs(term) < 1e-17 * (1.0 + std::abs(sum))) {
            if (++quiet >= 4) {
                truncated = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    if (!truncated && ctx_.k_max >= 2 && std::abs(sum - half) > kConvergenceTol) {
        std::ostringstream os;
        os << "amp_b_series: branch sum not converged at t=" << t << " (change " << std::abs(sum - half)
           << " between K/2 and K)";
        throw NumericalError(os.str());
    }
    return val + sum;
}

bool SeriesEvaluator::near_pole(int channel, double delta) const {
    const double g = p_.gamma;
    const Complex c = (channel == 0 ? -0.5 : 0.5) * g * std::polar(1.0, p_.phi);
    const Complex sa(-g, delta), mu(-0.5 * g, delta);
    if (p_.delay_disabled) return false;
    if (p_.tau == 0.0) return std::abs(mu - c) < 1e-7 * g;
    return std::abs(mu - c * std::exp(-sa * p_.tau)) < 1e-7 * g;
}

std::vector<SeriesEvaluator::ExpTerm> SeriesEvaluator::channel_terms(int channel, double delta) const {
    const double g = p_.gamma, tau = p_.tau;
    const Complex c = (channel == 0 ? -0.5 : 0.5) * g * std::polar(1.0, p_.phi);
    const Complex sa(-g, delta), mu(-0.5 * g, delta);
    std::vector<ExpTerm> out;
    if (!p_.delay_disabled && tau == 0.0) {
        const Complex k = 0.5 * g - c;
        out.push_back({1.0 / (sa + k), sa, 0.0});
        out.push_back({-1.0 / (sa + k), -k, 0.0});
        return out;
    }
    out.push_back({1.0 / mu, sa, 0.0});
    out.push_back({-1.0 / mu, Complex(-0.5 * g, 0.0), 0.0});
    if (p_.delay_disabled) return out;
    const Complex d = mu - c * std::exp(-sa * tau);
    out.push_back({c / (mu * d), sa, tau});
    out.push_back({std::exp(-0.5 * g * tau) / mu, Complex(-0.5 * g, 0.0), tau});
    for (const auto& b : branches_[channel]) out.push_back({std::exp(b.s * tau) * b.weight / (b.s - sa), b.s, tau});
    return out;
}

Pair SeriesEvaluator::beta_regular(double delta, int eta, double t) const {
    const Complex u1 = position_phase(1, delta, eta, p_), u2 = std::conj(u1);
    const double g = p_.gamma;
    const Complex sa(-g, delta);
    Complex bp, bm;
    if (!p_.delay_disabled && p_.tau == 0.0) {
        const Complex e = std::polar(1.0, p_.phi);
        const Complex kp = 0.5 * g + 0.5 * g * e, km = 0.5 * g - 0.5 * g * e;
        bp = (u1 + u2) * exp_difference(sa, -kp, t);
        bm = (u1 - u2) * exp_difference(sa, -km, t);
    } else {
        const Complex pre = exp_difference(sa, Complex(-0.5 * g, 0.0), t);
        bp = (u1 + u2) * pre;
        bm = (u1 - u2) * pre;
        if (!p_.delay_disabled && t > p_.tau) {
            bp += (u1 + u2) * delayed_part(0, delta, t - p_.tau);
            bm += (u1 - u2) * delayed_part(1, delta, t - p_.tau);
        }
    }
    return {0.5 * (bp + bm), 0.5 * (bp - bm)};
}

Pair SeriesEvaluator::beta(double delta, int eta, double t) const {
    if (t < 0.0) throw ValidationError("amp_b_series: t must be >= 0");
    if (eta != 1 && eta != -1) throw ValidationError("eta must be +1 or -1");
    return beta_regular(delta, eta, t);
}

Complex amp_b_series(int atom, double delta, int eta, double t, const SystemParams& p,
                     const LambertSeriesContext& ctx) {
    if (atom != 1 && atom != 2) throw ValidationError("atom must be 1 or 2");
    return SeriesEvaluator(p, ctx).beta(atom, delta, eta, t);
}

Complex amp_b_steady(int atom, double delta, int eta, const SystemParams& p) {
    const int n = require_phase_multiple(p);
    const Complex u = position_phase(atom, delta, eta, p);
    if (p.delay_disabled) return 0.0;
    const double x = 0.5 * p.gamma * p.tau;
    const double parity = n % 2 == 0 ? 1.0 : -1.0;
    return (u - parity * std::conj(u)) / (2.0 * Complex(p.gamma, -delta) * (1.0 + x));
}

double prob_one_excited_ss(const SystemParams& p) {
    require_phase_multiple(p);
    if (p.delay_disabled) return 0.0;
    const double x = 0.5 * p.gamma * p.tau;
    return std::sinh(x) / ((1.0 + x) * (1.0 + x) * std::exp(x));
}

double prob_one_excited_ss_exp(const SystemParams& p) {
    require_phase_multiple(p);
    if (p.delay_disabled) return 0.0;
    const double x = 0.5 * p.gamma * p.tau;
    return -std::expm1(-2.0 * x) / (2.0 * (1.0 + x) * (1.0 + x));
}

double bic_probability(const SystemParams& p) { return 2.0 * prob_one_excited_ss(p); }

double dipole_correlation_ss(const SystemParams& p) {
    const int n = require_phase_multiple(p);
    return -std::cos(n * kPi) / 2.0 * prob_one_excited_ss(p);
}

double p1_coincident(double gamma, double t) { return 2.0 * gamma * t * std::exp(-2.0 * gamma * t); }

double p1_independent(double gamma, double t) {
    return 2.0 * std::exp(-gamma * t) * (1.0 - std::exp(-gamma * t));
}

std::array<std::array<Complex, 2>, 2> kick_response(const SystemParams& p, double t) {
    const double g = p.gamma;
    const double env = std::exp(-0.5 * g * t);
    if (p.delay_disabled) return {{{env, 0.0}, {0.0, env}}};
    const Complex e = std::polar(1.0, p.phi);
    const Complex cp = -0.5 * g * e, cm = 0.5 * g * e;
    Complex hp, hm;
    if (p.tau == 0.0) {
        hp = env * std::exp(cp * t);
        hm = env * std::exp(cm * t);
    } else {
        const Complex ap = cp * std::exp(0.5 * g * p.tau), am = cm * std::exp(0.5 * g * p.tau);
        const long jmax = static_cast<long>(std::floor(t / p.tau));
        for (long j = 0; j <= jmax; ++j) {
            const double s = t - j * p.tau;
            const double lg = j * std::log(std::max(s, 1e-300)) - std::lgamma(j + 1.0);
            const double mag = j == 0 ? 1.0 : std::exp(lg);
            hp += std::pow(ap, static_cast<double>(j)) * mag;
            hm += std::pow(am, static_cast<double>(j)) * mag;
        }
        hp *= env;
        hm *= env;
    }
    const Complex h11 = 0.5 * (hp + hm), h12 = 0.5 * (hp - hm);
    return {{{h11, h12}, {h12, h11}}};
}

}  // namespace dsf

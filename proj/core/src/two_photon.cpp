#include "dsf/two_photon.hpp"

#include <cmath>

#include "dsf/errors.hpp"
#include "dsf/numerics.hpp"

namespace dsf {

namespace {

// Real channel weights: cos for the symmetric channel, sin for the antisymmetric one.
double channel_weight(int channel, double delta, int eta, const SystemParams& p) {
    const double theta = eta * 0.5 * (p.phi + delta * p.tau);
    return channel == 0 ? std::cos(theta) : std::sin(theta);
}

void check_eta(int ea, int eb) {
    if ((ea != 1 && ea != -1) || (eb != 1 && eb != -1)) throw ValidationError("eta must be +1 or -1");
}

// int_start^t e^{i D_b s} w e^{rate (s - start)} ds
Complex integrate_term(const SeriesEvaluator::ExpTerm& term, double db, double t) {
    if (t <= term.start) return 0.0;
    const double len = t - term.start;
    return term.weight * std::polar(1.0, db * term.start) * len * phi1((Complex(0.0, db) + term.rate) * len);
}

}  // namespace

TwoPhotonEvaluator::TwoPhotonEvaluator(const SystemParams& p, const LambertSeriesContext& ctx) : series_(p, ctx) {}

// channel part of sum_r conj(u_r(b)) int_0^t e^{i D_b s} beta_r(a, s) ds
Complex TwoPhotonEvaluator::channel_half(int ch, double da, double db, double t) const {
    if (series_.near_pole(ch, da)) {
        const double eps = 1e-5 * series_.params().gamma;
        Complex sum = 0.0;
        for (double d : {da - eps, da + eps})
            for (const auto& term : series_.channel_terms(ch, d)) sum += 0.5 * integrate_term(term, db, t);
        return sum;
    }
    Complex acc = 0.0;
    for (const auto& term : series_.channel_terms(ch, da)) acc += integrate_term(term, db, t);
    return acc;
}

Complex TwoPhotonEvaluator::half(double da, int ea, double db, int eb, double t) const {
    const SystemParams& p = series_.params();
    Complex total = 0.0;
    for (int ch = 0; ch < 2; ++ch) {
        const double w = 2.0 * channel_weight(ch, da, ea, p) * channel_weight(ch, db, eb, p);
        if (w != 0.0) total += w * channel_half(ch, da, db, t);
    }
    return total;
}

Complex TwoPhotonEvaluator::amplitude(double da, int ea, double db, int eb, double t) const {
    check_eta(ea, eb);
    if (t < 0.0) throw ValidationError("amp_c2_series: t must be >= 0");
    return half(da, ea, db, eb, t) + half(db, eb, da, ea, t);
}

Complex amp_c2_series(double da, int ea, double db, int eb, double t, const SystemParams& p,
                      const LambertSeriesContext& ctx) {
    return TwoPhotonEvaluator(p, ctx).amplitude(da, ea, db, eb, t);
}

Complex LongTimeAmplitude::at(double da, double db, double t) const {
    return free + std::polar(1.0, db * t) * bound_b + std::polar(1.0, da * t) * bound_a;
}

namespace {

struct HalfLongTime {
    Complex free;
    Complex bound;  // coefficient of e^{i D_b t}
};

// Laplace-domain form of sum_r conj(u_r(b)) int_0^inf e^{i D_b s} beta_r(a, s) ds, p = -i D_b.
// The bound channel has a pole at p = 0 that is cancelled by its weight, which
// vanishes linearly at D_b = 0; there w(D_b)/p is replaced by its limit.
HalfLongTime half_longtime(double da, int ea, double db, int eb, const SystemParams& p, int bound_channel) {
    const double g = p.gamma, tau = p.tau;
    const Complex s = Complex(0.0, -db);
    const Complex sa(-g, da);
    HalfLongTime out;
    for (int ch = 0; ch < 2; ++ch) {
        const double wa = 2.0 * channel_weight(ch, da, ea, p);
        const double wb = channel_weight(ch, db, eb, p);
        if (ch == bound_channel) {
            Complex wb_over_p;
            if (std::abs(db) >= 1e-6 * g) {
                wb_over_p = wb / s;
            } else {
                const double theta0 = eb * 0.5 * p.phi;
                const double slope = eb * 0.5 * tau * (ch == 0 ? -std::sin(theta0) : std::cos(theta0));
                wb_over_p = Complex(0.0, slope);  // slope * D_b / (-i D_b)
            }
            // chi(p) = p (1 + (gamma tau / 2) phi1(-p tau)) once c = gamma / 2
            const Complex chi_hat = 1.0 + 0.5 * g * tau * phi1(-s * tau);
            out.free += wa * wb_over_p / ((s - sa) * chi_hat);
            const Complex residue = 1.0 / ((-sa) * (1.0 + 0.5 * g * tau));
            out.bound -= wa * wb_over_p * residue;  // B e^{i D_b t} / (i D_b) = -B e^{i D_b t} / p
        } else {
            Complex chi;
            if (p.delay_disabled) {
                chi = s + 0.5 * g;
            } else {
                const Complex c = (ch == 0 ? -0.5 : 0.5) * g * std::polar(1.0, p.phi);
                chi = s + 0.5 * g - c * std::exp(-s * tau);
            }
            out.free += wa * wb / ((s - sa) * chi);
        }
    }
    return out;
}

}  // namespace

LongTimeAmplitude c2_longtime_parts(double da, int ea, double db, int eb, const SystemParams& p) {
    check_eta(ea, eb);
    int bound_channel = -1;
    if (!p.delay_disabled) {
        const int n = require_phase_multiple(p);
        bound_channel = n == 1 ? 0 : 1;
    }
    const HalfLongTime ab = half_longtime(da, ea, db, eb, p, bound_channel);
    const HalfLongTime ba = half_longtime(db, eb, da, ea, p, bound_channel);
    return {ab.free + ba.free, ba.bound, ab.bound};
}

Complex amp_c2_longtime(double da, int ea, double db, int eb, double t, const SystemParams& p) {
    return c2_longtime_parts(da, ea, db, eb, p).at(da, db, t);
}

JointDensity c2_joint_density(double da, int ea, double db, int eb, const SystemParams& p) {
    if (!p.delay_disabled) {
        const LongTimeAmplitude c = c2_longtime_parts(da, ea, db, eb, p);
        return {c.density(), std::norm(c.free)};
    }
    // zero phases give cos^2 = 1 in place of its average 1/2
    SystemParams q = p;
    q.tau = 0.0;
    q.phi = 0.0;
    const double f = 0.5 * std::norm(c2_longtime_parts(da, ea, db, eb, q).free);
    return {f, f};
}

PairBudget pair_budget(const SystemParams& p, double cutoff, double spacing, int threads) {
    if (!(cutoff > 0.0) || !(spacing > 0.0)) throw ValidationError("pair_budget: cutoff and spacing must be > 0");
    if (!p.delay_disabled) require_phase_multiple(p);
    const long half = 2 * static_cast<long>(std::ceil(cutoff / (2.0 * spacing)));
    const double h = cutoff / static_cast<double>(half);
    const std::size_t n = 2 * half + 1;
    const auto w = simpson_weights(n, h);
    const auto wh = simpson_weights(half + 1, h);  // inner square [-cutoff/2, cutoff/2]
    const long q = half / 2;
    // (-,-) mirrors (+,+) and (-,+) mirrors (+,-)
    std::vector<double> rows_free(n, 0.0), rows_bound(n, 0.0), inner_free(n, 0.0), inner_bound(n, 0.0);
    parallel_for(n, threads, [&](std::size_t i) {
        const double da = -cutoff + h * static_cast<double>(i);
        const bool inner_i = std::abs(static_cast<long>(i) - half) <= q;
        for (std::size_t j = 0; j < n; ++j) {
            const double db = -cutoff + h * static_cast<double>(j);
            double f = 0.0, b = 0.0;
            for (int eb : {1, -1}) {
                const JointDensity c = c2_joint_density(da, 1, db, eb, p);
                f += 2.0 * c.free;
                b += 2.0 * (c.pair - c.free);
            }
            rows_free[i] += w[j] * f;
            rows_bound[i] += w[j] * b;
            const long jj = static_cast<long>(j) - half;
            if (inner_i && std::abs(jj) <= q) {
                inner_free[i] += wh[jj + q] * f;
                inner_bound[i] += wh[jj + q] * b;
            }
        }
    });
    double f = 0.0, b = 0.0, fi = 0.0, bi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        f += w[i] * rows_free[i];
        b += w[i] * rows_bound[i];
        const long ii = static_cast<long>(i) - half;
        if (std::abs(ii) <= q) {
            fi += wh[ii + q] * inner_free[i];
            bi += wh[ii + q] * inner_bound[i];
        }
    }
    const double pref = 0.5 * std::pow(p.gamma / (4.0 * kPi), 2);
    PairBudget out;
    out.cutoff = cutoff;
    out.spacing = h;
    out.free_pair = pref * (2.0 * f - fi);
    out.bound_free = pref * (2.0 * b - bi);
    return out;
}

}  // namespace dsf

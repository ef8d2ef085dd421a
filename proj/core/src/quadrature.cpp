#include "dsf/quadrature.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "dsf/analytic.hpp"
#include "dsf/dde.hpp"
#include "dsf/errors.hpp"
#include "dsf/numerics.hpp"

namespace dsf {

QuadratureSpec make_quadrature_spec(double cutoff, double spacing, double tol) {
    if (!(cutoff > 0.0) || !(spacing > 0.0) || !(tol > 0.0) || !std::isfinite(cutoff))
        throw ValidationError("quadrature: cutoff, spacing and tol must be finite and > 0");
    QuadratureSpec q;
    q.cutoff = cutoff;
    q.spacing = spacing;
    q.tol = tol;
    return q;
}

BetaEngine engine_from_config(const RunConfig& cfg) {
    BetaEngine e;
    e.kind = cfg.engine;
    e.dde_tol = cfg.dde_tol;
    e.k_max = cfg.k_max;
    e.tail = cfg.tail;
    e.threads = cfg.threads;
    return e;
}

QuadratureSpec quadrature_from_config(const RunConfig& cfg) {
    return make_quadrature_spec(cfg.quad_cutoff, cfg.quad_spacing, cfg.quad_tol);
}

// For |Delta| -> inf, beta_r ~ u_r (E - h_rr - h_rrbar u_rbar / u_r) / (i Delta) with
// E = exp((i Delta - gamma) t). Products of these carry exp(i Delta T) for a few
// fixed T; each integrates over |Delta| > cutoff to 2 A G(cutoff |T|) / cutoff.
TailCorrection detuning_tail(const SystemParams& p, double t, double cutoff) {
    const auto h = kick_response(p, t);
    const double tau = p.delay_disabled ? 0.0 : p.tau;
    const double e1 = std::exp(-p.gamma * t), e2 = e1 * e1;
    auto tail = [&](Complex a, double T) { return a * (2.0 / cutoff) * cos_tail_integral(cutoff * T); };
    Complex pop = 0.0, coh = 0.0;
    for (int eta : {1, -1}) {
        const Complex ph = std::polar(1.0, eta * p.phi);
        for (int r = 0; r < 2; ++r) {
            const int sg = r == 0 ? 1 : -1;
            const Complex hs = h[r][r], hx = h[r][1 - r];
            const Complex phr = sg > 0 ? ph : std::conj(ph);
            pop += tail(e2 + std::norm(hs) + std::norm(hx), 0.0);
            pop += tail(-2.0 * e1 * std::conj(hs), t);
            pop += tail(-2.0 * e1 * std::conj(hx) * phr, t + sg * eta * tau);
            pop += tail(2.0 * hs * std::conj(hx) * phr, tau);
        }
        const Complex h11 = h[0][0], h12 = h[0][1], h21 = h[1][0], h22 = h[1][1];
        coh += tail(e2 * ph, eta * tau);
        coh += tail(-e1 * std::conj(h22) * ph, t + eta * tau);
        coh += tail(-e1 * std::conj(h21), t);
        coh += tail(-e1 * h11 * ph, -t + eta * tau);
        coh += tail(h11 * std::conj(h22) * ph, eta * tau);
        coh += tail(h11 * std::conj(h21), 0.0);
        coh += tail(-e1 * h12, t);
        coh += tail(h12 * std::conj(h22), 0.0);
        coh += tail(h12 * std::conj(h21) * std::conj(ph), eta * tau);
    }
    const double pref = p.gamma / (4.0 * kPi);
    // a disabled delay stands for tau -> inf, where the cross term averages out
    if (p.delay_disabled) coh = 0.0;
    return {pref * pop.real(), pref * coh.real()};
}

namespace {

struct Integrands {
    std::vector<double> deltas;
    std::vector<std::vector<double>> pop;  // [delta][time]
    std::vector<std::vector<double>> coh;
};

Integrands evaluate(const SystemParams& p, const BetaEngine& engine, double cutoff, std::size_t n,
                    const std::vector<double>& times) {
    Integrands in;
    in.deltas.resize(n);
    const double h = 2.0 * cutoff / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) in.deltas[i] = -cutoff + h * static_cast<double>(i);
    in.pop.assign(n, std::vector<double>(times.size(), 0.0));
    in.coh.assign(n, std::vector<double>(times.size(), 0.0));

    std::unique_ptr<SeriesEvaluator> series;
    if (engine.kind == Engine::series)
        series = std::make_unique<SeriesEvaluator>(p, make_series_context(p, engine.k_max, engine.tail));

    // eta = -1 mirrors eta = +1 with the atoms swapped
    parallel_for(n, engine.threads, [&](std::size_t i) {
        const double d = in.deltas[i];
        auto store = [&](std::size_t k, const Pair& b) {
            in.pop[i][k] = 2.0 * (std::norm(b[0]) + std::norm(b[1]));
            in.coh[i][k] = p.delay_disabled ? 0.0 : 2.0 * (b[0] * std::conj(b[1])).real();
        };
        if (series) {
            for (std::size_t k = 0; k < times.size(); ++k) store(k, series->beta(d, 1, times[k]));
        } else {
            const DdeMode m = make_dde_mode(p, d, 1);
            const auto ys = solve_dde_adaptive(p, m, times, engine.dde_tol);
            for (std::size_t k = 0; k < times.size(); ++k)
                store(k, Pair{m.phase[0] * ys[k][0], m.phase[1] * ys[k][1]});
        }
    });
    return in;
}

}  // namespace

SingleExcitationIntegrals integrate_single_excitation(const SystemParams& p, const BetaEngine& engine,
                                                      const QuadratureSpec& quad,
                                                      const std::vector<double>& times) {
    if (times.empty()) return {};
    if (!(quad.cutoff > 0.0) || !(quad.spacing > 0.0) || !(quad.tol > 0.0))
        throw ValidationError("quadrature: cutoff, spacing and tol must be > 0");
    const double t_last = times.back();
    double spacing = quad.spacing;
    if (t_last > 0.0) spacing = std::min(spacing, kPi / (4.0 * t_last));
    const double pref = p.gamma / (4.0 * kPi);

    SingleExcitationIntegrals out;
    out.times = times;
    std::vector<double> previous;
    for (int level = 0; level <= quad.max_refinements; ++level) {
        // n - 1 divisible by 4 so the every-other-point rule is Simpson as well
        const std::size_t panels = 4 * static_cast<std::size_t>(std::ceil(2.0 * quad.cutoff / (4.0 * spacing)));
        const std::size_t n = panels + 1;
        const double h = 2.0 * quad.cutoff / static_cast<double>(panels);
        const Integrands in = evaluate(p, engine, quad.cutoff, n, times);
        const auto w = simpson_weights(n, h);
        const auto w2 = simpson_weights((n - 1) / 2 + 1, 2.0 * h);

        out.p1.assign(times.size(), 0.0);
        out.coherence.assign(times.size(), 0.0);
        out.error.assign(times.size(), 0.0);
        out.spacing = h;
        out.points = n;
        double worst = 0.0;
        std::size_t worst_k = 0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            double s = 0.0, s2 = 0.0, c = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                s += w[i] * in.pop[i][k];
                c += w[i] * in.coh[i][k];
                if (i % 2 == 0) s2 += w2[i / 2] * in.pop[i][k];
            }
            const TailCorrection tail = detuning_tail(p, times[k], quad.cutoff);
            out.p1[k] = pref * s + tail.p1;
            out.coherence[k] = pref * c + tail.coherence;
            out.error[k] = pref * std::abs(s - s2) / 15.0;
            const double rel = out.error[k] / std::max(out.p1[k], 1e-3);
            if (rel > worst) {
                worst = rel;
                worst_k = k;
            }
        }
        if (worst <= quad.tol) return out;
        if (level == quad.max_refinements) {
            std::ostringstream os;
            os << "quadrature: Richardson estimate " << worst << " above tol " << quad.tol << " at t="
               << times[worst_k] << " after " << level << " refinements";
            const double prev = previous.empty() ? out.p1[worst_k] : previous[worst_k];
            throw QuadratureError(os.str(), prev, out.p1[worst_k]);
        }
        previous = out.p1;
        spacing = 0.5 * h;
    }
    return out;
}

double prob_one_excited(double t, const SystemParams& p, const BetaEngine& engine, const QuadratureSpec& quad) {
    if (t < 0.0) throw ValidationError("prob_one_excited: t must be >= 0");
    return integrate_single_excitation(p, engine, quad, {t}).p1.front();
}

}  // namespace dsf

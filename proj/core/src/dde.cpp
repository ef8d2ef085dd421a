#include "dsf/dde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dsf/errors.hpp"
#include "dsf/numerics.hpp"

namespace dsf {

DdeMode make_dde_mode(const SystemParams& p, double delta, int eta) {
    if (eta != 1 && eta != -1) throw ValidationError("eta must be +1 or -1");
    DdeMode m;
    m.delta = delta;
    m.eta = eta;
    const double theta = eta * 0.5 * (p.phi + delta * p.tau);
    m.phase = {std::polar(1.0, theta), std::polar(1.0, -theta)};
    // kappa_r = -(gamma/2) e^{i phi} u_rbar / u_r
    const Complex c = -0.5 * p.gamma * std::polar(1.0, p.phi);
    m.kappa = {c * std::polar(1.0, -2.0 * theta), c * std::polar(1.0, 2.0 * theta)};
    m.delayed = !p.delay_disabled;
    return m;
}

Pair dde_rhs(const SystemParams& p, const DdeMode& m, double t, const Pair& y, const Pair& yd) {
    const Complex source = std::exp(Complex(-p.gamma * t, m.delta * t));
    Pair f{-0.5 * p.gamma * y[0] + source, -0.5 * p.gamma * y[1] + source};
    if (m.delayed && t > p.tau) {
        f[0] += m.kappa[0] * yd[1];
        f[1] += m.kappa[1] * yd[0];
    }
    return f;
}

HistoryBuffer::HistoryBuffer(double span) : span_(span) {}

void HistoryBuffer::push(double t, const Pair& y, const Pair& f) {
    if (!samples_.empty() && t <= samples_.back().t)
        throw ContractViolation("history: samples must be pushed in increasing time order");
    samples_.push_back({t, y, f});
    prune();
}

void HistoryBuffer::prune() {
    const double keep_from = samples_.back().t - span_;
    while (samples_.size() > 2 && samples_[1].t <= keep_from) samples_.pop_front();
}

double HistoryBuffer::front_time() const { return samples_.empty() ? 0.0 : samples_.front().t; }

double HistoryBuffer::back_time() const { return samples_.empty() ? 0.0 : samples_.back().t; }

Pair HistoryBuffer::at(double s) const {
    if (s <= 0.0) return {Complex(0.0), Complex(0.0)};
    if (!samples_.empty()) {
        // absorb rounding in t + h - tau at the window edges
        const double slack = 1e-12 * std::max(1.0, std::abs(samples_.back().t));
        if (s > samples_.back().t && s <= samples_.back().t + slack) s = samples_.back().t;
        if (s < samples_.front().t && s >= samples_.front().t - slack) s = samples_.front().t;
    }
    if (samples_.empty() || s < samples_.front().t || s > samples_.back().t) {
        std::ostringstream os;
        os << "history: query at t=" << s << " outside retained window [" << front_time() << ", "
           << back_time() << "]";
        throw ContractViolation(os.str());
    }
    auto it = std::upper_bound(samples_.begin(), samples_.end(), s,
                               [](double v, const Sample& x) { return v < x.t; });
    if (it == samples_.end()) return samples_.back().y;
    const Sample& b = *it;
    const Sample& a = *(it - 1);
    return {hermite(a.t, b.t, a.y[0], b.y[0], a.f[0], b.f[0], s),
            hermite(a.t, b.t, a.y[1], b.y[1], a.f[1], b.f[1], s)};
}

namespace {

// Delayed argument for a stage at time ts with stage state ys. With tau = 0
// the exchange is instantaneous and uses the stage state itself.
Pair delayed_value(const SystemParams& p, const DdeMode& m, const HistoryBuffer& h, double ts,
                   const Pair& ys) {
    if (!m.delayed) return {Complex(0.0), Complex(0.0)};
    if (p.tau == 0.0) return ys;
    if (ts <= p.tau) return {Complex(0.0), Complex(0.0)};
    return h.at(ts - p.tau);
}

Pair axpy(const Pair& y, double h, const Pair& k) { return {y[0] + h * k[0], y[1] + h * k[1]}; }

}  // namespace

DdeTrajectory simulate_dde_permode(const SystemParams& p, double delta, int eta, double dt) {
    const double limit = std::min(0.05 / std::max(std::abs(delta), 1e-300), 0.02 / p.gamma);
    if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "simulate_dde_permode: dt=" << dt << " exceeds min(0.05/|Delta|, 0.02/gamma)=" << limit;
        throw ValidationError(os.str());
    }
    DdeTrajectory tr;
    tr.mode = make_dde_mode(p, delta, eta);
    const auto& m = tr.mode;
    double h_base = dt;
    // steps land on the breakpoints j tau; only the last step may be shorter
    if (m.delayed && p.tau > 0.0) h_base = p.tau / std::ceil(p.tau / dt - 1e-9);
    const long n = static_cast<long>(std::ceil(p.t_max / h_base - 1e-9));

    HistoryBuffer hist(p.tau);
    Pair y{Complex(0.0), Complex(0.0)};
    Pair f = dde_rhs(p, m, 0.0, y, delayed_value(p, m, hist, 0.0, y));
    hist.push(0.0, y, f);
    tr.t.reserve(n + 1);
    tr.reduced.reserve(n + 1);
    tr.t.push_back(0.0);
    tr.reduced.push_back(y);

    for (long i = 0; i < n; ++i) {
        const double t = h_base * static_cast<double>(i);
        const double t1 = i + 1 == n ? p.t_max : h_base * static_cast<double>(i + 1);
        const double h = t1 - t, tm = t + 0.5 * h;
        const Pair& k1 = f;
        Pair y2 = axpy(y, 0.5 * h, k1);
        const Pair k2 = dde_rhs(p, m, tm, y2, delayed_value(p, m, hist, tm, y2));
        Pair y3 = axpy(y, 0.5 * h, k2);
        const Pair k3 = dde_rhs(p, m, tm, y3, delayed_value(p, m, hist, tm, y3));
        Pair y4 = axpy(y, h, k3);
        const Pair k4 = dde_rhs(p, m, t1, y4, delayed_value(p, m, hist, t1, y4));
        for (int r = 0; r < 2; ++r) y[r] += h / 6.0 * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
        f = dde_rhs(p, m, t1, y, delayed_value(p, m, hist, t1, y));
        hist.push(t1, y, f);
        tr.t.push_back(t1);
        tr.reduced.push_back(y);
    }
    return tr;
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

std::vector<Pair> solve_dde_adaptive(const SystemParams& p, const DdeMode& m,
                                     const std::vector<double>& times, double tol, DdeStats* stats) {
    std::vector<Pair> out(times.size(), Pair{Complex(0.0), Complex(0.0)});
    if (times.empty()) return out;
    if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0)
        throw ValidationError("solve_dde_adaptive: times must be ascending and >= 0");
    const double t_end = times.back();
    const double rtol = tol;
    const double atol = tol / (p.gamma + std::abs(m.delta));
    const bool finite_delay = m.delayed && p.tau > 0.0;
    const double h_max = finite_delay ? p.tau : std::max(t_end, 1e-300);

    HistoryBuffer hist(finite_delay ? p.tau : 0.0);
    Pair y{Complex(0.0), Complex(0.0)};
    double t = 0.0;
    Pair f = dde_rhs(p, m, 0.0, y, delayed_value(p, m, hist, 0.0, y));
    hist.push(0.0, y, f);

    std::size_t next_out = 0;
    while (next_out < times.size() && times[next_out] <= 0.0) ++next_out;

    // derivative jumps propagate along multiples of tau
    double next_break = finite_delay ? p.tau : t_end;
    double h = std::min(h_max, 0.1 / (p.gamma + std::abs(m.delta)));
    long accepted = 0, rejected = 0;

    while (next_out < times.size()) {
        while (finite_delay && next_break <= t) next_break += p.tau;
        const double stop = std::min(next_break, t_end);
        bool clipped = false;
        if (t + h >= stop - 1e-12 * std::max(1.0, stop)) {
            h = stop - t;
            clipped = true;
        }
        auto stage = [&](double ts, const Pair& ys) {
            return dde_rhs(p, m, ts, ys, delayed_value(p, m, hist, ts, ys));
        };
        const Pair& k1 = f;
        Pair ys;
        for (int r = 0; r < 2; ++r) ys[r] = y[r] + h * a21 * k1[r];
        const Pair k2 = stage(t + c2 * h, ys);
        for (int r = 0; r < 2; ++r) ys[r] = y[r] + h * (a31 * k1[r] + a32 * k2[r]);
        const Pair k3 = stage(t + c3 * h, ys);
        for (int r = 0; r < 2; ++r) ys[r] = y[r] + h * (a41 * k1[r] + a42 * k2[r] + a43 * k3[r]);
        const Pair k4 = stage(t + c4 * h, ys);
        for (int r = 0; r < 2; ++r)
            ys[r] = y[r] + h * (a51 * k1[r] + a52 * k2[r] + a53 * k3[r] + a54 * k4[r]);
        const Pair k5 = stage(t + c5 * h, ys);
        for (int r = 0; r < 2; ++r)
            ys[r] = y[r] + h * (a61 * k1[r] + a62 * k2[r] + a63 * k3[r] + a64 * k4[r] + a65 * k5[r]);
        const Pair k6 = stage(t + h, ys);
        Pair y5;
        for (int r = 0; r < 2; ++r)
            y5[r] = y[r] + h * (b1 * k1[r] + b3 * k3[r] + b4 * k4[r] + b5 * k5[r] + b6 * k6[r]);
        const Pair k7 = stage(t + h, y5);
        double err = 0.0;
        for (int r = 0; r < 2; ++r) {
            const Complex e =
                h * (e1 * k1[r] + e3 * k3[r] + e4 * k4[r] + e5 * k5[r] + e6 * k6[r] + e7 * k7[r]);
            const double sc = atol + rtol * std::max(std::abs(y[r]), std::abs(y5[r]));
            err = std::max(err, std::abs(e) / sc);
        }
        if (!std::isfinite(err)) throw NumericalError("solve_dde_adaptive: non-finite error estimate");
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (err <= 1.0) {
            const double t_new = clipped ? stop : t + h;
            while (next_out < times.size() && times[next_out] <= t_new) {
                const double s = times[next_out];
                out[next_out] = {hermite(t, t_new, y[0], y5[0], f[0], k7[0], s),
                                 hermite(t, t_new, y[1], y5[1], f[1], k7[1], s)};
                ++next_out;
            }
            t = t_new;
            y = y5;
            f = k7;
            hist.push(t, y, f);
            ++accepted;
            h = std::min(h_max, h * factor);
        } else {
            ++rejected;
            h *= std::min(1.0, factor);
            if (h < 1e-14 * std::max(1.0, t))
                throw NumericalError("solve_dde_adaptive: step size underflow");
        }
    }
    if (stats) {
        stats->accepted = accepted;
        stats->rejected = rejected;
    }
    return out;
}

}  // namespace dsf

#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <vector>

#include "dsf/params.hpp"

namespace dsf {

using Pair = std::array<Complex, 2>;

/// Coefficients of the reduced per-mode delay equations for one (Delta, eta).
/// The amplitudes are integrated with the position phase u_r divided out:
///   beta_r = u_r * y_r,
///   y_r' = -(gamma/2) y_r + kappa_r y_rbar(t - tau) Theta(t - tau) + exp((i Delta - gamma) t).
struct DdeMode {
    double delta = 0.0;
    int eta = 1;
    Pair phase{};   ///< u_r = exp(+-i eta (phi + Delta tau) / 2)
    Pair kappa{};   ///< delayed exchange coefficients
    bool delayed = true;
};

DdeMode make_dde_mode(const SystemParams& p, double delta, int eta);

/// Right-hand side given the current and delayed reduced amplitudes.
Pair dde_rhs(const SystemParams& p, const DdeMode& m, double t, const Pair& y, const Pair& y_delayed);

/// Accepted-step record with cubic-Hermite dense output. Retains at least the
/// window [t - span, t]; queries older than the oldest retained sample are a
/// ContractViolation.
class HistoryBuffer {
public:
    explicit HistoryBuffer(double span);

    void push(double t, const Pair& y, const Pair& f);
    /// Value at time s. s <= 0 returns zero (the amplitudes vanish before the start).
    Pair at(double s) const;
    double front_time() const;
    double back_time() const;
    std::size_t size() const { return samples_.size(); }

private:
    struct Sample {
        double t;
        Pair y;
        Pair f;
    };
    void prune();

    double span_;
    std::deque<Sample> samples_;
};

/// Fixed-step RK4 trajectory of one mode (method of steps via HistoryBuffer).
struct DdeTrajectory {
    DdeMode mode;
    std::vector<double> t;
    std::vector<Pair> reduced;  ///< y_r; beta_r = mode.phase[r] * y_r

    Complex beta(int atom, std::size_t i) const { return mode.phase[atom] * reduced[i][atom]; }
};

/// Precondition: dt <= min(0.05/|Delta|, 0.02/gamma). The step is further capped
/// at tau so delayed stages only read accepted history.
DdeTrajectory simulate_dde_permode(const SystemParams& p, double delta, int eta, double dt);

struct DdeStats {
    long accepted = 0;
    long rejected = 0;
};

/// Adaptive Dormand-Prince 5(4) solve with cubic-Hermite history and output.
/// Returns y_r at each of `times` (ascending, within [0, t_max]).
std::vector<Pair> solve_dde_adaptive(const SystemParams& p, const DdeMode& m,
                                     const std::vector<double>& times, double tol,
                                     DdeStats* stats = nullptr);

}  // namespace dsf

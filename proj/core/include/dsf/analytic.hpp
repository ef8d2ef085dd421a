#pragma once

#include <array>
#include <vector>

#include "dsf/dde.hpp"
#include "dsf/params.hpp"

namespace dsf {

/// Doubly-excited amplitude a(t) = exp(-gamma t), the same for every delay.
Complex amp_a(const SystemParams& p, double t);
double prob_two_excited(const SystemParams& p, double t);

/// Scaled amplitude of an atom decaying alone:
/// u_r (exp((i Delta - gamma) t) - exp(-gamma t / 2)) / (i Delta - gamma / 2).
Complex amp_b_single(int atom, double delta, int eta, double t, const SystemParams& p);

/// Position phase u_r = exp(+-i eta (phi + Delta tau) / 2) of atom r (1 or 2).
Complex position_phase(int atom, double delta, int eta, const SystemParams& p);

/// Residue-series evaluator for the scaled single-excitation amplitudes.
/// Caches the Lambert W branches of -r and +r, which do not depend on Delta.
class SeriesEvaluator {
public:
    SeriesEvaluator(const SystemParams& p, const LambertSeriesContext& ctx);

    /// beta_r(Delta, eta, t) for both atoms.
    Pair beta(double delta, int eta, double t) const;
    Complex beta(int atom, double delta, int eta, double t) const { return beta(delta, eta, t)[atom - 1]; }

    const SystemParams& params() const { return p_; }

    /// Channel amplitude y (channel 0: beta_1 + beta_2 over u_1 + u_2, channel 1:
    /// the difference) as a sum of w exp(rate (t - start)) Theta(t - start).
    struct ExpTerm {
        Complex weight;
        Complex rate;
        double start;
    };
    std::vector<ExpTerm> channel_terms(int channel, double delta) const;
    /// True when the source frequency i Delta - gamma sits on a pole of the channel.
    bool near_pole(int channel, double delta) const;

    /// Allowed change of the delayed part between branch windows K/2 and K.
    static constexpr double kConvergenceTol = 1e-3;

private:
    struct Branch {
        Complex s;       // pole s_k
        Complex weight;  // 1 / (1 + W_k)
    };
    Complex delayed_part(int sign, double delta, double t_after) const;
    Pair beta_regular(double delta, int eta, double t) const;

    SystemParams p_;
    LambertSeriesContext ctx_;
    std::array<std::vector<Branch>, 2> branches_;  // [0]: bright (+) channel, [1]: dark (-) channel
};

/// beta_r(Delta, eta, t) from the residue series (atom is 1 or 2).
Complex amp_b_series(int atom, double delta, int eta, double t, const SystemParams& p,
                     const LambertSeriesContext& ctx);

/// Stationary amplitude for phi = n pi; throws DomainError otherwise.
Complex amp_b_steady(int atom, double delta, int eta, const SystemParams& p);

/// Steady single-excitation probability, sinh form and exponential form.
double prob_one_excited_ss(const SystemParams& p);
double prob_one_excited_ss_exp(const SystemParams& p);
/// Weight of the atom-photon bound state, 2 P1(inf).
double bic_probability(const SystemParams& p);
/// Stationary Tr[rho sigma+(1) sigma-(2)]; magnitude P1(inf)/2.
double dipole_correlation_ss(const SystemParams& p);

/// Markovian reference curves for P1.
double p1_coincident(double gamma, double t);
double p1_independent(double gamma, double t);

/// Response of the delay system to a unit kick: h_rs(t) for beta' = -(gamma/2) beta
/// - (gamma/2) e^{i phi} beta_rbar(t - tau). Sets the 1/Delta^2 tails of |beta|^2.
std::array<std::array<Complex, 2>, 2> kick_response(const SystemParams& p, double t);

}  // namespace dsf

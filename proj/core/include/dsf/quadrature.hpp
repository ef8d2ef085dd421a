#pragma once

#include <vector>

#include "dsf/config.hpp"
#include "dsf/params.hpp"

namespace dsf {

/// Detuning quadrature over [-cutoff, cutoff]; the realized spacing is
/// min(spacing, pi / (4 t_max)) so exp(i Delta t) stays resolved.
struct QuadratureSpec {
    double cutoff = 200.0;
    double spacing = 0.1;
    double tol = 1e-4;
    int max_refinements = 2;
};

QuadratureSpec make_quadrature_spec(double cutoff, double spacing, double tol);

/// Source of beta(Delta, t) for the detuning integrals.
struct BetaEngine {
    Engine kind = Engine::dde;
    double dde_tol = 1e-9;
    int k_max = 2000;
    TailMode tail = TailMode::asymptotic;
    int threads = 1;
};

BetaEngine engine_from_config(const RunConfig& cfg);
QuadratureSpec quadrature_from_config(const RunConfig& cfg);

/// Single-excitation sector integrated over detuning at each requested time.
///   p1[i]        = (gamma/4pi) sum_{r,eta} int |beta_r|^2
///   coherence[i] = (gamma/4pi) sum_eta int beta_1 conj(beta_2)   (real by mirror symmetry)
/// Both include the analytic |Delta| > cutoff tail.
struct SingleExcitationIntegrals {
    std::vector<double> times;
    std::vector<double> p1;
    std::vector<double> coherence;
    std::vector<double> error;  ///< Richardson estimate for p1
    double spacing = 0.0;
    std::size_t points = 0;
};

/// Throws QuadratureError when the Richardson estimate stays above tol after
/// the allowed refinements.
SingleExcitationIntegrals integrate_single_excitation(const SystemParams& p, const BetaEngine& engine,
                                                      const QuadratureSpec& quad,
                                                      const std::vector<double>& times);

/// P1(t) at one time.
double prob_one_excited(double t, const SystemParams& p, const BetaEngine& engine, const QuadratureSpec& quad);

/// Contribution of |Delta| > cutoff to p1 and coherence from the 1/Delta^2 tails.
struct TailCorrection {
    double p1 = 0.0;
    double coherence = 0.0;
};
TailCorrection detuning_tail(const SystemParams& p, double t, double cutoff);

}  // namespace dsf

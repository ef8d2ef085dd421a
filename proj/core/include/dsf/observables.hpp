#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "dsf/params.hpp"
#include "dsf/quadrature.hpp"

namespace dsf {

/// Two-atom reduced density matrix in the basis (|e1 e2>, |e1 g2>, |g1 e2>, |g1 g2>).
/// Only the (2,3)/(3,2) coherence is ever non-zero; every other off-diagonal
/// entry is zero by construction.
struct AtomDensityMatrix {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();

    double rho11() const { return m(0, 0).real(); }
    double rho22() const { return m(1, 1).real(); }
    double rho33() const { return m(2, 2).real(); }
    double rho44() const { return m(3, 3).real(); }
    Complex rho23() const { return m(1, 2); }
    Complex rho32() const { return m(2, 1); }
};

/// Builds the matrix from its populations and coherence; rho44 = 1 - the rest.
/// Throws NumericalError if the result is not a state within 1e-9.
AtomDensityMatrix make_density(double rho11, double rho22, double rho33, Complex rho23);

/// Throws NumericalError on non-Hermitian, wrong trace or negative eigenvalue (tol 1e-9).
void check_state(const AtomDensityMatrix& rho, double tol = 1e-9);

/// rho_A(t) from a(t) and the detuning integrals of the chosen engine.
AtomDensityMatrix reduced_density(double t, const SystemParams& p, const BetaEngine& engine,
                                  const QuadratureSpec& quad);

/// Same from precomputed integrals, one matrix per sample.
std::vector<AtomDensityMatrix> reduced_density(const SystemParams& p, const SingleExcitationIntegrals& in);

/// Wootters concurrence, cross-checked against 2 max(0, |rho23| - sqrt(rho11 rho44)).
/// Throws ConsistencyError if the two disagree by more than 1e-10.
double concurrence(const AtomDensityMatrix& rho);

/// Full Wootters construction alone.
double concurrence_wootters(const Eigen::Matrix4cd& rho);

/// Tr[rho sigma+(1) sigma-(2)] = rho32.
Complex dipole_correlation(double t, const SystemParams& p, const BetaEngine& engine, const QuadratureSpec& quad);
inline Complex dipole_correlation(const AtomDensityMatrix& rho) { return rho.rho32(); }

/// -dP/dt on a uniform grid: central differences, second-order one-sided ends.
/// Needs at least 5 samples.
std::vector<double> instantaneous_rate(const std::vector<double>& times, const std::vector<double>& values);

struct EntanglementTrace {
    std::vector<double> times;
    std::vector<double> concurrence;
    std::optional<double> t_sbe;
    std::optional<double> steady;
};

/// First time with C > eps. With `refine` the bracket is bisected on C(t) to
/// 1e-3; otherwise it is interpolated linearly between samples.
std::optional<double> detect_sbe(const EntanglementTrace& trace, double eps = 1e-4,
                                 const std::function<double(double)>& refine = {});

}  // namespace dsf

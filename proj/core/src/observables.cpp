#include "dsf/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dsf/analytic.hpp"
#include "dsf/errors.hpp"

namespace dsf {

void check_state(const AtomDensityMatrix& rho, double tol) {
    const Eigen::Matrix4cd& m = rho.m;
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) throw NumericalError("density matrix is not Hermitian");
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > tol) {
        std::ostringstream os;
        os << "density matrix trace " << tr << " differs from 1";
        throw NumericalError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -tol) {
        std::ostringstream os;
        os << "density matrix has eigenvalue " << lo << " (quadrature failure?)";
        throw NumericalError(os.str());
    }
}

AtomDensityMatrix make_density(double rho11, double rho22, double rho33, Complex rho23) {
    AtomDensityMatrix r;
    r.m(0, 0) = rho11;
    r.m(1, 1) = rho22;
    r.m(2, 2) = rho33;
    r.m(3, 3) = 1.0 - rho11 - rho22 - rho33;
    r.m(1, 2) = rho23;
    r.m(2, 1) = std::conj(rho23);
    check_state(r);
    return r;
}

std::vector<AtomDensityMatrix> reduced_density(const SystemParams& p, const SingleExcitationIntegrals& in) {
    std::vector<AtomDensityMatrix> out;
    out.reserve(in.times.size());
    for (std::size_t k = 0; k < in.times.size(); ++k)
        out.push_back(make_density(prob_two_excited(p, in.times[k]), 0.5 * in.p1[k], 0.5 * in.p1[k],
                                   in.coherence[k]));
    return out;
}

AtomDensityMatrix reduced_density(double t, const SystemParams& p, const BetaEngine& engine,
                                  const QuadratureSpec& quad) {
    return reduced_density(p, integrate_single_excitation(p, engine, quad, {t})).front();
}

double concurrence_wootters(const Eigen::Matrix4cd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix4cd sq = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();  // sigma_y x sigma_y
    flip(0, 3) = -1.0;
    flip(1, 2) = 1.0;
    flip(2, 1) = 1.0;
    flip(3, 0) = -1.0;
    // singular values of sqrt(rho) (sy x sy) sqrt(rho)^* are the square roots of eig(rho rho~)
    const Eigen::Matrix4cd f = sq * flip * sq.conjugate();
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(f);
    const Eigen::Vector4d s = svd.singularValues();  // descending
    return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

double concurrence(const AtomDensityMatrix& rho) {
    const double full = concurrence_wootters(rho.m);
    const double quick =
        2.0 * std::max(0.0, std::abs(rho.rho23()) - std::sqrt(std::max(0.0, rho.rho11() * rho.rho44())));
    if (std::abs(full - quick) > 1e-10) {
        std::ostringstream os;
        os.precision(17);
        os << "concurrence: Wootters " << full << " vs block formula " << quick;
        throw ConsistencyError(os.str());
    }
    return quick;
}

Complex dipole_correlation(double t, const SystemParams& p, const BetaEngine& engine, const QuadratureSpec& quad) {
    return reduced_density(t, p, engine, quad).rho32();
}

std::vector<double> instantaneous_rate(const std::vector<double>& times, const std::vector<double>& values) {
    const std::size_t n = times.size();
    if (n < 5 || values.size() != n) throw ValidationError("instantaneous_rate: needs >= 5 matching samples");
    const double h = (times.back() - times.front()) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(times[i] - times[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw ValidationError("instantaneous_rate: time grid must be uniform");
    std::vector<double> r(n);
    r[0] = -(-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    r[n - 1] = -(3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) r[i] = -(values[i + 1] - values[i - 1]) / (2.0 * h);
    return r;
}

std::optional<double> detect_sbe(const EntanglementTrace& trace, double eps,
                                 const std::function<double(double)>& refine) {
    if (!(eps > 0.0)) throw ValidationError("detect_sbe: eps must be > 0");
    const auto& t = trace.times;
    const auto& c = trace.concurrence;
    for (std::size_t i = 0; i < t.size() && i < c.size(); ++i) {
        if (!(c[i] > eps)) continue;
        if (i == 0) return t[0];
        double lo = t[i - 1], hi = t[i];
        if (!refine) return lo + (eps - c[i - 1]) / (c[i] - c[i - 1]) * (hi - lo);
        while (hi - lo > 1e-3) {
            const double mid = 0.5 * (lo + hi);
            (refine(mid) > eps ? hi : lo) = mid;
        }
        return hi;
    }
    return std::nullopt;
}

}  // namespace dsf

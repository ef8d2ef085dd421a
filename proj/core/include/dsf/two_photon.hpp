#pragma once

#include "dsf/analytic.hpp"
#include "dsf/params.hpp"

namespace dsf {

/// Scaled two-photon amplitude c(t) / (g_a g_b) in the frame rotating with both
/// photon frequencies:
///   c(a, b, t) = int_0^t sum_r [conj(u_r(b)) e^{i D_b s} beta_r(a, s) + (a <-> b)] ds.
/// Photon-pair probability is (1/2)(gamma/4pi)^2 sum_{eta,eta'} int int |c|^2.
class TwoPhotonEvaluator {
public:
    TwoPhotonEvaluator(const SystemParams& p, const LambertSeriesContext& ctx);
    Complex amplitude(double da, int ea, double db, int eb, double t) const;

private:
    Complex half(double da, int ea, double db, int eb, double t) const;
    Complex channel_half(int channel, double da, double db, double t) const;
    SeriesEvaluator series_;
};

/// Residue-series evaluation of c(a, b, t).
Complex amp_c2_series(double da, int ea, double db, int eb, double t, const SystemParams& p,
                      const LambertSeriesContext& ctx);

/// Long-time form for phi = n pi, split into the stationary two-free-photon part
/// and the two components where one photon stays bound between the atoms:
///   c(t) -> free + e^{i D_b t} bound_b + e^{i D_a t} bound_a.
struct LongTimeAmplitude {
    Complex free;
    Complex bound_a;  ///< coefficient of e^{i D_a t}: photon a bound, photon b free
    Complex bound_b;  ///< coefficient of e^{i D_b t}: photon b bound, photon a free

    Complex at(double da, double db, double t) const;
    /// Time-averaged |c|^2.
    double density() const { return std::norm(free) + std::norm(bound_a) + std::norm(bound_b); }
};

LongTimeAmplitude c2_longtime_parts(double da, int ea, double db, int eb, const SystemParams& p);

/// c(a, b, t) from the long-time form; throws DomainError unless phi = n pi.
Complex amp_c2_longtime(double da, int ea, double db, int eb, double t, const SystemParams& p);

/// Time-averaged joint spectral density |c|^2 and its two-free-photon part.
/// Delay-disabled runs stand for tau -> inf, where the interference between
/// photons from different atoms averages to zero.
struct JointDensity {
    double pair = 0.0;
    double free = 0.0;
};

JointDensity c2_joint_density(double da, int ea, double db, int eb, const SystemParams& p);

/// Long-time two-photon probability budget.
struct PairBudget {
    double free_pair = 0.0;   ///< both photons free
    double bound_free = 0.0;  ///< one photon bound, one free
    double cutoff = 0.0;
    double spacing = 0.0;
    double total() const { return free_pair + bound_free; }
};

/// Integrates the long-time joint spectrum over [-cutoff, cutoff]^2; the 1/cutoff
/// truncation error is removed by extrapolating from the half-width square.
PairBudget pair_budget(const SystemParams& p, double cutoff, double spacing, int threads = 1);

}  // namespace dsf

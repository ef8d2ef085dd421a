#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "dsf/params.hpp"

namespace dsf {

/// Discretized photon modes: detunings on a symmetric uniform grid, both
/// propagation directions. Mode index m < N is (Delta_m, +1), m >= N is
/// (Delta_{m-N}, -1). Every mode couples with g = sqrt(gamma * spacing / (4 pi)).
struct ModeGrid {
    double half_width = 0.0;
    double spacing = 0.0;
    double gamma = 1.0;
    double coupling = 0.0;
    std::vector<double> detuning;

    std::size_t per_direction() const { return detuning.size(); }
    std::size_t size() const { return 2 * detuning.size(); }
    double mode_detuning(std::size_t m) const { return detuning[m % detuning.size()]; }
    int mode_direction(std::size_t m) const { return m < detuning.size() ? 1 : -1; }
    /// Time after which a discrete grid produces spurious revivals.
    double recurrence_time() const { return kTwoPi / spacing; }
};

ModeGrid make_mode_grid(double half_width, double spacing, double gamma = 1.0);

/// Full two-excitation amplitude vector. Moduli squared sum directly to one:
/// c_pair holds m < n (row-major upper triangle), c_same the m = m entries.
struct OracleState {
    double t = 0.0;
    Complex a = 1.0;
    std::array<std::vector<Complex>, 2> b;
    std::vector<Complex> c_pair;
    std::vector<Complex> c_same;

    std::size_t modes() const { return b[0].size(); }
    double norm() const;
};

OracleState initial_state(const ModeGrid& grid);

/// Index of (m, n), m < n, inside OracleState::c_pair.
inline std::size_t pair_index(std::size_t m, std::size_t n, std::size_t modes) {
    return m * modes - m * (m + 1) / 2 + (n - m - 1);
}

struct StateObservables {
    double t = 0.0;
    double p2 = 0.0;          ///< |a|^2
    double p1 = 0.0;          ///< single-excitation population, both atoms
    double p1_atom[2] = {0.0, 0.0};
    Complex coherence;        ///< sum_m b1_m conj(b2_m)
    double pair = 0.0;        ///< two-photon weight
    double same_mode = 0.0;   ///< weight of doubly occupied modes
    double norm = 0.0;
};

StateObservables observables_from_state(const OracleState& s, const ModeGrid& grid);

struct FullOracleOptions {
    double dt = 1e-3;
    std::array<double, 2> atom_weight{1.0, 1.0};  ///< relative coupling of each atom
    double norm_tolerance = 1e-6;
    int threads = 1;
    /// Called with the expanded state at every output sample when set.
    std::function<void(const OracleState&)> on_sample;
};

struct FullOracleRun {
    ModeGrid grid;
    double tau_used = 0.0;   ///< propagation delay realized on the grid
    double dt_used = 0.0;
    long steps = 0;
    std::vector<StateObservables> samples;
};

/// Fixed-step RK4 integration of the complete amplitude equations (no
/// Wigner-Weisskopf elimination) from |e e, vac> over params.n_samples
/// samples on [0, t_max]. Throws IntegratorError at the first step whose norm
/// drifts more than norm_tolerance, ValidationError on grid violations.
FullOracleRun simulate_full(const SystemParams& params, const ModeGrid& grid,
                            const FullOracleOptions& options = {});

/// Delay realized by the full oracle for delay-disabled runs: half the grid
/// recurrence time, which keeps every echo outside the horizon.
double disabled_delay(const ModeGrid& grid);

/// Binary snapshot, little-endian: uint64 M, double t, then complex doubles
/// (re, im) for a, b1[M], b2[M], c_pair[M(M-1)/2], c_same[M].
void write_snapshot(const std::string& path, const OracleState& s);
OracleState read_snapshot(const std::string& path);

}  // namespace dsf

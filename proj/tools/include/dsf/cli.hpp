#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dsf/config.hpp"
#include "dsf/csv.hpp"

namespace dsf::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3, kValidationFailed = 4 };

/// Free-form `# key: value` lines appended to a run manifest.
using Diagnostics = std::vector<std::pair<std::string, std::string>>;

/// One row per sample: t, P2, P1, both Markovian references, concurrence,
/// dipole correlation and -dP1/dt.
CsvTable dynamics_table(const RunConfig& cfg, Diagnostics* diag = nullptr);

/// One row per (tau, phi) of tau_list x phi_list.
CsvTable sweep_table(const RunConfig& cfg, Diagnostics* diag = nullptr);

/// Long-time joint two-photon density on a (Delta_a, Delta_b) grid for every
/// direction pair. Requires phi = n pi.
CsvTable spectrum_table(const RunConfig& cfg, Diagnostics* diag = nullptr);

struct Check {
    std::string name;
    double expected = 0.0;
    double got = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string note;
};

struct ValidationReport {
    std::vector<Check> checks;
    bool passed() const;
    std::string table() const;
};

struct ValidateOptions {
    bool coarse_grid = false;
    bool skip_oracle = false;
};

ValidationReport validate(const RunConfig& cfg, const ValidateOptions& opt = {});

/// Grid used by the --coarse-grid negative control.
void apply_coarse_grid(RunConfig& cfg);

/// Config text followed by `# key: value` diagnostics.
std::string manifest_text(const std::string& subcommand, const RunConfig& cfg, const Diagnostics& diag);

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dsf::cli

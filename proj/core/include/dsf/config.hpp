#pragma once

#include <string>
#include <vector>

#include "dsf/params.hpp"

namespace dsf {

enum class Engine { series, dde };

/// Everything a run needs: physics plus engine, grid and output settings.
/// Serialized as one `key = value` per line; unknown keys are rejected.
struct RunConfig {
    SystemParams params;

    Engine engine = Engine::dde;
    int k_max = 2000;
    TailMode tail = TailMode::asymptotic;

    double quad_cutoff = 200.0;
    double quad_spacing = 0.1;
    double quad_tol = 1e-4;
    double dde_tol = 1e-9;

    double grid_cutoff = 40.0;
    double grid_spacing = 0.1;
    double oracle_dt = 1e-3;

    double sbe_threshold = 1e-4;

    std::vector<double> tau_list;
    std::vector<double> phi_list;

    double spectrum_cutoff = 10.0;
    int spectrum_points = 101;

    int threads = 1;
};

/// Parses config text. Throws ValidationError naming the line on any problem.
RunConfig parse_config(const std::string& text);

/// Reads and parses a config file.
RunConfig read_config_file(const std::string& path);

/// Applies one `key=value` override on top of cfg.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Re-checks every field after overrides; throws ValidationError.
void validate_config(RunConfig& cfg);

/// Every key accepted by apply_setting, in file order.
const std::vector<std::string>& config_keys();

/// Serializes cfg; parse_config(write_config(cfg)) reproduces every field exactly.
std::string write_config(const RunConfig& cfg);

/// Parses a real number; accepts forms like `pi`, `0.5pi`, `3*pi/2`.
double parse_real(const std::string& text);

/// Names used in config files and CSV metadata.
const char* engine_name(Engine e);
const char* tail_name(TailMode t);

}  // namespace dsf

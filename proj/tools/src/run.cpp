#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "dsf/cli.hpp"
#include "dsf/errors.hpp"

namespace dsf::cli {
namespace {

struct Common {
    std::string config_file;
    std::vector<std::string> sets;
    std::map<std::string, std::string> flags;
    std::string out;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_file, "config file (key = value per line)");
    sub->add_option("--set", c.sets, "override, key=value (repeatable)");
    sub->add_option("--out", c.out, "output path (stdout when omitted)");
    for (const auto& key : config_keys()) {
        std::string dashed = key;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        std::string names = "--" + key;
        if (dashed != key) names += ",--" + dashed;
        sub->add_option_function<std::string>(
            names, [&c, key](const std::string& v) { c.flags[key] = v; }, "override config key " + key);
    }
}

RunConfig resolve(const Common& c) {
    RunConfig cfg = c.config_file.empty() ? RunConfig{} : read_config_file(c.config_file);
    for (const auto& key : config_keys()) {
        auto it = c.flags.find(key);
        if (it != c.flags.end()) apply_setting(cfg, key, it->second);
    }
    for (const auto& s : c.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + s + "'");
        apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    validate_config(cfg);
    return cfg;
}

void emit_table(const CsvTable& table, const std::string& out, std::ostream& os) {
    if (out.empty())
        write_csv(os, table);
    else
        write_csv(out, table);
}

void emit_manifest(const std::string& out, const std::string& text) {
    if (out.empty()) return;
    std::ofstream f(out + ".manifest", std::ios::binary);
    if (!f) throw ValidationError("cannot write manifest '" + out + ".manifest'");
    f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Delayed collective decay of two atoms coupled through a waveguide", "dsf"};
    app.require_subcommand(1);
    Common common;
    bool coarse = false;
    bool skip_oracle = false;

    auto* dyn = app.add_subcommand("dynamics", "time series of populations, concurrence and correlations");
    auto* sweep = app.add_subcommand("sweep", "steady-state and peak-rate table over tau_list x phi_list");
    auto* val = app.add_subcommand("validate", "cross-engine consistency report");
    auto* spec = app.add_subcommand("spectrum", "long-time joint two-photon spectrum (phi = n pi)");
    for (auto* sub : {dyn, sweep, val, spec}) add_common(sub, common);
    val->add_flag("--coarse-grid", coarse, "negative control: run the oracle on a 2/gamma-wide, 0.5-spaced grid");
    val->add_flag("--skip-oracle", skip_oracle, "omit the full-oracle checks");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "dsf: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        const RunConfig cfg = resolve(common);
        Diagnostics diag;
        const auto start = std::chrono::steady_clock::now();
        auto elapsed = [&] {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        };
        if (val->parsed()) {
            ValidateOptions opt{coarse, skip_oracle};
            const ValidationReport rep = validate(cfg, opt);
            const std::string text = rep.table();
            out << text;
            if (!common.out.empty()) {
                std::ofstream f(common.out, std::ios::binary);
                if (!f) throw ValidationError("cannot write report '" + common.out + "'");
                f << text;
            }
            diag.emplace_back("coarse_grid", coarse ? "true" : "false");
            diag.emplace_back("wall_seconds", std::to_string(elapsed()));
            emit_manifest(common.out, manifest_text("validate", cfg, diag));
            return rep.passed() ? kOk : kValidationFailed;
        }
        std::string name;
        CsvTable table;
        if (dyn->parsed()) {
            name = "dynamics";
            table = dynamics_table(cfg, &diag);
        } else if (sweep->parsed()) {
            name = "sweep";
            table = sweep_table(cfg, &diag);
        } else {
            name = "spectrum";
            table = spectrum_table(cfg, &diag);
        }
        emit_table(table, common.out, out);
        diag.emplace_back("rows", std::to_string(table.rows.size()));
        diag.emplace_back("wall_seconds", std::to_string(elapsed()));
        emit_manifest(common.out, manifest_text(name, cfg, diag));
        return kOk;
    } catch (const ValidationError& e) {
        err << "dsf: configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        err << "dsf: configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        err << "dsf: numerical failure: " << e.what() << "\n";
        return kNumericalError;
    }
}

}  // namespace dsf::cli

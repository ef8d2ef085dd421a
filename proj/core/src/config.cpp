#include "dsf/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dsf/errors.hpp"

namespace dsf {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || s.empty()) throw ValidationError("not a number: '" + s + "'");
    return v;
}

int parse_int(const std::string& s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ValidationError("not an integer: '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ValidationError("not a boolean: '" + s + "'");
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    if (s.empty()) return out;
    // start:stop:step range
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(trim(item));
        if (parts.size() != 3) throw ValidationError("range must be start:stop:step: '" + s + "'");
        const double a = parse_real(parts[0]), b = parse_real(parts[1]), h = parse_real(parts[2]);
        if (!(h > 0.0) || b < a) throw ValidationError("bad range: '" + s + "'");
        const long n = std::lround(std::floor((b - a) / h + 1e-9));
        for (long i = 0; i <= n; ++i) out.push_back(a + h * static_cast<double>(i));
        return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(trim(item)));
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += fmt(v[i]);
    }
    return s;
}

}  // namespace

double parse_real(const std::string& raw) {
    const std::string s = trim(raw);
    const auto pos = s.find("pi");
    if (pos == std::string::npos) return parse_plain(s);
    std::string head = trim(s.substr(0, pos));
    std::string tail = trim(s.substr(pos + 2));
    double factor = 1.0;
    if (!head.empty()) {
        if (head.back() == '*') head = trim(head.substr(0, head.size() - 1));
        factor = head == "-" ? -1.0 : parse_plain(head);
    }
    double divisor = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/') throw ValidationError("not a number: '" + s + "'");
        divisor = parse_plain(trim(tail.substr(1)));
        if (divisor == 0.0) throw ValidationError("division by zero: '" + s + "'");
    }
    return factor * kPi / divisor;
}

const char* engine_name(Engine e) { return e == Engine::series ? "series" : "dde-permode"; }

const char* tail_name(TailMode t) { return t == TailMode::none ? "none" : "asymptotic"; }

void apply_setting(RunConfig& c, const std::string& key_raw, const std::string& value_raw) {
    const std::string key = trim(key_raw);
    const std::string v = trim(value_raw);
    auto& p = c.params;
    try {
        if (key == "gamma") p.gamma = parse_real(v);
        else if (key == "tau") p.tau = parse_real(v);
        else if (key == "phi") p.phi = parse_real(v);
        else if (key == "t_max") p.t_max = parse_real(v);
        else if (key == "n_samples") p.n_samples = parse_int(v);
        else if (key == "delay_disabled") p.delay_disabled = parse_bool(v);
        else if (key == "engine") {
            if (v == "series") c.engine = Engine::series;
            else if (v == "dde-permode" || v == "dde") c.engine = Engine::dde;
            else throw ValidationError("engine must be series or dde-permode");
        } else if (key == "k_max") c.k_max = parse_int(v);
        else if (key == "tail") {
            if (v == "none") c.tail = TailMode::none;
            else if (v == "asymptotic" || v == "asymptotic-correction") c.tail = TailMode::asymptotic;
            else throw ValidationError("tail must be none or asymptotic");
        } else if (key == "quad_cutoff") c.quad_cutoff = parse_real(v);
        else if (key == "quad_spacing") c.quad_spacing = parse_real(v);
        else if (key == "quad_tol") c.quad_tol = parse_real(v);
        else if (key == "dde_tol") c.dde_tol = parse_real(v);
        else if (key == "grid_cutoff") c.grid_cutoff = parse_real(v);
        else if (key == "grid_spacing") c.grid_spacing = parse_real(v);
        else if (key == "oracle_dt") c.oracle_dt = parse_real(v);
        else if (key == "sbe_threshold") c.sbe_threshold = parse_real(v);
        else if (key == "tau_list") c.tau_list = parse_list(v);
        else if (key == "phi_list") c.phi_list = parse_list(v);
        else if (key == "spectrum_cutoff") c.spectrum_cutoff = parse_real(v);
        else if (key == "spectrum_points") c.spectrum_points = parse_int(v);
        else if (key == "threads") c.threads = parse_int(v);
        else throw ValidationError("unknown config key '" + key + "'");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        if (msg.rfind("unknown config key", 0) == 0) throw;
        throw ValidationError(key + ": " + msg);
    }
}

namespace {

void validate(RunConfig& c) {
    const auto& p = c.params;
    c.params = make_params(p.gamma, p.tau, p.phi, p.t_max, p.n_samples, p.delay_disabled);
    auto positive = [](double x, const char* name) {
        if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError(std::string(name) + " must be > 0");
    };
    positive(c.quad_cutoff, "quad_cutoff");
    positive(c.quad_spacing, "quad_spacing");
    positive(c.quad_tol, "quad_tol");
    positive(c.dde_tol, "dde_tol");
    positive(c.grid_cutoff, "grid_cutoff");
    positive(c.grid_spacing, "grid_spacing");
    positive(c.oracle_dt, "oracle_dt");
    positive(c.sbe_threshold, "sbe_threshold");
    positive(c.spectrum_cutoff, "spectrum_cutoff");
    if (c.k_max < 1) throw ValidationError("k_max must be >= 1");
    if (c.spectrum_points < 3) throw ValidationError("spectrum_points must be >= 3");
    if (c.threads < 1) throw ValidationError("threads must be >= 1");
    for (double t : c.tau_list)
        if (!(t >= 0.0)) throw ValidationError("tau_list entries must be >= 0");
}

}  // namespace

void validate_config(RunConfig& c) { validate(c); }

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "gamma",        "tau",          "phi",          "t_max",           "n_samples",
        "delay_disabled", "engine",     "k_max",        "tail",            "quad_cutoff",
        "quad_spacing", "quad_tol",     "dde_tol",      "grid_cutoff",     "grid_spacing",
        "oracle_dt",    "sbe_threshold", "tau_list",    "phi_list",        "spectrum_cutoff",
        "spectrum_points", "threads"};
    return keys;
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        try {
            apply_setting(c, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ValidationError& e) {
            throw ValidationError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    validate(c);
    return c;
}

RunConfig read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string write_config(const RunConfig& c) {
    std::ostringstream os;
    const auto& p = c.params;
    os << "gamma = " << fmt(p.gamma) << "\n"
       << "tau = " << fmt(p.tau) << "\n"
       << "phi = " << fmt(p.phi) << "\n"
       << "t_max = " << fmt(p.t_max) << "\n"
       << "n_samples = " << p.n_samples << "\n"
       << "delay_disabled = " << (p.delay_disabled ? "true" : "false") << "\n"
       << "engine = " << engine_name(c.engine) << "\n"
       << "k_max = " << c.k_max << "\n"
       << "tail = " << tail_name(c.tail) << "\n"
       << "quad_cutoff = " << fmt(c.quad_cutoff) << "\n"
       << "quad_spacing = " << fmt(c.quad_spacing) << "\n"
       << "quad_tol = " << fmt(c.quad_tol) << "\n"
       << "dde_tol = " << fmt(c.dde_tol) << "\n"
       << "grid_cutoff = " << fmt(c.grid_cutoff) << "\n"
       << "grid_spacing = " << fmt(c.grid_spacing) << "\n"
       << "oracle_dt = " << fmt(c.oracle_dt) << "\n"
       << "sbe_threshold = " << fmt(c.sbe_threshold) << "\n";
    if (!c.tau_list.empty()) os << "tau_list = " << fmt_list(c.tau_list) << "\n";
    if (!c.phi_list.empty()) os << "phi_list = " << fmt_list(c.phi_list) << "\n";
    os << "spectrum_cutoff = " << fmt(c.spectrum_cutoff) << "\n"
       << "spectrum_points = " << c.spectrum_points << "\n"
       << "threads = " << c.threads << "\n";
    return os.str();
}

}  // namespace dsf

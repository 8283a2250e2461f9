#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "qhj/csv.hpp"
#include "qhj/errors.hpp"

namespace qhj {

/// Everything the CLI needs for one run, mirroring the config file
/// sections. Flag overrides are applied on top by the CLI layer.
struct RunConfig {
    // [well]
    double hbar = 1.0;
    double m = 1.0;
    double q = 1.0;
    // [microstate]
    double a = 1.0;
    double b = 1.0;
    double c = 0.0;
    // [impulse]
    double F = 1.0;
    double eps = 0.1;
    double gamma = 0.0;
    double T = 1.0;
    // [ensemble]
    std::uint64_t n = 100000;
    std::uint64_t seed = 0;
    bool random_set = false;
    int set_count = 20;
    double a_min = 0.2;
    double a_max = 5.0;
    double rho = 0.95;
    int threads = 1;
    // [trajectory]
    double tau0 = 0.0;
    int n_points = 201;
    int n_cycles = 1;
    // [output]
    std::string out_path;
    std::string format = "csv";
};

namespace config_detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw validation_error("config: key '" + key + "' has non-numeric value '" + v + "'");
    }
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw validation_error("config: key '" + key + "' has non-integer value '" + v + "'");
    return x;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw validation_error("config: key '" + key + "' has non-boolean value '" + v + "'");
}

} // namespace config_detail

/// Parses the flat sectioned key = value format. Unknown sections or keys
/// are validation errors, so typos fail loudly instead of being ignored.
inline RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = config_detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw validation_error("config line " + std::to_string(lineno) + ": unterminated section");
            section = config_detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw validation_error("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = config_detail::trim(line.substr(0, eq));
        const std::string val = config_detail::trim(line.substr(eq + 1));
        const std::string id = section + "." + key;
        using config_detail::parse_bool;
        using config_detail::parse_real;
        using config_detail::parse_uint;
        if (id == "well.hbar") cfg.hbar = parse_real(id, val);
        else if (id == "well.m") cfg.m = parse_real(id, val);
        else if (id == "well.q") cfg.q = parse_real(id, val);
        else if (id == "microstate.a") cfg.a = parse_real(id, val);
        else if (id == "microstate.b") cfg.b = parse_real(id, val);
        else if (id == "microstate.c") cfg.c = parse_real(id, val);
        else if (id == "impulse.F") cfg.F = parse_real(id, val);
        else if (id == "impulse.eps") cfg.eps = parse_real(id, val);
        else if (id == "impulse.gamma") cfg.gamma = parse_real(id, val);
        else if (id == "impulse.T") cfg.T = parse_real(id, val);
        else if (id == "ensemble.n") cfg.n = parse_uint(id, val);
        else if (id == "ensemble.seed") cfg.seed = parse_uint(id, val);
        else if (id == "ensemble.random_set") cfg.random_set = parse_bool(id, val);
        else if (id == "ensemble.set_count") cfg.set_count = static_cast<int>(parse_uint(id, val));
        else if (id == "ensemble.a_min") cfg.a_min = parse_real(id, val);
        else if (id == "ensemble.a_max") cfg.a_max = parse_real(id, val);
        else if (id == "ensemble.rho") cfg.rho = parse_real(id, val);
        else if (id == "ensemble.threads") cfg.threads = static_cast<int>(parse_uint(id, val));
        else if (id == "trajectory.tau0") cfg.tau0 = parse_real(id, val);
        else if (id == "trajectory.n_points") cfg.n_points = static_cast<int>(parse_uint(id, val));
        else if (id == "trajectory.n_cycles") cfg.n_cycles = static_cast<int>(parse_uint(id, val));
        else if (id == "output.path") cfg.out_path = val;
        else if (id == "output.format") cfg.format = val;
        else throw validation_error("config line " + std::to_string(lineno) + ": unknown key '" + id + "'");
    }
    return cfg;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

inline std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[well]\n"
       << "hbar = " << format_double(cfg.hbar) << "\n"
       << "m = " << format_double(cfg.m) << "\n"
       << "q = " << format_double(cfg.q) << "\n\n"
       << "[microstate]\n"
       << "a = " << format_double(cfg.a) << "\n"
       << "b = " << format_double(cfg.b) << "\n"
       << "c = " << format_double(cfg.c) << "\n\n"
       << "[impulse]\n"
       << "F = " << format_double(cfg.F) << "\n"
       << "eps = " << format_double(cfg.eps) << "\n"
       << "gamma = " << format_double(cfg.gamma) << "\n"
       << "T = " << format_double(cfg.T) << "\n\n"
       << "[ensemble]\n"
       << "n = " << cfg.n << "\n"
       << "seed = " << cfg.seed << "\n"
       << "random_set = " << (cfg.random_set ? "true" : "false") << "\n"
       << "set_count = " << cfg.set_count << "\n"
       << "a_min = " << format_double(cfg.a_min) << "\n"
       << "a_max = " << format_double(cfg.a_max) << "\n"
       << "rho = " << format_double(cfg.rho) << "\n"
       << "threads = " << cfg.threads << "\n\n"
       << "[trajectory]\n"
       << "tau0 = " << format_double(cfg.tau0) << "\n"
       << "n_points = " << cfg.n_points << "\n"
       << "n_cycles = " << cfg.n_cycles << "\n\n"
       << "[output]\n"
       << "path = " << cfg.out_path << "\n"
       << "format = " << cfg.format << "\n";
    return os.str();
}

} // namespace qhj

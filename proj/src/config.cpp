#include "socbec/config.hpp"

#include "socbec/sweep.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace socbec {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_number(const std::string& v, int line) {
    std::size_t pos = 0;
    double out;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ParseError(line, "not a number: '" + v + "'");
    }
    if (pos != v.size()) throw ParseError(line, "trailing characters in number: '" + v + "'");
    return out;
}

std::size_t parse_count(const std::string& v, int line) {
    const double d = parse_number(v, line);
    if (d < 1 || d != std::floor(d)) throw ParseError(line, "expected a positive integer: '" + v + "'");
    return static_cast<std::size_t>(d);
}

bool parse_bool(const std::string& v, int line) {
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw ParseError(line, "expected a boolean: '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ParseError(line, "empty list element");
        out.push_back(parse_number(item, line));
    }
    if (out.empty()) throw ParseError(line, "empty list");
    return out;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

JobConfig parse_config(const std::string& text) {
    JobConfig cfg;
    using Setter = std::function<void(const std::string&, int)>;
    const std::map<std::string, Setter> setters = {
        {"kappa", [&](const std::string& v, int l) { cfg.params.kappa = parse_number(v, l); }},
        {"gamma", [&](const std::string& v, int l) { cfg.params.gamma = parse_number(v, l); }},
        {"Delta_a", [&](const std::string& v, int l) { cfg.params.Delta_a = parse_number(v, l); }},
        {"N", [&](const std::string& v, int l) { cfg.params.N = parse_number(v, l); }},
        {"g_a", [&](const std::string& v, int l) { cfg.params.g_a = parse_number(v, l); }},
        {"U", [&](const std::string& v, int l) { cfg.params.U = parse_number(v, l); }},
        {"epsilon", [&](const std::string& v, int l) { cfg.params.epsilon = parse_number(v, l); }},
        {"Omega_z", [&](const std::string& v, int l) { cfg.params.Omega_z = parse_number(v, l); }},
        {"delta", [&](const std::string& v, int l) { cfg.params.delta = parse_number(v, l); }},
        {"alpha_tilde", [&](const std::string& v, int l) { cfg.params.alpha_tilde = parse_number(v, l); }},
        {"P", [&](const std::string& v, int l) { cfg.params.P = parse_number(v, l); }},
        {"omega_p", [&](const std::string& v, int l) { cfg.params.omega_p = parse_number(v, l); }},
        {"T", [&](const std::string& v, int l) { cfg.params.T = parse_number(v, l); }},
        {"eta_det", [&](const std::string& v, int l) { cfg.params.eta_det = parse_number(v, l); }},
        {"kappa_ext", [&](const std::string& v, int l) { cfg.params.kappa_ext = parse_number(v, l); }},
        {"k_min", [&](const std::string& v, int l) { cfg.k_min = parse_number(v, l); }},
        {"k_max", [&](const std::string& v, int l) { cfg.k_max = parse_number(v, l); }},
        {"k_count", [&](const std::string& v, int l) { cfg.k_count = parse_count(v, l); }},
        {"omega_min", [&](const std::string& v, int l) { cfg.omega_min = parse_number(v, l); }},
        {"omega_max", [&](const std::string& v, int l) { cfg.omega_max = parse_number(v, l); }},
        {"omega_count", [&](const std::string& v, int l) { cfg.omega_count = parse_count(v, l); }},
        {"P_min", [&](const std::string& v, int l) { cfg.P_min = parse_number(v, l); }},
        {"P_max", [&](const std::string& v, int l) { cfg.P_max = parse_number(v, l); }},
        {"P_count", [&](const std::string& v, int l) { cfg.P_count = parse_count(v, l); }},
        {"P_log", [&](const std::string& v, int l) { cfg.P_log = parse_bool(v, l); }},
        {"k_points", [&](const std::string& v, int l) { cfg.k_points = parse_list(v, l); }},
        {"gap_center", [&](const std::string& v, int l) {
             if (v == "auto") cfg.gap_center.reset();
             else cfg.gap_center = parse_number(v, l);
         }},
        {"gap_factor", [&](const std::string& v, int l) { cfg.gap_factor = parse_number(v, l); }},
        {"continuity_factor", [&](const std::string& v, int l) { cfg.continuity_factor = parse_number(v, l); }},
        {"ep_tolerance", [&](const std::string& v, int l) { cfg.ep_tolerance = parse_number(v, l); }},
        {"stability_tol", [&](const std::string& v, int l) { cfg.stability_tol = parse_number(v, l); }},
        {"x_floor_rel", [&](const std::string& v, int l) { cfg.x_floor_rel = parse_number(v, l); }},
    };

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw ParseError(line, "empty key");
        if (value.empty()) throw ParseError(line, "empty value for '" + key + "'");
        const auto it = setters.find(key);
        if (it == setters.end()) throw ParseError(line, "unknown key '" + key + "'");
        it->second(value, line);
    }

    const auto bad = validate(cfg.params);
    if (!bad.empty()) {
        std::ostringstream os;
        os << "invalid parameter " << bad.front().field << ": " << bad.front().reason;
        throw ParseError(0, os.str());
    }
    return cfg;
}

JobConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

std::string serialize_config(const JobConfig& cfg) {
    std::ostringstream os;
    const PhysicalParams& p = cfg.params;
    os << "kappa = " << fmt17(p.kappa) << "\n"
       << "gamma = " << fmt17(p.gamma) << "\n"
       << "Delta_a = " << fmt17(p.Delta_a) << "\n"
       << "N = " << fmt17(p.N) << "\n"
       << "g_a = " << fmt17(p.g_a) << "\n"
       << "U = " << fmt17(p.U) << "\n"
       << "epsilon = " << fmt17(p.epsilon) << "\n"
       << "Omega_z = " << fmt17(p.Omega_z) << "\n"
       << "delta = " << fmt17(p.delta) << "\n"
       << "alpha_tilde = " << fmt17(p.alpha_tilde) << "\n"
       << "P = " << fmt17(p.P) << "\n"
       << "omega_p = " << fmt17(p.omega_p) << "\n"
       << "T = " << fmt17(p.T) << "\n"
       << "eta_det = " << fmt17(p.eta_det) << "\n"
       << "kappa_ext = " << fmt17(p.kappa_ext) << "\n"
       << "k_min = " << fmt17(cfg.k_min) << "\n"
       << "k_max = " << fmt17(cfg.k_max) << "\n"
       << "k_count = " << cfg.k_count << "\n"
       << "omega_min = " << fmt17(cfg.omega_min) << "\n"
       << "omega_max = " << fmt17(cfg.omega_max) << "\n"
       << "omega_count = " << cfg.omega_count << "\n"
       << "P_min = " << fmt17(cfg.P_min) << "\n"
       << "P_max = " << fmt17(cfg.P_max) << "\n"
       << "P_count = " << cfg.P_count << "\n"
       << "P_log = " << (cfg.P_log ? 1 : 0) << "\n";
    if (!cfg.k_points.empty()) {
        os << "k_points = ";
        for (std::size_t i = 0; i < cfg.k_points.size(); ++i)
            os << (i ? "," : "") << fmt17(cfg.k_points[i]);
        os << "\n";
    }
    os << "gap_center = " << (cfg.gap_center ? fmt17(*cfg.gap_center) : std::string("auto")) << "\n"
       << "gap_factor = " << fmt17(cfg.gap_factor) << "\n"
       << "continuity_factor = " << fmt17(cfg.continuity_factor) << "\n"
       << "ep_tolerance = " << fmt17(cfg.ep_tolerance) << "\n"
       << "stability_tol = " << fmt17(cfg.stability_tol) << "\n"
       << "x_floor_rel = " << fmt17(cfg.x_floor_rel) << "\n";
    return os.str();
}

std::vector<double> k_grid_of(const JobConfig& cfg) {
    return make_grid(cfg.k_min, cfg.k_max, cfg.k_count);
}

std::vector<double> omega_grid_of(const JobConfig& cfg) {
    return make_grid(cfg.omega_min, cfg.omega_max, cfg.omega_count);
}

std::vector<double> power_grid_of(const JobConfig& cfg) {
    return cfg.P_log ? make_log_grid(cfg.P_min, cfg.P_max, cfg.P_count)
                     : make_grid(cfg.P_min, cfg.P_max, cfg.P_count);
}

} // namespace socbec

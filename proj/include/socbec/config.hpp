#pragma once

#include "socbec/params.hpp"
#include "socbec/errors.hpp"

#include <optional>
#include <string>
#include <vector>

namespace socbec {

struct ParseError : Error {
    int line;
    ParseError(int line_, const std::string& what_)
        : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

// Job-level settings that ride along with the physical parameters in the
// same flat `key = value` file.
struct JobConfig {
    PhysicalParams params;

    double k_min = -1.0, k_max = 1.0;
    std::size_t k_count = 64;
    double omega_min = -4.0, omega_max = 4.0;
    std::size_t omega_count = 256;

    double P_min = 1.0, P_max = 10.0;
    std::size_t P_count = 16;
    bool P_log = true;
    std::vector<double> k_points;  // power-sweep momenta; required there

    std::optional<double> gap_center;  // absent means "estimate from the map"
    double gap_factor = 0.8;
    double continuity_factor = 3.0;
    double ep_tolerance = 1e-6;
    double stability_tol = 1e-9;
    double x_floor_rel = 1e-12;
};

// Parses the flat config text. Unknown keys are rejected; errors carry the
// 1-based line number. Absent keys keep their defaults.
JobConfig parse_config(const std::string& text);

JobConfig load_config_file(const std::string& path);

// Canonical form: fixed key order, 17 significant digits. parse(serialize(x))
// round-trips exactly.
std::string serialize_config(const JobConfig& cfg);

std::vector<double> k_grid_of(const JobConfig& cfg);
std::vector<double> omega_grid_of(const JobConfig& cfg);
std::vector<double> power_grid_of(const JobConfig& cfg);

} // namespace socbec

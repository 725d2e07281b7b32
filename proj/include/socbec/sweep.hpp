#pragma once

#include "socbec/params.hpp"
#include "socbec/errors.hpp"

#include <array>
#include <complex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace socbec {

enum class AxisName { k, omega, P, delta, Omega_z, epsilon, alpha_tilde, gamma, kappa };

const char* axis_label(AxisName a);
std::optional<AxisName> axis_from_string(const std::string& s);

struct Axis {
    AxisName name = AxisName::k;
    double min = 0.0, max = 0.0;
    std::size_t count = 1;
    bool log_spaced = false;  // power onsets resolve better log-spaced
};

enum class SweepOutput { psd, chern, berry, eigen, stability };

struct SweepSpec {
    PhysicalParams base;
    Axis axis1, axis2;
    std::set<SweepOutput> outputs;
};

// Uniform inclusive grid; count = 1 gives {min}. Throws BadGrid.
std::vector<double> make_grid(double min, double max, std::size_t count);

// Log-spaced inclusive grid, min > 0 required.
std::vector<double> make_log_grid(double min, double max, std::size_t count);

std::vector<double> axis_grid(const Axis& a);

struct SweepRecord {
    double v1 = 0.0, v2 = 0.0;
    // outputs, NaN when not requested or flagged
    double S_up = 0.0, S_dn = 0.0, S_out = 0.0;
    double C = 0.0, Omega_B = 0.0;
    std::array<std::complex<double>, 6> eigenvalues{};
    bool has_eigen = false;
    double max_real_part = 0.0;
    int rh_stable = -1;     // -1 not computed, 0/1 verdicts
    int eigen_stable = -1;
    PointFlag flag = PointFlag::ok;
    std::string failure;    // non-empty when the point evaluation threw
};

struct ResultSet {
    SweepSpec spec;
    std::vector<double> grid1, grid2;
    std::vector<SweepRecord> records;  // row-major, axis1 outer
    // provenance; never serialized into value records
    std::string code_version;
    std::string timestamp;
    int thread_count = 1;
};

// Evaluates every grid point exactly once; per-point failures are recorded,
// never aborting the sweep. Identical output for any worker count.
ResultSet run_sweep(const SweepSpec& spec, int workers = 1);

} // namespace socbec

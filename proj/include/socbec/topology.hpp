#pragma once

#include "socbec/spectra.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

namespace socbec {

// Mean thermal energy of an oscillator mode, hbar = 1:
// (omega/2) coth(omega / (2 theta)); theta = 0 gives |omega|/2.
// Throws ZeroFrequency at omega = 0, theta = 0.
double thermal_energy(double omega, double theta);

// Xi(omega) = 2 eta_det kappa_ext / |R(omega)|^2; NaN when R is singular.
double calibration_factor(double omega, const PhysicalParams& p, double Delta);

struct ChernMarkerMap {
    std::vector<double> k_grid;
    std::vector<double> omega_grid;
    std::vector<double> C_values;        // row-major, NaN where flagged
    std::vector<PointFlag> flags;
    double eta_det = 1.0, kappa_ext = 0.0, T = 0.0;  // calibration echo

    double at(std::size_t ik, std::size_t iw) const {
        return C_values[ik * omega_grid.size() + iw];
    }
};

// C(k, omega) = 2 pi S_out / (Xi(omega) E_T(omega)) pointwise.
ChernMarkerMap chern_marker_from_psd(const SpectralMap& map, const PhysicalParams& p);

struct BerryMap {
    enum class Source { from_marker, plaquette };
    std::vector<double> k_grid;          // axis 1 (plaquette: grid_u)
    std::vector<double> omega_grid;      // axis 2 (plaquette: grid_v)
    std::vector<double> values;          // row-major
    Source source = Source::from_marker;
    double total_flux = 0.0;             // plaquette source only
};

// Pointwise 2 pi scaling of the marker.
BerryMap berry_from_marker(const ChernMarkerMap& cm);

enum class Band { lower, upper };

using TwoBandHamiltonian = std::function<Eigen::Matrix2cd(double, double)>;

// Link-variable curvature per plaquette, counter-clockwise orientation.
// On periodic grids the total flux is 2 pi times an integer.
BerryMap plaquette_berry(const TwoBandHamiltonian& h,
                         const std::vector<double>& grid_u,
                         const std::vector<double>& grid_v,
                         Band band, bool periodic = true,
                         double gap_floor = 1e-9);

struct RidgePoint {
    double k = 0.0;
    double omega_peak = 0.0;
    double intensity = 0.0;
    double local_slope = 0.0;  // d omega_peak / d k, centered differences
};

struct RidgeTrace {
    std::vector<RidgePoint> points;
    double gap_lo = 0.0, gap_hi = 0.0;
    bool spans_gap = false;
    // the connected stretch that realizes the best coverage
    std::size_t segment_begin = 0, segment_end = 0;
};

// Per-k maximum of S_out inside [gap_lo, gap_hi]. spans_gap is true when a
// contiguous run of columns, each step within continuity_factor grid steps
// of the previous, covers at least 90% of the window height.
RidgeTrace find_edge_ridge(const SpectralMap& map, double gap_lo, double gap_hi,
                           double continuity_factor = 3.0);

// Mid-gap minimum of the separation between the dominant positive-frequency
// ridge and its negative-frequency partner, over interior k columns.
double ridge_gap_measure(const SpectralMap& map, double omega_floor = 1e-6);

// Midpoint of the positive-frequency ridge band of a reference run:
// mean of the lowest and highest dominant-ridge positions across k.
double estimate_gap_midpoint(const SpectralMap& reference, double omega_floor = 1e-6);

// Default window: midpoint +- 0.4 * Omega_z (factor 0.8 on [-Oz/2, Oz/2]).
std::pair<double, double> default_gap_window(double midpoint, double Omega_z,
                                             double factor = 0.8);

struct PowerCurvePoint {
    double P = 0.0;
    double C_at_peak = 0.0;
    PointFlag flag = PointFlag::ok;
};

struct PowerCurve {
    double k = 0.0;
    std::vector<PowerCurvePoint> points;
};

// Marker maximum over the gap window at each requested momentum, with the
// coupling recomputed from each power value.
std::vector<PowerCurve> power_activation_curve(const PhysicalParams& base,
                                               const std::vector<double>& k_points,
                                               const std::vector<double>& P_grid,
                                               const std::vector<double>& omega_grid,
                                               double gap_lo, double gap_hi);

// Frequency-integrated marker over the window, per k column.
std::vector<double> integrated_marker_profile(const ChernMarkerMap& cm,
                                              double gap_lo, double gap_hi);

} // namespace socbec

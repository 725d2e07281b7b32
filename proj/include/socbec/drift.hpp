#pragma once

#include "socbec/params.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace socbec {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix6cd = Eigen::Matrix<std::complex<double>, 6, 6>;

// 6x6 generator of the fluctuation dynamics in the quadrature basis
// (dq_c, dp_c, dq_up, dp_up, dq_dn, dp_dn), plus the raw symbols it was
// assembled from (needed by the printed-coefficient cross-check).
struct DriftMatrix {
    double k = 0.0;
    Matrix6d entries = Matrix6d::Zero();
    // raw symbols
    double kappa = 0, Delta = 0, G = 0, M = 0, Omega_z = 0, alpha_eff = 0, delta = 0;
};

// Assembles the matrix from raw symbols; used directly by tests and sweeps.
DriftMatrix drift_matrix_raw(double k, double kappa, double Delta, double G,
                             double M, double Omega_z, double alpha_eff, double delta);

DriftMatrix build_drift_matrix(const DerivedParams& d, const PhysicalParams& p, double k);

// p(s) = s^6 + a1 s^5 + ... + a6, computed by the Faddeev-LeVerrier recurrence.
struct CharPoly {
    std::array<double, 6> a{};  // a[0] = a1 ... a[5] = a6
};

CharPoly char_poly(const DriftMatrix& K);

// First three coefficients in the closed forms the derivation supplies.
// a3's closed form differs from det(sI - K) of the matrix as printed; the
// checker reports discrepancies instead of preferring either side.
struct CoefficientCheck {
    std::array<double, 3> printed{};    // a1, a2, a3 closed forms
    std::array<double, 3> computed{};   // same coefficients from char_poly
    std::array<double, 3> discrepancy{};// printed - computed
};

CoefficientCheck printed_coefficient_check(const DriftMatrix& K);

// Leading principal minors D1..D6 of the 6x6 Hurwitz matrix (a0 = 1,
// coefficients outside 0..6 are zero).
std::array<double, 6> hurwitz_determinants(const CharPoly& c);

struct StabilityReport {
    CharPoly coefficients;
    std::array<double, 6> hurwitz_minors{};
    bool rh_stable = false;     // all a_j > 0 and all minors > 0
    bool eigen_stable = false;  // max Re(lambda) < -tol
    double max_real_part = 0.0;
    double margin = 0.0;        // smallest |Re lambda|
};

// Throws MarginalSpectrum when |max Re lambda| <= tol.
StabilityReport stability_report(const DriftMatrix& K, double tol = 1e-9);

// Eigenvalues sorted by (Re, Im); conjugate-closed for the real matrix.
using Spectrum = std::array<std::complex<double>, 6>;
Spectrum eigen_spectrum(const DriftMatrix& K);

// K_H = (K - K^T)/2 antisymmetric, K_D = (K + K^T)/2 symmetric; K = K_H + K_D.
std::pair<Matrix6d, Matrix6d> hermitian_split(const DriftMatrix& K);

// G^R(omega) = (-i omega I - K)^{-1}; throws SingularResolvent when the
// solve is numerically singular.
Matrix6cd resolvent(const DriftMatrix& K, double omega);

// Per-channel noise weights of the input vector
// [sqrt(2 kappa), sqrt(2 kappa), 0, 2 sqrt(2 gamma), 0, 2 sqrt(2 gamma)];
// kept for provenance, the spectra use closed forms.
struct NoiseSpec {
    std::array<double, 6> weights{};
};

NoiseSpec noise_spec(const PhysicalParams& p);

struct EpCandidate {
    double k_at = 0.0;
    std::array<std::complex<double>, 2> lambda_pair{};
    double residual = 0.0;  // |lambda_i - lambda_j| at the candidate
    double re_gap_before = 0.0, re_gap_after = 0.0;
    double im_gap_before = 0.0, im_gap_after = 0.0;
};

using MatrixFamily = std::function<Eigen::MatrixXcd(double)>;

// Scans a one-parameter matrix family for eigenvalue coalescences where the
// real-part and imaginary-part gaps of a pair exchange dominance. Candidates
// are refined to grid-independent precision; only those with refined
// |lambda_i - lambda_j| <= ep_tolerance are kept, sorted by k_at.
std::vector<EpCandidate> scan_exceptional_points(const MatrixFamily& family,
                                                 const std::vector<double>& k_grid,
                                                 double ep_tolerance);

// Drift-matrix overload: family k -> K(k) at fixed parameters.
std::vector<EpCandidate> scan_exceptional_points(const DerivedParams& d,
                                                 const PhysicalParams& p,
                                                 const std::vector<double>& k_grid,
                                                 double ep_tolerance);

// Minimal-total-distance assignment between consecutive spectra; exposed for
// tests. Returns the permutation sigma with next[sigma[i]] continuing prev[i].
std::vector<int> match_spectra(const std::vector<std::complex<double>>& prev,
                               const std::vector<std::complex<double>>& next);

} // namespace socbec

#include "socbec/drift.hpp"

#include "socbec/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace socbec {

DriftMatrix drift_matrix_raw(double k, double kappa, double Delta, double G,
                             double M, double Omega_z, double alpha_eff, double delta) {
    DriftMatrix out;
    out.k = k;
    out.kappa = kappa;
    out.Delta = Delta;
    out.G = G;
    out.M = M;
    out.Omega_z = Omega_z;
    out.alpha_eff = alpha_eff;
    out.delta = delta;

    const double W = 0.5 * Omega_z;
    const double A = alpha_eff - 0.5 * delta;
    Matrix6d& m = out.entries;
    m.setZero();
    m(0, 0) = -kappa; m(0, 1) = Delta;
    m(1, 0) = Delta;  m(1, 1) = -kappa; m(1, 2) = G; m(1, 4) = G;
    m(2, 0) = 2 * G;  m(2, 2) = M;  m(2, 3) = W;  m(2, 4) = A;
    m(3, 2) = W;      m(3, 3) = M;  m(3, 5) = -A;
    m(4, 0) = 2 * G;  m(4, 2) = -A; m(4, 4) = M;  m(4, 5) = -W;
    m(5, 3) = A;      m(5, 4) = -W; m(5, 5) = M;
    return out;
}

DriftMatrix build_drift_matrix(const DerivedParams& d, const PhysicalParams& p, double k) {
    return drift_matrix_raw(k, p.kappa, d.Delta, d.G, d.M_of_k(k), p.Omega_z,
                            d.alpha_eff_of_k(k), p.delta);
}

CharPoly char_poly(const DriftMatrix& K) {
    // Faddeev-LeVerrier: M_1 = K, a_m = -tr(K M_m)/m, M_{m+1} = K(M_m + a_m I).
    CharPoly c;
    Matrix6d M = K.entries;
    for (int m = 1; m <= 6; ++m) {
        const double a = -M.trace() / m;
        c.a[m - 1] = a;
        if (m < 6) M = K.entries * (M + a * Matrix6d::Identity());
    }
    return c;
}

CoefficientCheck printed_coefficient_check(const DriftMatrix& K) {
    const double kap = K.kappa, Dl = K.Delta, G = K.G, M = K.M;
    const double Oz = K.Omega_z, al = K.alpha_eff, dl = K.delta;

    CoefficientCheck out;
    out.printed[0] = 2 * (kap - 2 * M);
    out.printed[1] = kap * kap - Dl * Dl + 6 * M * M - 8 * M * kap
                   - 0.5 * Oz * Oz + 2 * al * al - 2 * al * dl + 0.5 * dl * dl;
    out.printed[2] = 4 * Dl * Dl * M - 4 * Dl * G * G - 4 * M * M * M + 12 * M * M * kap
                   + M * Oz * Oz - 4 * M * al * al + 4 * M * al * dl - M * dl * dl
                   - Oz * Oz * kap + 4 * al * al * kap - 4 * al * dl * kap + dl * dl * kap;

    const CharPoly c = char_poly(K);
    for (int i = 0; i < 3; ++i) {
        out.computed[i] = c.a[i];
        out.discrepancy[i] = out.printed[i] - out.computed[i];
    }
    return out;
}

std::array<double, 6> hurwitz_determinants(const CharPoly& c) {
    auto coeff = [&](int m) -> double {
        if (m == 0) return 1.0;
        if (m < 0 || m > 6) return 0.0;
        return c.a[m - 1];
    };
    Matrix6d H;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            H(i, j) = coeff(2 * (j + 1) - (i + 1));

    std::array<double, 6> minors{};
    for (int m = 1; m <= 6; ++m)
        minors[m - 1] = H.topLeftCorner(m, m).determinant();
    return minors;
}

Spectrum eigen_spectrum(const DriftMatrix& K) {
    Eigen::EigenSolver<Matrix6d> solver(K.entries, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw EigenFailure("eigen_spectrum: solver did not converge");
    Spectrum s;
    for (int i = 0; i < 6; ++i) s[i] = solver.eigenvalues()(i);
    std::sort(s.begin(), s.end(), [](auto a, auto b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return s;
}

StabilityReport stability_report(const DriftMatrix& K, double tol) {
    if (!(tol > 0)) throw SpecInvalid("stability_report: tol must be > 0");
    StabilityReport r;
    r.coefficients = char_poly(K);
    r.hurwitz_minors = hurwitz_determinants(r.coefficients);

    r.rh_stable = true;
    for (double a : r.coefficients.a)
        if (!(a > 0)) r.rh_stable = false;
    for (double m : r.hurwitz_minors)
        if (!(m > 0)) r.rh_stable = false;

    const Spectrum s = eigen_spectrum(K);
    r.max_real_part = -std::numeric_limits<double>::infinity();
    r.margin = std::numeric_limits<double>::infinity();
    for (const auto& l : s) {
        r.max_real_part = std::max(r.max_real_part, l.real());
        r.margin = std::min(r.margin, std::abs(l.real()));
    }
    if (std::abs(r.max_real_part) <= tol)
        throw MarginalSpectrum("stability_report: |max Re lambda| within tolerance, verdict indeterminate");
    r.eigen_stable = r.max_real_part < -tol;
    return r;
}

std::pair<Matrix6d, Matrix6d> hermitian_split(const DriftMatrix& K) {
    // reassembles to K within one rounding step per entry
    const Matrix6d KH = 0.5 * (K.entries - K.entries.transpose());
    const Matrix6d KD = 0.5 * (K.entries + K.entries.transpose());
    return {KH, KD};
}

Matrix6cd resolvent(const DriftMatrix& K, double omega) {
    Matrix6cd A = -K.entries.cast<std::complex<double>>();
    for (int i = 0; i < 6; ++i) A(i, i) += std::complex<double>(0.0, -omega);

    Eigen::FullPivLU<Matrix6cd> lu(A);
    if (!lu.isInvertible())
        throw SingularResolvent("resolvent: -i omega is an eigenvalue of K");
    Matrix6cd R = lu.inverse();
    const double residual = (A * R - Matrix6cd::Identity()).cwiseAbs().maxCoeff();
    if (!(residual < 1e-8) || !R.allFinite())
        throw SingularResolvent("resolvent: solve numerically singular");
    return R;
}

NoiseSpec noise_spec(const PhysicalParams& p) {
    NoiseSpec n;
    const double wc = std::sqrt(2.0 * p.kappa);
    const double wa = 2.0 * std::sqrt(2.0 * p.gamma);
    n.weights = {wc, wc, 0.0, wa, 0.0, wa};
    return n;
}

// --- eigenvalue tracking -----------------------------------------------------

std::vector<int> match_spectra(const std::vector<std::complex<double>>& prev,
                               const std::vector<std::complex<double>>& next) {
    const int n = static_cast<int>(prev.size());
    if (static_cast<int>(next.size()) != n)
        throw SpecInvalid("match_spectra: size mismatch");

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);

    if (n <= 8) {
        // exact: brute-force the assignment, ties broken toward real-part continuity
        std::vector<int> best = idx;
        double best_cost = std::numeric_limits<double>::infinity();
        double best_re = std::numeric_limits<double>::infinity();
        std::vector<int> perm = idx;
        std::sort(perm.begin(), perm.end());
        do {
            double cost = 0, re_cost = 0;
            for (int i = 0; i < n; ++i) {
                cost += std::abs(prev[i] - next[perm[i]]);
                re_cost += std::abs(prev[i].real() - next[perm[i]].real());
            }
            if (cost < best_cost - 1e-15 ||
                (cost < best_cost + 1e-15 && re_cost < best_re)) {
                best_cost = cost;
                best_re = re_cost;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }

    // greedy fallback for larger families
    std::vector<int> out(n, -1);
    std::vector<bool> used(n, false);
    for (int i = 0; i < n; ++i) {
        double bd = std::numeric_limits<double>::infinity();
        int bj = -1;
        for (int j = 0; j < n; ++j) {
            if (used[j]) continue;
            const double d = std::abs(prev[i] - next[j]);
            if (d < bd) { bd = d; bj = j; }
        }
        out[i] = bj;
        used[bj] = true;
    }
    return out;
}

namespace {

std::vector<std::complex<double>> family_spectrum(const MatrixFamily& fam, double k) {
    const Eigen::MatrixXcd m = fam(k);
    if (m.rows() != m.cols() || m.rows() == 0)
        throw SpecInvalid("scan_exceptional_points: family must return a square matrix");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    if (solver.info() != Eigen::Success)
        throw EigenFailure("scan_exceptional_points: eigen solver failed");
    std::vector<std::complex<double>> ev(m.rows());
    for (int i = 0; i < m.rows(); ++i) ev[i] = solver.eigenvalues()(i);
    std::sort(ev.begin(), ev.end(), [](auto a, auto b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return ev;
}

double spectral_extent(const std::vector<std::complex<double>>& ev) {
    double ext = 0;
    for (std::size_t i = 0; i < ev.size(); ++i)
        for (std::size_t j = i + 1; j < ev.size(); ++j)
            ext = std::max(ext, std::abs(ev[i] - ev[j]));
    return ext;
}

// Golden-section minimization of the tracked pair distance over [lo, hi].
// ref anchors the pair identity: eigenvalues at probe points are matched
// against the reference spectrum before measuring the (i, j) distance.
struct RefinedMin {
    double k;
    std::complex<double> li, lj;
};

RefinedMin refine_pair_min(const MatrixFamily& fam,
                           const std::vector<std::complex<double>>& ref,
                           int i, int j, double lo, double hi) {
    auto pair_at = [&](double k) {
        auto ev = family_spectrum(fam, k);
        auto sigma = match_spectra(ref, ev);
        return std::pair<std::complex<double>, std::complex<double>>(ev[sigma[i]], ev[sigma[j]]);
    };
    auto dist = [&](double k) {
        auto [a, b] = pair_at(k);
        return std::abs(a - b);
    };
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = dist(c), fd = dist(d);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a);
            fc = dist(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a);
            fd = dist(d);
        }
    }
    const double km = 0.5 * (a + b);
    auto [li, lj] = pair_at(km);
    RefinedMin r{km, li, lj};
    return r;
}

} // namespace

std::vector<EpCandidate> scan_exceptional_points(const MatrixFamily& family,
                                                 const std::vector<double>& k_grid,
                                                 double ep_tolerance) {
    if (k_grid.size() < 3) throw SpecInvalid("scan_exceptional_points: need >= 3 grid points");
    if (!(ep_tolerance > 0)) throw SpecInvalid("scan_exceptional_points: ep_tolerance must be > 0");
    for (std::size_t m = 1; m < k_grid.size(); ++m)
        if (!(k_grid[m] > k_grid[m - 1]))
            throw BadGrid("scan_exceptional_points: k_grid must be strictly increasing");

    const std::size_t npts = k_grid.size();
    std::vector<std::vector<std::complex<double>>> tracks(npts);
    tracks[0] = family_spectrum(family, k_grid[0]);
    const std::size_t n = tracks[0].size();

    for (std::size_t m = 1; m < npts; ++m) {
        auto ev = family_spectrum(family, k_grid[m]);
        auto sigma = match_spectra(tracks[m - 1], ev);
        std::vector<std::complex<double>> ordered(n);
        double worst_move = 0;
        for (std::size_t i = 0; i < n; ++i) {
            ordered[i] = ev[sigma[i]];
            worst_move = std::max(worst_move, std::abs(ordered[i] - tracks[m - 1][i]));
        }
        const double extent = spectral_extent(tracks[m - 1]);
        if (extent > 0 && worst_move > 0.75 * extent)
            throw TrackingAmbiguity("scan_exceptional_points: eigenvalue continuation ambiguous between grid points");
        tracks[m] = std::move(ordered);
    }

    std::vector<EpCandidate> out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t m = 1; m + 1 < npts; ++m) {
                const double dm = std::abs(tracks[m][i] - tracks[m][j]);
                const double dl = std::abs(tracks[m - 1][i] - tracks[m - 1][j]);
                const double dr = std::abs(tracks[m + 1][i] - tracks[m + 1][j]);
                if (!(dm <= dl && dm <= dr)) continue;

                const double re_b = std::abs(tracks[m - 1][i].real() - tracks[m - 1][j].real());
                const double im_b = std::abs(tracks[m - 1][i].imag() - tracks[m - 1][j].imag());
                const double re_a = std::abs(tracks[m + 1][i].real() - tracks[m + 1][j].real());
                const double im_a = std::abs(tracks[m + 1][i].imag() - tracks[m + 1][j].imag());
                // the two gaps must exchange dominance across the bracket
                const bool exchange = (re_b > im_b && re_a < im_a) || (re_b < im_b && re_a > im_a);
                if (!exchange) continue;

                auto refined = refine_pair_min(family, tracks[m],
                                               static_cast<int>(i), static_cast<int>(j),
                                               k_grid[m - 1], k_grid[m + 1]);
                const double residual = std::abs(refined.li - refined.lj);
                if (residual > ep_tolerance) continue;

                EpCandidate c;
                c.k_at = refined.k;
                c.lambda_pair = {refined.li, refined.lj};
                c.residual = residual;
                c.re_gap_before = re_b;
                c.re_gap_after = re_a;
                c.im_gap_before = im_b;
                c.im_gap_after = im_a;
                out.push_back(c);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.k_at < b.k_at; });
    return out;
}

std::vector<EpCandidate> scan_exceptional_points(const DerivedParams& d,
                                                 const PhysicalParams& p,
                                                 const std::vector<double>& k_grid,
                                                 double ep_tolerance) {
    MatrixFamily fam = [&d, &p](double k) -> Eigen::MatrixXcd {
        return build_drift_matrix(d, p, k).entries.cast<std::complex<double>>();
    };
    return scan_exceptional_points(fam, k_grid, ep_tolerance);
}

} // namespace socbec

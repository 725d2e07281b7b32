#include "socbec/topology.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace socbec {

namespace {
constexpr double two_pi = 6.283185307179586476925286766559;
const double qnan = std::numeric_limits<double>::quiet_NaN();
} // namespace

double thermal_energy(double omega, double theta) {
    if (theta == 0.0) {
        if (omega == 0.0)
            throw ZeroFrequency("thermal_energy: omega = 0 at zero temperature");
        return 0.5 * std::abs(omega);
    }
    if (omega == 0.0) return theta;  // equipartition limit
    const double x = omega / (2.0 * theta);
    return 0.5 * omega / std::tanh(x);
}

double calibration_factor(double omega, const PhysicalParams& p, double Delta) {
    const cplx R = cavity_response(omega, p.kappa, Delta);
    const double r2 = std::norm(R);
    if (r2 <= std::pow(1e-12 * (p.kappa * p.kappa + Delta * Delta), 2)) return qnan;
    return 2.0 * p.eta_det * p.kappa_ext_or_default() / r2;
}

ChernMarkerMap chern_marker_from_psd(const SpectralMap& map, const PhysicalParams& p) {
    if (map.values.empty()) throw SpecInvalid("chern_marker_from_psd: empty map");
    ChernMarkerMap cm;
    cm.k_grid = map.k_grid;
    cm.omega_grid = map.omega_grid;
    cm.eta_det = p.eta_det;
    cm.kappa_ext = p.kappa_ext_or_default();
    cm.T = p.T;
    cm.C_values.resize(map.values.size(), qnan);
    cm.flags.resize(map.values.size(), PointFlag::ok);

    const double Delta = map.derived.Delta;
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        const SpectralPoint& pt = map.values[i];
        if (pt.flag != PointFlag::ok) {
            cm.flags[i] = pt.flag;
            continue;
        }
        if (pt.omega == 0.0 && p.T == 0.0) {
            cm.flags[i] = PointFlag::zero_frequency;
            continue;
        }
        const double xi = calibration_factor(pt.omega, p, Delta);
        if (std::isnan(xi)) {
            cm.flags[i] = PointFlag::singular_r;
            continue;
        }
        cm.C_values[i] = two_pi * pt.S_out / (xi * thermal_energy(pt.omega, p.T));
    }
    return cm;
}

BerryMap berry_from_marker(const ChernMarkerMap& cm) {
    BerryMap b;
    b.k_grid = cm.k_grid;
    b.omega_grid = cm.omega_grid;
    b.source = BerryMap::Source::from_marker;
    b.values.resize(cm.C_values.size());
    for (std::size_t i = 0; i < cm.C_values.size(); ++i)
        b.values[i] = two_pi * cm.C_values[i];
    return b;
}

BerryMap plaquette_berry(const TwoBandHamiltonian& h,
                         const std::vector<double>& grid_u,
                         const std::vector<double>& grid_v,
                         Band band, bool periodic, double gap_floor) {
    const std::size_t nu = grid_u.size(), nv = grid_v.size();
    if (nu < 2 || nv < 2) throw BadGrid("plaquette_berry: need at least a 2x2 grid");

    // eigenvector of the selected band at every grid point
    std::vector<Eigen::Vector2cd> states(nu * nv);
    for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
            const Eigen::Matrix2cd H = h(grid_u[i], grid_v[j]);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(H);
            if (solver.info() != Eigen::Success)
                throw NonConvergedEigen("plaquette_berry: eigen solver failed");
            const double gap = solver.eigenvalues()(1) - solver.eigenvalues()(0);
            if (gap < gap_floor)
                throw BandDegeneracy("plaquette_berry: band gap under the floor at a grid point");
            states[i * nv + j] = solver.eigenvectors().col(band == Band::lower ? 0 : 1);
        }
    }

    const std::size_t pu = periodic ? nu : nu - 1;
    const std::size_t pv = periodic ? nv : nv - 1;
    BerryMap out;
    out.source = BerryMap::Source::plaquette;
    out.k_grid.assign(grid_u.begin(), grid_u.begin() + pu);
    out.omega_grid.assign(grid_v.begin(), grid_v.begin() + pv);
    out.values.resize(pu * pv);

    auto U = [&](std::size_t i, std::size_t j) -> const Eigen::Vector2cd& {
        return states[(i % nu) * nv + (j % nv)];
    };
    double total = 0.0;
    for (std::size_t i = 0; i < pu; ++i) {
        for (std::size_t j = 0; j < pv; ++j) {
            const cplx l1 = U(i, j).dot(U(i + 1, j));          // <u1|u2>
            const cplx l2 = U(i + 1, j).dot(U(i + 1, j + 1));  // <u2|u3>
            const cplx l3 = U(i + 1, j + 1).dot(U(i, j + 1));  // <u3|u4>
            const cplx l4 = U(i, j + 1).dot(U(i, j));          // <u4|u1>
            const double f = std::arg(l1 * l2 * l3 * l4);
            out.values[i * pv + j] = f;
            total += f;
        }
    }
    out.total_flux = total;
    return out;
}

RidgeTrace find_edge_ridge(const SpectralMap& map, double gap_lo, double gap_hi,
                           double continuity_factor) {
    const auto& wg = map.omega_grid;
    std::size_t jlo = wg.size(), jhi = 0;
    for (std::size_t j = 0; j < wg.size(); ++j) {
        if (wg[j] >= gap_lo && wg[j] <= gap_hi) {
            jlo = std::min(jlo, j);
            jhi = std::max(jhi, j);
        }
    }
    if (jlo >= wg.size() || jhi <= jlo)
        throw EmptyGapWindow("find_edge_ridge: gap window contains fewer than two grid columns");

    RidgeTrace tr;
    tr.gap_lo = gap_lo;
    tr.gap_hi = gap_hi;
    const std::size_t nk = map.k_grid.size();
    tr.points.resize(nk);
    for (std::size_t ik = 0; ik < nk; ++ik) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t jbest = jlo;
        for (std::size_t j = jlo; j <= jhi; ++j) {
            const double v = map.at(ik, j).S_out;
            if (std::isfinite(v) && v > best) {
                best = v;
                jbest = j;
            }
        }
        tr.points[ik] = {map.k_grid[ik], wg[jbest],
                         std::isfinite(best) ? best : qnan, 0.0};
    }
    for (std::size_t ik = 0; ik < nk; ++ik) {
        const std::size_t l = ik == 0 ? 0 : ik - 1;
        const std::size_t r = ik + 1 == nk ? ik : ik + 1;
        const double dk = map.k_grid[r] - map.k_grid[l];
        tr.points[ik].local_slope =
            dk > 0 ? (tr.points[r].omega_peak - tr.points[l].omega_peak) / dk : 0.0;
    }

    // best contiguous stretch with per-step continuity
    const double step = wg.size() > 1 ? wg[1] - wg[0] : 1.0;
    const double jump_cap = continuity_factor * step;
    const double height = gap_hi - gap_lo;
    double best_cov = 0.0;
    std::size_t i = 0;
    while (i < nk) {
        std::size_t j = i;
        while (j + 1 < nk &&
               std::abs(tr.points[j + 1].omega_peak - tr.points[j].omega_peak) <= jump_cap)
            ++j;
        double lo = tr.points[i].omega_peak, hi = lo;
        for (std::size_t m = i; m <= j; ++m) {
            lo = std::min(lo, tr.points[m].omega_peak);
            hi = std::max(hi, tr.points[m].omega_peak);
        }
        const double cov = height > 0 ? (hi - lo) / height : 0.0;
        if (cov > best_cov) {
            best_cov = cov;
            tr.segment_begin = i;
            tr.segment_end = j;
        }
        i = j + 1;
    }
    tr.spans_gap = best_cov >= 0.9;
    return tr;
}

namespace {

// dominant positive-frequency ridge position per k column
std::vector<double> positive_ridge(const SpectralMap& map, double omega_floor) {
    const auto& wg = map.omega_grid;
    std::vector<double> out(map.k_grid.size(), qnan);
    for (std::size_t ik = 0; ik < map.k_grid.size(); ++ik) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < wg.size(); ++j) {
            if (wg[j] <= omega_floor) continue;
            const double v = map.at(ik, j).S_out;
            if (std::isfinite(v) && v > best) {
                best = v;
                out[ik] = wg[j];
            }
        }
    }
    return out;
}

} // namespace

double ridge_gap_measure(const SpectralMap& map, double omega_floor) {
    const auto pos = positive_ridge(map, omega_floor);
    // mirror partner via the dominant ridge on the negative half
    const auto& wg = map.omega_grid;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t ik = 0; ik < map.k_grid.size(); ++ik) {
        if (std::isnan(pos[ik])) continue;
        double bneg = -std::numeric_limits<double>::infinity();
        double wneg = qnan;
        for (std::size_t j = 0; j < wg.size(); ++j) {
            if (wg[j] >= -omega_floor) break;
            const double v = map.at(ik, j).S_out;
            if (std::isfinite(v) && v > bneg) {
                bneg = v;
                wneg = wg[j];
            }
        }
        if (std::isnan(wneg)) continue;
        best = std::min(best, pos[ik] - wneg);
    }
    if (!std::isfinite(best))
        throw EmptyGapWindow("ridge_gap_measure: no ridge pair found");
    return best;
}

double estimate_gap_midpoint(const SpectralMap& reference, double omega_floor) {
    const auto pos = positive_ridge(reference, omega_floor);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double w : pos) {
        if (std::isnan(w)) continue;
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    if (!std::isfinite(lo))
        throw EmptyGapWindow("estimate_gap_midpoint: reference map has no positive ridge");
    return 0.5 * (lo + hi);
}

std::pair<double, double> default_gap_window(double midpoint, double Omega_z, double factor) {
    const double half = 0.5 * factor * Omega_z;
    return {midpoint - half, midpoint + half};
}

std::vector<PowerCurve> power_activation_curve(const PhysicalParams& base,
                                               const std::vector<double>& k_points,
                                               const std::vector<double>& P_grid,
                                               const std::vector<double>& omega_grid,
                                               double gap_lo, double gap_hi) {
    for (std::size_t i = 1; i < P_grid.size(); ++i)
        if (!(P_grid[i] > P_grid[i - 1]))
            throw BadGrid("power_activation_curve: P_grid must be increasing");

    std::vector<PowerCurve> out;
    out.reserve(k_points.size());
    for (double k : k_points) {
        PowerCurve curve;
        curve.k = k;
        for (double P : P_grid) {
            PhysicalParams p = base;
            p.P = P;
            SpectralMap m = psd_map(p, {k}, omega_grid, 1);
            ChernMarkerMap cm = chern_marker_from_psd(m, p);
            PowerCurvePoint pt;
            pt.P = P;
            double best = -std::numeric_limits<double>::infinity();
            bool any = false;
            for (std::size_t j = 0; j < omega_grid.size(); ++j) {
                if (omega_grid[j] < gap_lo || omega_grid[j] > gap_hi) continue;
                const double v = cm.at(0, j);
                if (std::isfinite(v)) {
                    best = std::max(best, v);
                    any = true;
                }
            }
            if (any) {
                pt.C_at_peak = best;
            } else {
                pt.C_at_peak = qnan;
                pt.flag = PointFlag::singular_x;
            }
            curve.points.push_back(pt);
        }
        out.push_back(std::move(curve));
    }
    return out;
}

std::vector<double> integrated_marker_profile(const ChernMarkerMap& cm,
                                              double gap_lo, double gap_hi) {
    const auto& wg = cm.omega_grid;
    const double dw = wg.size() > 1 ? wg[1] - wg[0] : 1.0;
    std::vector<double> prof(cm.k_grid.size(), 0.0);
    for (std::size_t ik = 0; ik < cm.k_grid.size(); ++ik) {
        double acc = 0.0;
        for (std::size_t j = 0; j < wg.size(); ++j) {
            if (wg[j] < gap_lo || wg[j] > gap_hi) continue;
            const double v = cm.at(ik, j);
            if (std::isfinite(v)) acc += v * dw;
        }
        prof[ik] = acc;
    }
    return prof;
}

} // namespace socbec

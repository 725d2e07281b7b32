#include "socbec/spectra.hpp"

#include "socbec/parallel.hpp"

#include <cmath>
#include <limits>

namespace socbec {

namespace {
constexpr double two_pi = 6.283185307179586476925286766559;

// relative floor on |R|; flags the kappa^2 = Delta^2, omega = 0 resonance line
bool r_singular(const cplx& R, double kappa, double Delta) {
    return std::abs(R) <= 1e-12 * (kappa * kappa + Delta * Delta);
}
} // namespace

cplx cavity_response(double omega, double kappa, double Delta) {
    const cplx z(kappa, omega);
    return z * z - Delta * Delta;
}

ResponseKernels response_kernels(double omega, const DerivedParams& d,
                                 const PhysicalParams& p, double k, double x_floor) {
    ResponseKernels kn;
    const double M = d.M_of_k(k);
    const double A = d.alpha_eff_of_k(k) - 0.5 * p.delta;
    const double Oz2 = p.Omega_z * p.Omega_z;
    const double G2 = d.G * d.G;
    const double Dl = d.Delta;

    kn.R = cavity_response(omega, p.kappa, Dl);
    kn.D = -omega * omega * kn.R;
    kn.Ksusc = M * M + A * A;

    const cplx RD = kn.R * kn.D;
    const cplx KD = kn.Ksusc * kn.D;
    const cplx KR = kn.Ksusc * kn.R;

    kn.Y_up = 4.0 * M * KR + Oz2 * RD - 8.0 * G2 * Dl * KD;
    kn.Y_dn = 4.0 * M * KR - Oz2 * RD - 8.0 * G2 * Dl * KD;
    kn.Z_up = Oz2 * RD + 4.0 * A * kn.Ksusc * RD + 8.0 * G2 * Dl * KD;
    kn.Z_dn = -Oz2 * RD - 4.0 * A * kn.Ksusc * RD + 8.0 * G2 * Dl * KD;
    kn.C_coef = 8.0 * G2 * std::sqrt(2.0 * p.kappa) * KD;
    const cplx fscale = 8.0 * G2 * std::sqrt(p.gamma) * KD;
    kn.F_up = (kn.Z_up + kn.Y_dn) * fscale;
    kn.F_dn = (kn.Z_dn + kn.Y_up) * fscale;
    kn.X = kn.Y_up * kn.Y_dn + kn.Z_up * kn.Z_dn;
    kn.singular_x = std::abs(kn.X) < x_floor;
    return kn;
}

AtomicPsd atomic_psd(double omega, const DerivedParams& d, const PhysicalParams& p,
                     double k, double x_floor) {
    const ResponseKernels kn = response_kernels(omega, d, p, k, x_floor);
    AtomicPsd out;
    if (kn.singular_x) {
        out.flag = PointFlag::singular_x;
        out.S_up = out.S_dn = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    const double x2 = std::norm(kn.X);
    const double drive = std::norm(kn.C_coef) *
                         (d.Delta * d.Delta + p.kappa * p.kappa + omega * omega);
    out.S_up = (two_pi * drive * (std::norm(kn.Z_up) + std::norm(kn.Y_dn)) +
                two_pi * kn.F_up.real()) / x2;
    out.S_dn = (two_pi * drive * (std::norm(kn.Z_dn) + std::norm(kn.Y_up)) +
                two_pi * kn.F_dn.real()) / x2;
    out.im_residue_up = two_pi * kn.F_up.imag() / x2;
    out.im_residue_dn = two_pi * kn.F_dn.imag() / x2;
    return out;
}

OutputPsd output_psd(double omega, const DerivedParams& d, const PhysicalParams& p,
                     double k, double x_floor) {
    OutputPsd out;
    const cplx R = cavity_response(omega, p.kappa, d.Delta);
    if (r_singular(R, p.kappa, d.Delta)) {
        out.flag = PointFlag::singular_r;
        out.S_out = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    const AtomicPsd at = atomic_psd(omega, d, p, k, x_floor);
    if (at.flag != PointFlag::ok) {
        out.flag = at.flag;
        out.S_out = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    const double Dl = d.Delta;
    const double bracket = p.kappa * p.kappa + omega * omega + Dl * Dl + 2.0 * p.kappa * Dl;
    out.S_out = (two_pi / std::norm(R)) *
                (bracket + 4.0 * p.kappa * Dl * (d.G * at.S_up + d.G * at.S_dn));
    return out;
}

QuadratureTransfer output_quadrature_transfer(double omega, const DerivedParams& d,
                                              const PhysicalParams& p, double /*k*/) {
    QuadratureTransfer t;
    const cplx R = cavity_response(omega, p.kappa, d.Delta);
    const double Dl = d.Delta;
    const double s2k = std::sqrt(2.0 * p.kappa);
    t.q_in_coef = (p.kappa * p.kappa + omega * omega + Dl * Dl) / R;
    t.p_in_coef = 2.0 * p.kappa * Dl / R;
    t.q_atomic_coef = s2k * Dl * d.G / R;
    t.p_atomic_coef = s2k * cplx(p.kappa, omega) * d.G / R;
    return t;
}

SpectralMap psd_map(const PhysicalParams& p, const std::vector<double>& k_grid,
                    const std::vector<double>& omega_grid, int workers,
                    double x_floor_rel) {
    validate_or_throw(p);
    if (k_grid.empty() || omega_grid.empty())
        throw BadGrid("psd_map: empty grid");
    for (std::size_t i = 1; i < k_grid.size(); ++i)
        if (!(k_grid[i] > k_grid[i - 1])) throw BadGrid("psd_map: k_grid not strictly increasing");
    for (std::size_t i = 1; i < omega_grid.size(); ++i)
        if (!(omega_grid[i] > omega_grid[i - 1])) throw BadGrid("psd_map: omega_grid not strictly increasing");

    SpectralMap map;
    map.k_grid = k_grid;
    map.omega_grid = omega_grid;
    map.meta = p;
    map.derived = derive(p);
    map.values.resize(k_grid.size() * omega_grid.size());

    const DerivedParams& d = map.derived;
    const std::size_t nw = omega_grid.size();

    // pass 1: |X| over the map fixes the relative singularity floor
    std::vector<double> absx(map.values.size());
    parallel_for(k_grid.size(), workers, [&](std::size_t ik) {
        for (std::size_t iw = 0; iw < nw; ++iw) {
            const ResponseKernels kn = response_kernels(omega_grid[iw], d, p, k_grid[ik], 0.0);
            absx[ik * nw + iw] = std::abs(kn.X);
        }
    });
    double xmax = 0;
    for (double v : absx) xmax = std::max(xmax, v);
    const double x_floor = std::max(x_floor_rel * xmax, 1e-300);

    parallel_for(k_grid.size(), workers, [&](std::size_t ik) {
        for (std::size_t iw = 0; iw < nw; ++iw) {
            SpectralPoint& pt = map.values[ik * nw + iw];
            pt.k = k_grid[ik];
            pt.omega = omega_grid[iw];
            const AtomicPsd at = atomic_psd(pt.omega, d, p, pt.k, x_floor);
            const OutputPsd so = output_psd(pt.omega, d, p, pt.k, x_floor);
            pt.S_up = at.S_up;
            pt.S_dn = at.S_dn;
            pt.S_out = so.S_out;
            pt.flag = so.flag != PointFlag::ok ? so.flag : at.flag;
        }
    });

    for (const auto& pt : map.values)
        if (pt.flag != PointFlag::ok) ++map.singular_count;
    return map;
}

} // namespace socbec

#pragma once

#include "socbec/errors.hpp"
#include "socbec/params.hpp"

#include <complex>
#include <vector>

namespace socbec {

using cplx = std::complex<double>;

// R(omega) = (kappa + i omega)^2 - Delta^2
cplx cavity_response(double omega, double kappa, double Delta);

// Frequency-domain kernels of the atomic response at fixed (omega, k).
// Up/down members carry the two sign rows of the derivation.
struct ResponseKernels {
    cplx R, D;
    double Ksusc = 0.0;  // M(k)^2 + (alpha_eff - delta/2)^2, constant in omega
    cplx Y_up, Y_dn, Z_up, Z_dn;
    cplx C_coef;
    cplx F_up, F_dn;     // F pairs Z_up with Y_dn and Z_dn with Y_up
    cplx X;
    bool singular_x = false;  // |X| under the floor; carried to the PSDs
};

ResponseKernels response_kernels(double omega, const DerivedParams& d,
                                 const PhysicalParams& p, double k,
                                 double x_floor = 1e-300);

struct AtomicPsd {
    double S_up = 0.0;
    double S_dn = 0.0;
    double im_residue_up = 0.0;  // imaginary leftovers of the noise term,
    double im_residue_dn = 0.0;  // exported as a formula-consistency diagnostic
    PointFlag flag = PointFlag::ok;
};

AtomicPsd atomic_psd(double omega, const DerivedParams& d, const PhysicalParams& p,
                     double k, double x_floor = 1e-300);

struct OutputPsd {
    double S_out = 0.0;
    PointFlag flag = PointFlag::ok;
};

OutputPsd output_psd(double omega, const DerivedParams& d, const PhysicalParams& p,
                     double k, double x_floor = 1e-300);

// Coefficients of the input-output relations, for diagnostic export:
// q_out = q_in_coef * dq_in + p_in_coef * dp_in + atomic_coef * (dq_up + dq_dn),
// p_out mirrors with swapped input roles and its own atomic coefficient,
// c_out = q_in_coef * dc_in + p_in_coef * dc_in^dag + atomic_coef * (dq_up + dq_dn).
struct QuadratureTransfer {
    cplx q_in_coef;        // (kappa^2 + omega^2 + Delta^2) / R
    cplx p_in_coef;        // 2 kappa Delta / R
    cplx q_atomic_coef;    // sqrt(2 kappa) Delta G / R
    cplx p_atomic_coef;    // sqrt(2 kappa) (kappa + i omega) G / R
};

QuadratureTransfer output_quadrature_transfer(double omega, const DerivedParams& d,
                                              const PhysicalParams& p, double k);

struct SpectralPoint {
    double k = 0.0;
    double omega = 0.0;
    double S_up = 0.0, S_dn = 0.0, S_out = 0.0;
    PointFlag flag = PointFlag::ok;
};

struct SpectralMap {
    std::vector<double> k_grid;
    std::vector<double> omega_grid;
    std::vector<SpectralPoint> values;  // row-major, k outer
    PhysicalParams meta;
    DerivedParams derived;
    std::size_t singular_count = 0;

    const SpectralPoint& at(std::size_t ik, std::size_t iw) const {
        return values[ik * omega_grid.size() + iw];
    }
};

// Dense evaluation over the grids. Points whose |X| falls under
// x_floor_rel * max|X| are flagged singular and their S values set to NaN.
// Deterministic for any worker count.
SpectralMap psd_map(const PhysicalParams& p, const std::vector<double>& k_grid,
                    const std::vector<double>& omega_grid, int workers = 1,
                    double x_floor_rel = 1e-12);

} // namespace socbec

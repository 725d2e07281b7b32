#pragma once

#include <complex>
#include <string>
#include <vector>

namespace socbec {

// All rates are expressed in units of the recoil frequency at the Raman
// wavevector; momenta in units of k_x, so the kinetic dispersion is k^2.
struct PhysicalParams {
    double kappa = 1.0;        // cavity decay rate
    double gamma = 0.5;        // atomic dissipation rate
    double Delta_a = 0.0;      // bare pump-cavity detuning
    double N = 1.8e5;          // atom number
    double g_a = 1.0;          // single-atom dispersive coupling
    double U = 0.0;            // total intra-species collisional shift U*N
    double epsilon = 1.0;      // interspecies ratio U_ud / U
    double Omega_z = 3.0;      // Raman (effective Zeeman) coupling
    double delta = 0.0;        // Raman detuning
    double alpha_tilde = 1.5;  // SOC strength; alpha_eff(k) = alpha_tilde * k
    double P = 0.0;            // drive power, dimensionless pump units
    double omega_p = 1000.0;   // pump frequency scale entering |eta|
    double T = 0.0;            // thermal ratio theta = k_B T / (hbar Omega)
    double eta_det = 1.0;      // detection efficiency, (0, 1]
    double kappa_ext = -1.0;   // output-port coupling; <0 means "= kappa"

    double kappa_ext_or_default() const { return kappa_ext < 0 ? kappa : kappa_ext; }
};

struct InvalidParam {
    std::string field;
    std::string reason;
};

// Empty result means every invariant holds.
std::vector<InvalidParam> validate(const PhysicalParams& p);

// Throws SpecInvalid with the joined violation list.
void validate_or_throw(const PhysicalParams& p);

// Everything the drift matrix and the spectra need, derived once.
struct DerivedParams {
    double Delta = 0.0;             // effective detuning Delta_a + g_a N
    std::complex<double> c_s;       // steady-state intracavity amplitude
    double G = 0.0;                 // linearized coupling sqrt(2) g_a |c_s|
    double v = 0.0;                 // mean dispersive light shift g_a |c_s|^2
    double interaction_shift = 0.0; // U (1 - epsilon), cached

    double M_of_k(double k) const { return 0.5 * k * k + v + interaction_shift - gamma_; }
    double alpha_eff_of_k(double k) const { return alpha_tilde_ * k; }

    // cached inputs needed by the closures above
    double gamma_ = 0.0;
    double alpha_tilde_ = 0.0;
};

// c_s = eta / (kappa + i Delta) with eta = sqrt(P kappa / omega_p), real positive.
std::complex<double> steady_state_field(const PhysicalParams& p, double Delta);

// G = sqrt(2) g_a |c_s|; monotone in P at fixed (kappa, Delta).
double coupling_from_power(const PhysicalParams& p, double Delta);

DerivedParams derive(const PhysicalParams& p);

} // namespace socbec

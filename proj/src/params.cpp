#include "socbec/params.hpp"

#include "socbec/errors.hpp"

#include <cmath>
#include <sstream>

namespace socbec {

std::vector<InvalidParam> validate(const PhysicalParams& p) {
    std::vector<InvalidParam> bad;
    auto check = [&](bool ok, const char* field, const char* reason) {
        if (!ok) bad.push_back({field, reason});
    };
    check(p.kappa > 0, "kappa", "must be > 0");
    check(p.gamma >= 0, "gamma", "must be >= 0");
    check(p.N > 0, "N", "must be > 0");
    check(p.g_a >= 0, "g_a", "must be >= 0");
    check(p.epsilon >= 0, "epsilon", "must be >= 0");
    check(p.T >= 0, "T", "must be >= 0");
    check(p.P >= 0, "P", "must be >= 0");
    check(p.omega_p > 0, "omega_p", "must be > 0");
    check(p.eta_det > 0 && p.eta_det <= 1, "eta_det", "must be in (0, 1]");
    const double kext = p.kappa_ext_or_default();
    check(kext > 0 && kext <= p.kappa, "kappa_ext", "must be in (0, kappa]");
    return bad;
}

void validate_or_throw(const PhysicalParams& p) {
    auto bad = validate(p);
    if (bad.empty()) return;
    std::ostringstream os;
    os << "invalid parameters:";
    for (const auto& b : bad) os << " " << b.field << " (" << b.reason << ");";
    throw SpecInvalid(os.str());
}

std::complex<double> steady_state_field(const PhysicalParams& p, double Delta) {
    const double eta = std::sqrt(p.P * p.kappa / p.omega_p);
    return eta / std::complex<double>(p.kappa, Delta);
}

double coupling_from_power(const PhysicalParams& p, double Delta) {
    return std::sqrt(2.0) * p.g_a * std::abs(steady_state_field(p, Delta));
}

DerivedParams derive(const PhysicalParams& p) {
    DerivedParams d;
    d.Delta = p.Delta_a + p.g_a * p.N;
    d.c_s = steady_state_field(p, d.Delta);
    d.G = std::sqrt(2.0) * p.g_a * std::abs(d.c_s);
    d.v = p.g_a * std::norm(d.c_s);
    d.interaction_shift = p.U * (1.0 - p.epsilon);
    d.gamma_ = p.gamma;
    d.alpha_tilde_ = p.alpha_tilde;
    return d;
}

} // namespace socbec

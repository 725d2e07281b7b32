#include "socbec/sweep.hpp"

#include "socbec/drift.hpp"
#include "socbec/parallel.hpp"
#include "socbec/spectra.hpp"
#include "socbec/topology.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace socbec {

namespace {
constexpr const char* version_string = "socbec 1.0.0";
const double qnan = std::numeric_limits<double>::quiet_NaN();
} // namespace

const char* axis_label(AxisName a) {
    switch (a) {
        case AxisName::k: return "k";
        case AxisName::omega: return "omega";
        case AxisName::P: return "P";
        case AxisName::delta: return "delta";
        case AxisName::Omega_z: return "Omega_z";
        case AxisName::epsilon: return "epsilon";
        case AxisName::alpha_tilde: return "alpha_tilde";
        case AxisName::gamma: return "gamma";
        case AxisName::kappa: return "kappa";
    }
    return "?";
}

std::optional<AxisName> axis_from_string(const std::string& s) {
    for (AxisName a : {AxisName::k, AxisName::omega, AxisName::P, AxisName::delta,
                       AxisName::Omega_z, AxisName::epsilon, AxisName::alpha_tilde,
                       AxisName::gamma, AxisName::kappa})
        if (s == axis_label(a)) return a;
    return std::nullopt;
}

std::vector<double> make_grid(double min, double max, std::size_t count) {
    if (count < 1) throw BadGrid("make_grid: count must be >= 1");
    if (min > max) throw BadGrid("make_grid: min > max");
    std::vector<double> g(count);
    if (count == 1) {
        g[0] = min;
        return g;
    }
    const double step = (max - min) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = min + step * static_cast<double>(i);
    g.back() = max;
    return g;
}

std::vector<double> make_log_grid(double min, double max, std::size_t count) {
    if (!(min > 0)) throw BadGrid("make_log_grid: min must be > 0");
    auto g = make_grid(std::log(min), std::log(max), count);
    for (double& v : g) v = std::exp(v);
    if (!g.empty()) {
        g.front() = min;
        g.back() = max;
    }
    return g;
}

std::vector<double> axis_grid(const Axis& a) {
    return a.log_spaced ? make_log_grid(a.min, a.max, a.count)
                        : make_grid(a.min, a.max, a.count);
}

namespace {

struct PointCoords {
    PhysicalParams params;
    double k = 0.0;
    double omega = 0.0;
};

PointCoords apply_axes(const SweepSpec& spec, double v1, double v2) {
    PointCoords c;
    c.params = spec.base;
    auto set = [&](AxisName name, double v) {
        switch (name) {
            case AxisName::k: c.k = v; break;
            case AxisName::omega: c.omega = v; break;
            case AxisName::P: c.params.P = v; break;
            case AxisName::delta: c.params.delta = v; break;
            case AxisName::Omega_z: c.params.Omega_z = v; break;
            case AxisName::epsilon: c.params.epsilon = v; break;
            case AxisName::alpha_tilde: c.params.alpha_tilde = v; break;
            case AxisName::gamma: c.params.gamma = v; break;
            case AxisName::kappa: c.params.kappa = v; break;
        }
    };
    set(spec.axis1.name, v1);
    set(spec.axis2.name, v2);
    return c;
}

void evaluate_point(const SweepSpec& spec, SweepRecord& rec) {
    const PointCoords c = apply_axes(spec, rec.v1, rec.v2);
    validate_or_throw(c.params);
    const DerivedParams d = derive(c.params);

    const bool want_psd = spec.outputs.count(SweepOutput::psd) ||
                          spec.outputs.count(SweepOutput::chern) ||
                          spec.outputs.count(SweepOutput::berry);
    if (want_psd) {
        const AtomicPsd at = atomic_psd(c.omega, d, c.params, c.k);
        const OutputPsd so = output_psd(c.omega, d, c.params, c.k);
        rec.S_up = at.S_up;
        rec.S_dn = at.S_dn;
        rec.S_out = so.S_out;
        rec.flag = so.flag != PointFlag::ok ? so.flag : at.flag;
        if (spec.outputs.count(SweepOutput::chern) || spec.outputs.count(SweepOutput::berry)) {
            if (rec.flag == PointFlag::ok && c.omega == 0.0 && c.params.T == 0.0)
                rec.flag = PointFlag::zero_frequency;
            if (rec.flag == PointFlag::ok) {
                const double xi = calibration_factor(c.omega, c.params, d.Delta);
                if (std::isnan(xi)) {
                    rec.flag = PointFlag::singular_r;
                } else {
                    rec.C = 2.0 * M_PI * rec.S_out / (xi * thermal_energy(c.omega, c.params.T));
                    rec.Omega_B = 2.0 * M_PI * rec.C;
                }
            }
            if (rec.flag != PointFlag::ok) rec.C = rec.Omega_B = qnan;
        }
        if (rec.flag != PointFlag::ok) {
            rec.S_up = rec.S_dn = rec.S_out = qnan;
        }
    }

    if (spec.outputs.count(SweepOutput::eigen) || spec.outputs.count(SweepOutput::stability)) {
        const DriftMatrix K = build_drift_matrix(d, c.params, c.k);
        if (spec.outputs.count(SweepOutput::eigen)) {
            rec.eigenvalues = eigen_spectrum(K);
            rec.has_eigen = true;
        }
        if (spec.outputs.count(SweepOutput::stability)) {
            try {
                const StabilityReport sr = stability_report(K);
                rec.rh_stable = sr.rh_stable ? 1 : 0;
                rec.eigen_stable = sr.eigen_stable ? 1 : 0;
                rec.max_real_part = sr.max_real_part;
            } catch (const MarginalSpectrum&) {
                rec.rh_stable = -1;
                rec.eigen_stable = -1;
                rec.failure = "MARGINAL_SPECTRUM";
            }
        }
    }
}

} // namespace

ResultSet run_sweep(const SweepSpec& spec, int workers) {
    if (spec.axis1.name == spec.axis2.name)
        throw SpecInvalid("run_sweep: axis names must be distinct");
    if (spec.outputs.empty())
        throw SpecInvalid("run_sweep: no outputs requested");
    if (workers < 1)
        throw SpecInvalid("run_sweep: workers must be >= 1");

    ResultSet rs;
    rs.spec = spec;
    rs.grid1 = axis_grid(spec.axis1);
    rs.grid2 = axis_grid(spec.axis2);
    rs.thread_count = workers;
    rs.code_version = version_string;
    {
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        rs.timestamp = std::to_string(
            std::chrono::duration_cast<std::chrono::seconds>(now).count());
    }

    const std::size_t n1 = rs.grid1.size(), n2 = rs.grid2.size();
    rs.records.resize(n1 * n2);
    parallel_for(n1 * n2, workers, [&](std::size_t idx) {
        SweepRecord& rec = rs.records[idx];
        rec.v1 = rs.grid1[idx / n2];
        rec.v2 = rs.grid2[idx % n2];
        try {
            evaluate_point(spec, rec);
        } catch (const std::exception& e) {
            rec.failure = e.what();
            rec.S_up = rec.S_dn = rec.S_out = rec.C = rec.Omega_B = qnan;
        }
    });
    return rs;
}

} // namespace socbec

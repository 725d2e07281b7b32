// Command-line front end: one subcommand per deliverable (stability
// certificates, eigenvalue scans, PSD / Chern / Berry maps, exceptional-point
// scans, power sweeps).

#include "socbec/config.hpp"
#include "socbec/drift.hpp"
#include "socbec/io.hpp"
#include "socbec/spectra.hpp"
#include "socbec/topology.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>

namespace {

using namespace socbec;

constexpr int exit_ok = 0;
constexpr int exit_config = 1;
constexpr int exit_unstable = 2;
constexpr int exit_numerical = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    int workers = 1;
    bool emit_plot = false;
    bool allow_unstable = false;
    bool exact = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_unstable) {
    cmd->add_option("--config", o.config_path, "configuration file")->required();
    cmd->add_option("--out", o.out_path, "output file path");
    cmd->add_option("--format", o.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_flag("--emit-plot", o.emit_plot, "write a plot script next to the output");
    cmd->add_flag("--exact", o.exact, "JSON numbers as 17-digit decimal strings");
    if (with_unstable)
        cmd->add_flag("--allow-unstable", o.allow_unstable,
                      "run even when the stability certificate fails");
}

std::string default_out(const CommonOpts& o, const std::string& stem) {
    if (!o.out_path.empty()) return o.out_path;
    return stem + (o.format == "json" ? ".json" : ".csv");
}

void emit_plot_if_asked(const CommonOpts& o, PlotKind kind, const std::string& out,
                        std::size_t records) {
    if (!o.emit_plot || o.format != "csv") return;
    const std::string rel = std::filesystem::path(out).filename().string();
    write_text_file(out + ".py", plot_script(kind, rel, records));
}

// Every grid momentum must carry a positive Routh-Hurwitz certificate.
bool certify_grid(const JobConfig& cfg, const DerivedParams& d) {
    for (double k : k_grid_of(cfg)) {
        const DriftMatrix K = build_drift_matrix(d, cfg.params, k);
        try {
            if (!stability_report(K, cfg.stability_tol).rh_stable) return false;
        } catch (const MarginalSpectrum&) {
            return false;
        }
    }
    return true;
}

std::pair<double, double> resolve_gap_window(const JobConfig& cfg, const SpectralMap& map) {
    const double mid = cfg.gap_center ? *cfg.gap_center : estimate_gap_midpoint(map);
    return default_gap_window(mid, cfg.params.Omega_z, cfg.gap_factor);
}

int run_stability(const CommonOpts& o) {
    const JobConfig cfg = load_config_file(o.config_path);
    const DerivedParams d = derive(cfg.params);
    const auto kg = k_grid_of(cfg);
    std::vector<StabilityReport> reports(kg.size());
    std::vector<std::string> failures(kg.size());
    for (std::size_t i = 0; i < kg.size(); ++i) {
        const DriftMatrix K = build_drift_matrix(d, cfg.params, kg[i]);
        try {
            reports[i] = stability_report(K, cfg.stability_tol);
        } catch (const MarginalSpectrum&) {
            failures[i] = "MARGINAL_SPECTRUM";
        }
    }
    const std::string out = default_out(o, "stability");
    write_text_file(out, csv_of_stability(kg, reports, failures));
    std::cout << out << "\n";
    return exit_ok;
}

int run_eigen(const CommonOpts& o) {
    const JobConfig cfg = load_config_file(o.config_path);
    const DerivedParams d = derive(cfg.params);
    const auto kg = k_grid_of(cfg);
    std::vector<Spectrum> spectra(kg.size());
    for (std::size_t i = 0; i < kg.size(); ++i)
        spectra[i] = eigen_spectrum(build_drift_matrix(d, cfg.params, kg[i]));
    const std::string out = default_out(o, "eigen");
    write_text_file(out, csv_of_eigen(kg, spectra));
    emit_plot_if_asked(o, PlotKind::eigen_panels, out, kg.size());
    std::cout << out << "\n";
    return exit_ok;
}

int run_map(const CommonOpts& o, bool with_marker) {
    const JobConfig cfg = load_config_file(o.config_path);
    const DerivedParams d = derive(cfg.params);
    if (!o.allow_unstable && !certify_grid(cfg, d)) {
        std::cerr << "stability certificate failed on the momentum grid "
                     "(rerun with --allow-unstable to override)\n";
        return exit_unstable;
    }
    const SpectralMap map = psd_map(cfg.params, k_grid_of(cfg), omega_grid_of(cfg),
                                    o.workers, cfg.x_floor_rel);
    std::string out;
    if (!with_marker) {
        out = default_out(o, "psd");
        write_text_file(out, o.format == "json" ? json_of_map(map, o.exact)
                                                : csv_of_map(map));
        emit_plot_if_asked(o, PlotKind::heatmap, out, map.values.size());
    } else {
        const ChernMarkerMap cm = chern_marker_from_psd(map, cfg.params);
        const BerryMap berry = berry_from_marker(cm);
        out = default_out(o, "chern");
        write_text_file(out, o.format == "json" ? json_of_marker(map, cm, berry, o.exact)
                                                : csv_of_marker(map, cm, berry));
        emit_plot_if_asked(o, PlotKind::marker_heatmap, out, map.values.size());
    }
    std::cout << out << "\n";
    return exit_ok;
}

int run_ep_scan(const CommonOpts& o) {
    const JobConfig cfg = load_config_file(o.config_path);
    const DerivedParams d = derive(cfg.params);
    const auto candidates =
        scan_exceptional_points(d, cfg.params, k_grid_of(cfg), cfg.ep_tolerance);
    const std::string out = default_out(o, "ep_scan");
    write_text_file(out, csv_of_ep(candidates));
    if (!candidates.empty())
        emit_plot_if_asked(o, PlotKind::ep_markers, out, candidates.size());
    std::cout << out << "\n";
    return exit_ok;
}

int run_power_sweep(const CommonOpts& o) {
    const JobConfig cfg = load_config_file(o.config_path);
    if (cfg.k_points.empty())
        throw ParseError(0, "missing required key 'k_points' for power-sweep");
    // window from the default-power reference map
    const SpectralMap ref = psd_map(cfg.params, k_grid_of(cfg), omega_grid_of(cfg),
                                    o.workers, cfg.x_floor_rel);
    const auto [lo, hi] = resolve_gap_window(cfg, ref);
    const auto curves = power_activation_curve(cfg.params, cfg.k_points,
                                               power_grid_of(cfg), omega_grid_of(cfg),
                                               lo, hi);
    const std::string out = default_out(o, "power_sweep");
    write_text_file(out, csv_of_power(curves));
    emit_plot_if_asked(o, PlotKind::power_curves, out,
                       curves.empty() ? 0 : curves.size() * curves.front().points.size());
    std::cout << out << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"driven-cavity SOC condensate spectra: stability, PSD maps, "
                 "topological markers, exceptional points"};
    app.require_subcommand(1);

    CommonOpts o;
    auto* stability = app.add_subcommand("stability", "Routh-Hurwitz certificates over k");
    add_common(stability, o, false);
    auto* eigen = app.add_subcommand("eigen", "complex spectrum over k");
    add_common(eigen, o, false);
    auto* psd = app.add_subcommand("psd", "output power spectral density map");
    add_common(psd, o, true);
    auto* chern = app.add_subcommand("chern", "PSD map with Chern marker columns");
    add_common(chern, o, true);
    auto* berry = app.add_subcommand("berry", "PSD map with marker-derived Berry columns");
    add_common(berry, o, true);
    auto* ep = app.add_subcommand("ep-scan", "exceptional-point scan over k");
    add_common(ep, o, false);
    auto* power = app.add_subcommand("power-sweep", "marker peak vs drive power");
    add_common(power, o, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? exit_config : exit_ok;
    }

    try {
        if (stability->parsed()) return run_stability(o);
        if (eigen->parsed()) return run_eigen(o);
        if (psd->parsed()) return run_map(o, false);
        if (chern->parsed() || berry->parsed()) return run_map(o, true);
        if (ep->parsed()) return run_ep_scan(o);
        if (power->parsed()) return run_power_sweep(o);
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const SpecInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const EigenFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const SingularResolvent& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_config;
}

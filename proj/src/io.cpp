#include "socbec/io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace socbec {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

std::string cell(double v) { return std::isfinite(v) ? num(v) : std::string(); }

std::string num17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string csv_of_map(const SpectralMap& map) {
    std::ostringstream os;
    os << "k_index,k,omega_index,omega,S_up,S_dn,S_out,flag\n";
    const std::size_t nw = map.omega_grid.size();
    for (std::size_t ik = 0; ik < map.k_grid.size(); ++ik) {
        for (std::size_t iw = 0; iw < nw; ++iw) {
            const SpectralPoint& pt = map.at(ik, iw);
            os << ik << ',' << num(pt.k) << ',' << iw << ',' << num(pt.omega) << ','
               << cell(pt.S_up) << ',' << cell(pt.S_dn) << ',' << cell(pt.S_out) << ','
               << flag_label(pt.flag) << '\n';
        }
    }
    return os.str();
}

std::string csv_of_marker(const SpectralMap& map, const ChernMarkerMap& cm,
                          const BerryMap& berry) {
    std::ostringstream os;
    os << "k_index,k,omega_index,omega,S_up,S_dn,S_out,flag,C,Omega_B\n";
    const std::size_t nw = map.omega_grid.size();
    for (std::size_t ik = 0; ik < map.k_grid.size(); ++ik) {
        for (std::size_t iw = 0; iw < nw; ++iw) {
            const std::size_t idx = ik * nw + iw;
            const SpectralPoint& pt = map.values[idx];
            const PointFlag fl = cm.flags[idx] != PointFlag::ok ? cm.flags[idx] : pt.flag;
            os << ik << ',' << num(pt.k) << ',' << iw << ',' << num(pt.omega) << ','
               << cell(pt.S_up) << ',' << cell(pt.S_dn) << ',' << cell(pt.S_out) << ','
               << flag_label(fl) << ','
               << cell(cm.C_values[idx]) << ',' << cell(berry.values[idx]) << '\n';
        }
    }
    return os.str();
}

std::string csv_of_stability(const std::vector<double>& k_grid,
                             const std::vector<StabilityReport>& reports,
                             const std::vector<std::string>& failures) {
    std::ostringstream os;
    os << "k_index,k,a1,a2,a3,a4,a5,a6,D1,D2,D3,D4,D5,D6,"
          "rh_stable,eigen_stable,max_real_part,margin,flag\n";
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        os << i << ',' << num(k_grid[i]) << ',';
        if (failures[i].empty()) {
            const StabilityReport& r = reports[i];
            for (double a : r.coefficients.a) os << num(a) << ',';
            for (double d : r.hurwitz_minors) os << num(d) << ',';
            os << (r.rh_stable ? 1 : 0) << ',' << (r.eigen_stable ? 1 : 0) << ','
               << num(r.max_real_part) << ',' << num(r.margin) << ",\n";
        } else {
            for (int c = 0; c < 12; ++c) os << ',';
            os << ",,,," << failures[i] << '\n';
        }
    }
    return os.str();
}

std::string csv_of_eigen(const std::vector<double>& k_grid,
                         const std::vector<Spectrum>& spectra) {
    std::ostringstream os;
    os << "k_index,k";
    for (int i = 0; i < 6; ++i) os << ",re_" << i << ",im_" << i;
    os << '\n';
    for (std::size_t ik = 0; ik < k_grid.size(); ++ik) {
        os << ik << ',' << num(k_grid[ik]);
        for (const auto& l : spectra[ik]) os << ',' << num(l.real()) << ',' << num(l.imag());
        os << '\n';
    }
    return os.str();
}

std::string csv_of_ep(const std::vector<EpCandidate>& candidates) {
    std::ostringstream os;
    os << "index,k_at,re_lambda_1,im_lambda_1,re_lambda_2,im_lambda_2,residual,"
          "re_gap_before,re_gap_after,im_gap_before,im_gap_after\n";
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const EpCandidate& c = candidates[i];
        os << i << ',' << num(c.k_at) << ','
           << num(c.lambda_pair[0].real()) << ',' << num(c.lambda_pair[0].imag()) << ','
           << num(c.lambda_pair[1].real()) << ',' << num(c.lambda_pair[1].imag()) << ','
           << num(c.residual) << ','
           << num(c.re_gap_before) << ',' << num(c.re_gap_after) << ','
           << num(c.im_gap_before) << ',' << num(c.im_gap_after) << '\n';
    }
    return os.str();
}

std::string csv_of_power(const std::vector<PowerCurve>& curves) {
    std::ostringstream os;
    os << "k_index,k,P_index,P,C_at_peak,flag\n";
    for (std::size_t ik = 0; ik < curves.size(); ++ik) {
        for (std::size_t ip = 0; ip < curves[ik].points.size(); ++ip) {
            const PowerCurvePoint& pt = curves[ik].points[ip];
            os << ik << ',' << num(curves[ik].k) << ',' << ip << ',' << num(pt.P) << ','
               << cell(pt.C_at_peak) << ',' << flag_label(pt.flag) << '\n';
        }
    }
    return os.str();
}

std::string csv_of_result_set(const ResultSet& rs) {
    std::ostringstream os;
    os << axis_label(rs.spec.axis1.name) << "_index," << axis_label(rs.spec.axis1.name)
       << ',' << axis_label(rs.spec.axis2.name) << "_index," << axis_label(rs.spec.axis2.name)
       << ",S_up,S_dn,S_out,C,Omega_B,max_real_part,rh_stable,eigen_stable,flag\n";
    const std::size_t n2 = rs.grid2.size();
    for (std::size_t idx = 0; idx < rs.records.size(); ++idx) {
        const SweepRecord& r = rs.records[idx];
        const bool failed = !r.failure.empty();
        os << idx / n2 << ',' << num(r.v1) << ',' << idx % n2 << ',' << num(r.v2) << ','
           << cell(r.S_up) << ',' << cell(r.S_dn) << ',' << cell(r.S_out) << ','
           << cell(r.C) << ',' << cell(r.Omega_B) << ','
           << (r.rh_stable >= 0 ? num(r.max_real_part) : std::string()) << ','
           << (r.rh_stable >= 0 ? std::to_string(r.rh_stable) : std::string()) << ','
           << (r.eigen_stable >= 0 ? std::to_string(r.eigen_stable) : std::string()) << ','
           << (failed ? r.failure : flag_label(r.flag)) << '\n';
    }
    return os.str();
}

namespace {

nlohmann::json json_number(double v, bool exact) {
    if (!std::isfinite(v)) return nullptr;
    if (exact) return std::string(num17(v));
    return v;
}

nlohmann::json meta_of(const PhysicalParams& p, const DerivedParams& d, bool exact) {
    nlohmann::json meta;
    meta["kappa"] = json_number(p.kappa, exact);
    meta["gamma"] = json_number(p.gamma, exact);
    meta["Delta_a"] = json_number(p.Delta_a, exact);
    meta["N"] = json_number(p.N, exact);
    meta["g_a"] = json_number(p.g_a, exact);
    meta["U"] = json_number(p.U, exact);
    meta["epsilon"] = json_number(p.epsilon, exact);
    meta["Omega_z"] = json_number(p.Omega_z, exact);
    meta["delta"] = json_number(p.delta, exact);
    meta["alpha_tilde"] = json_number(p.alpha_tilde, exact);
    meta["P"] = json_number(p.P, exact);
    meta["omega_p"] = json_number(p.omega_p, exact);
    meta["T"] = json_number(p.T, exact);
    meta["eta_det"] = json_number(p.eta_det, exact);
    meta["kappa_ext"] = json_number(p.kappa_ext_or_default(), exact);
    meta["Delta"] = json_number(d.Delta, exact);
    meta["G"] = json_number(d.G, exact);
    meta["v"] = json_number(d.v, exact);
    return meta;
}

nlohmann::json grid_json(const std::vector<double>& g, bool exact) {
    nlohmann::json a = nlohmann::json::array();
    for (double v : g) a.push_back(json_number(v, exact));
    return a;
}

} // namespace

std::string json_of_map(const SpectralMap& map, bool exact) {
    nlohmann::json j;
    j["meta"] = meta_of(map.meta, map.derived, exact);
    j["grids"]["k"] = grid_json(map.k_grid, exact);
    j["grids"]["omega"] = grid_json(map.omega_grid, exact);
    nlohmann::json su = nlohmann::json::array(), sd = nlohmann::json::array(),
                   so = nlohmann::json::array(), fl = nlohmann::json::array();
    for (const auto& pt : map.values) {
        su.push_back(json_number(pt.S_up, exact));
        sd.push_back(json_number(pt.S_dn, exact));
        so.push_back(json_number(pt.S_out, exact));
        fl.push_back(flag_label(pt.flag));
    }
    j["arrays"]["S_up"] = std::move(su);
    j["arrays"]["S_dn"] = std::move(sd);
    j["arrays"]["S_out"] = std::move(so);
    j["arrays"]["flag"] = std::move(fl);
    return j.dump(2) + "\n";
}

std::string json_of_marker(const SpectralMap& map, const ChernMarkerMap& cm,
                           const BerryMap& berry, bool exact) {
    nlohmann::json j = nlohmann::json::parse(json_of_map(map, exact));
    nlohmann::json c = nlohmann::json::array(), b = nlohmann::json::array();
    for (std::size_t i = 0; i < cm.C_values.size(); ++i) {
        c.push_back(json_number(cm.C_values[i], exact));
        b.push_back(json_number(berry.values[i], exact));
    }
    j["arrays"]["C"] = std::move(c);
    j["arrays"]["Omega_B"] = std::move(b);
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << content;
    if (!out) throw Error("write failed: " + path);
}

std::string plot_script(PlotKind kind, const std::string& csv_relpath,
                        std::size_t record_count) {
    if (record_count == 0) throw SpecInvalid("plot_script: empty result");
    std::ostringstream os;
    os << "#!/usr/bin/env python3\n"
          "import csv\n"
          "import matplotlib\n"
          "matplotlib.use(\"Agg\")\n"
          "import matplotlib.pyplot as plt\n"
          "import numpy as np\n"
          "\n"
          "rows = list(csv.DictReader(open(\"" << csv_relpath << "\")))\n";
    switch (kind) {
        case PlotKind::heatmap:
        case PlotKind::marker_heatmap: {
            const char* field = kind == PlotKind::heatmap ? "S_out" : "C";
            os << "ks = sorted({float(r[\"k\"]) for r in rows})\n"
                  "ws = sorted({float(r[\"omega\"]) for r in rows})\n"
                  "img = np.full((len(ks), len(ws)), np.nan)\n"
                  "for r in rows:\n"
                  "    if r[\"" << field << "\"]:\n"
                  "        img[int(r[\"k_index\"]), int(r[\"omega_index\"])] = float(r[\"" << field << "\"])\n"
                  "fig, ax = plt.subplots(figsize=(7, 5))\n"
                  "mesh = ax.pcolormesh(ws, ks, img, shading=\"nearest\")\n"
                  "fig.colorbar(mesh, ax=ax, label=\"" << field << "\")\n"
                  "ax.set_xlabel(\"omega (\\u03a9 units)\")\n"
                  "ax.set_ylabel(\"k (k_x units)\")\n"
                  "fig.savefig(\"" << csv_relpath << ".png\", dpi=160)\n";
            break;
        }
        case PlotKind::eigen_panels:
            os << "k = np.array([float(r[\"k\"]) for r in rows])\n"
                  "fig, (axr, axi) = plt.subplots(2, 1, sharex=True, figsize=(7, 7))\n"
                  "for i in range(6):\n"
                  "    axr.plot(k, [float(r[\"re_%d\" % i]) for r in rows], \".\", ms=2)\n"
                  "    axi.plot(k, [float(r[\"im_%d\" % i]) for r in rows], \".\", ms=2)\n"
                  "axr.set_ylabel(\"Re lambda (\\u03a9 units)\")\n"
                  "axi.set_ylabel(\"Im lambda (\\u03a9 units)\")\n"
                  "axi.set_xlabel(\"k (k_x units)\")\n"
                  "fig.savefig(\"" << csv_relpath << ".png\", dpi=160)\n";
            break;
        case PlotKind::power_curves:
            os << "curves = {}\n"
                  "for r in rows:\n"
                  "    curves.setdefault(r[\"k\"], []).append((float(r[\"P\"]), "
                  "float(r[\"C_at_peak\"]) if r[\"C_at_peak\"] else np.nan))\n"
                  "fig, ax = plt.subplots(figsize=(7, 5))\n"
                  "for kval, pts in sorted(curves.items(), key=lambda kv: float(kv[0])):\n"
                  "    pts.sort()\n"
                  "    ax.plot([p for p, _ in pts], [c for _, c in pts], label=\"k=%s\" % kval)\n"
                  "ax.set_xscale(\"log\")\n"
                  "ax.set_xlabel(\"P (pump units)\")\n"
                  "ax.set_ylabel(\"C at peak\")\n"
                  "ax.legend()\n"
                  "fig.savefig(\"" << csv_relpath << ".png\", dpi=160)\n";
            break;
        case PlotKind::ep_markers:
            os << "k = [float(r[\"k_at\"]) for r in rows]\n"
                  "res = [float(r[\"residual\"]) for r in rows]\n"
                  "fig, ax = plt.subplots(figsize=(7, 4))\n"
                  "ax.stem(k, res)\n"
                  "ax.set_xlabel(\"k (k_x units)\")\n"
                  "ax.set_ylabel(\"coalescence residual (\\u03a9 units)\")\n"
                  "fig.savefig(\"" << csv_relpath << ".png\", dpi=160)\n";
            break;
    }
    return os.str();
}

} // namespace socbec

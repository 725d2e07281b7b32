#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "socbec/topology.hpp"

#include <cmath>
#include <random>

using namespace socbec;

namespace {

Eigen::Matrix2cd pauli_model(double u, double v, double m) {
    // sin(u) sx + sin(v) sy + (m - cos u - cos v) sz
    Eigen::Matrix2cd H;
    const double dx = std::sin(u), dy = std::sin(v), dz = m - std::cos(u) - std::cos(v);
    H << dz, cplx(dx, -dy), cplx(dx, dy), -dz;
    return H;
}

std::vector<double> periodic_grid(std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    return g;
}

PhysicalParams plain_cavity() {
    PhysicalParams p;
    p.kappa = 1.0;
    p.gamma = 0.5;
    p.Delta_a = 0.4;
    p.g_a = 0.0;
    p.N = 1.0;
    p.P = 0.0;
    p.kappa_ext = 1.0;
    return p;
}

} // namespace

TEST_CASE("thermal energy") {
    CHECK(thermal_energy(3.0, 0.0) == doctest::Approx(1.5));
    CHECK(thermal_energy(-3.0, 0.0) == doctest::Approx(1.5));
    CHECK(thermal_energy(0.01, 100.0) == doctest::Approx(100.0).epsilon(1e-4));
    CHECK(thermal_energy(2.0, 1.0) == doctest::Approx(1.3130352854993312).epsilon(1e-12));
    CHECK_THROWS_AS(thermal_energy(0.0, 0.0), ZeroFrequency);
    CHECK(thermal_energy(0.0, 0.7) == doctest::Approx(0.7));
}

TEST_CASE("calibration factor") {
    auto p = plain_cavity();
    const double Delta = 0.4;

    SUBCASE("full collection") {
        const cplx R = cavity_response(1.0, p.kappa, Delta);
        CHECK(calibration_factor(1.0, p, Delta) ==
              doctest::Approx(2.0 * p.kappa / std::norm(R)).epsilon(1e-12));
    }
    SUBCASE("linear in the detection efficiency") {
        const double full = calibration_factor(1.0, p, Delta);
        p.eta_det = 0.5;
        CHECK(calibration_factor(1.0, p, Delta) == doctest::Approx(0.5 * full));
    }
    SUBCASE("substitution kappa = 1, Delta = 0, omega = 1") {
        auto ps = plain_cavity();
        ps.Delta_a = 0.0;
        CHECK(calibration_factor(1.0, ps, 0.0) ==
              doctest::Approx(2.0 * 1.0 * 1.0 / 4.0).epsilon(1e-12));
    }
}

TEST_CASE("marker round trip") {
    // synthesize S_out = Xi * E_T * C0 / (2 pi) and recover C0
    auto p = plain_cavity();
    auto d = derive(p);
    std::vector<double> kg = {-0.5, 0.0, 0.5};
    std::vector<double> wg;
    for (int i = 0; i < 41; ++i) wg.push_back(-2.0 + i * 0.1);

    for (double C0 : {-2.0, 0.0, 0.5, 1.0}) {
        SpectralMap map;
        map.k_grid = kg;
        map.omega_grid = wg;
        map.meta = p;
        map.derived = d;
        map.values.resize(kg.size() * wg.size());
        for (std::size_t ik = 0; ik < kg.size(); ++ik) {
            for (std::size_t iw = 0; iw < wg.size(); ++iw) {
                auto& pt = map.values[ik * wg.size() + iw];
                pt.k = kg[ik];
                pt.omega = wg[iw];
                if (pt.omega == 0.0) {
                    pt.S_out = 0.0;
                    continue;
                }
                pt.S_out = calibration_factor(pt.omega, p, d.Delta) *
                           thermal_energy(pt.omega, p.T) * C0 / (2.0 * M_PI);
            }
        }
        const auto cm = chern_marker_from_psd(map, p);
        for (std::size_t i = 0; i < cm.C_values.size(); ++i) {
            if (cm.flags[i] == PointFlag::zero_frequency) continue;
            REQUIRE(cm.flags[i] == PointFlag::ok);
            CHECK(cm.C_values[i] == doctest::Approx(C0).epsilon(1e-12));
        }
    }
}

TEST_CASE("berry from marker is a 2 pi scaling") {
    ChernMarkerMap cm;
    cm.k_grid = {0.0, 1.0};
    cm.omega_grid = {0.5};
    cm.C_values = {1.0, -0.25};
    cm.flags = {PointFlag::ok, PointFlag::ok};
    const auto b = berry_from_marker(cm);
    CHECK(b.values[0] == doctest::Approx(2.0 * M_PI));
    CHECK(b.values[1] == doctest::Approx(-0.5 * M_PI));
    CHECK(b.source == BerryMap::Source::from_marker);

    // linearity
    for (auto& c : cm.C_values) c *= 3.0;
    const auto b3 = berry_from_marker(cm);
    CHECK(b3.values[0] == doctest::Approx(3.0 * b.values[0]));
    CHECK(b3.values[1] == doctest::Approx(3.0 * b.values[1]));
}

TEST_CASE("plaquette berry") {
    SUBCASE("constant hamiltonian carries no flux") {
        TwoBandHamiltonian h = [](double, double) {
            Eigen::Matrix2cd m;
            m << 1.0, 0.0, 0.0, -1.0;
            return m;
        };
        const auto b = plaquette_berry(h, periodic_grid(12), periodic_grid(12), Band::lower);
        CHECK(std::abs(b.total_flux) < 1e-12);
        for (double v : b.values) CHECK(std::abs(v) < 1e-12);
    }
    SUBCASE("two-band model on a periodic 40x40 grid") {
        for (const auto& [m, expect] : std::vector<std::pair<double, int>>{{1.0, -1}, {3.0, 0}}) {
            const double mm = m;
            TwoBandHamiltonian h = [mm](double u, double v) { return pauli_model(u, v, mm); };
            const auto b = plaquette_berry(h, periodic_grid(40), periodic_grid(40), Band::lower);
            const double chern = b.total_flux / (2.0 * M_PI);
            CHECK(std::abs(chern - expect) < 1e-6);

            // dense-grid oracle
            const auto dense = plaquette_berry(h, periodic_grid(400), periodic_grid(400), Band::lower);
            CHECK(std::abs(dense.total_flux / (2.0 * M_PI) - expect) < 1e-6);
        }
    }
    SUBCASE("upper band carries the opposite flux") {
        TwoBandHamiltonian h = [](double u, double v) { return pauli_model(u, v, 1.0); };
        const auto lo = plaquette_berry(h, periodic_grid(40), periodic_grid(40), Band::lower);
        const auto hi = plaquette_berry(h, periodic_grid(40), periodic_grid(40), Band::upper);
        CHECK(std::abs(lo.total_flux + hi.total_flux) < 1e-9);
    }
    SUBCASE("degenerate band is reported") {
        TwoBandHamiltonian h = [](double u, double v) { return pauli_model(u, v, 2.0); };
        // gap closes at (0, pi) and (pi, 0) for m = 2
        CHECK_THROWS_AS(plaquette_berry(h, periodic_grid(16), periodic_grid(16), Band::lower),
                        BandDegeneracy);
    }
}

namespace {

// flat background plus a Gaussian ridge along omega = slope * k
SpectralMap ridge_fixture(double slope, double intensity) {
    SpectralMap map;
    for (int i = 0; i < 48; ++i) map.k_grid.push_back(-1.0 + i * (2.0 / 47));
    for (int i = 0; i < 200; ++i) map.omega_grid.push_back(-2.0 + i * (4.0 / 199));
    map.values.resize(map.k_grid.size() * map.omega_grid.size());
    for (std::size_t ik = 0; ik < map.k_grid.size(); ++ik) {
        for (std::size_t iw = 0; iw < map.omega_grid.size(); ++iw) {
            auto& pt = map.values[ik * map.omega_grid.size() + iw];
            pt.k = map.k_grid[ik];
            pt.omega = map.omega_grid[iw];
            const double dw = pt.omega - slope * pt.k;
            pt.S_out = 0.1 + intensity * std::exp(-dw * dw / (2 * 0.05 * 0.05));
        }
    }
    return map;
}

} // namespace

TEST_CASE("edge ridge detection") {
    SUBCASE("recovers the injected slope") {
        const auto map = ridge_fixture(0.7, 5.0);
        const auto tr = find_edge_ridge(map, -0.6, 0.6);
        CHECK(tr.spans_gap);
        // slope from the interior points
        double acc = 0;
        int n = 0;
        for (std::size_t i = 8; i + 8 < tr.points.size(); ++i) {
            if (std::abs(tr.points[i].omega_peak) < 0.5) {
                acc += tr.points[i].local_slope;
                ++n;
            }
        }
        REQUIRE(n > 0);
        CHECK(std::abs(acc / n - 0.7) < 0.05 * 0.7);
        // peak positions on the line within one grid cell
        const double cell = map.omega_grid[1] - map.omega_grid[0];
        for (const auto& pt : tr.points) {
            if (std::abs(0.7 * pt.k) < 0.55)
                CHECK(std::abs(pt.omega_peak - 0.7 * pt.k) <= cell + 1e-12);
        }
    }
    SUBCASE("flat map does not span") {
        auto map = ridge_fixture(0.7, 0.0);  // background only
        const auto tr = find_edge_ridge(map, -0.6, 0.6);
        CHECK_FALSE(tr.spans_gap);
    }
    SUBCASE("window outside the grid is rejected") {
        const auto map = ridge_fixture(0.7, 5.0);
        CHECK_THROWS_AS(find_edge_ridge(map, 5.0, 6.0), EmptyGapWindow);
    }
    SUBCASE("trace points stay inside the window") {
        const auto map = ridge_fixture(0.3, 2.0);
        const auto tr = find_edge_ridge(map, -0.4, 0.4);
        for (const auto& pt : tr.points) {
            CHECK(pt.omega_peak >= -0.4);
            CHECK(pt.omega_peak <= 0.4);
        }
    }
}

TEST_CASE("gap midpoint estimation and window") {
    // two symmetric band ridges at +-(1.0 + 0.3 k^2): midpoint of the
    // positive ridge band is (1.0 + 1.0 + 0.3) / 2
    SpectralMap map;
    for (int i = 0; i < 32; ++i) map.k_grid.push_back(-1.0 + i * (2.0 / 31));
    for (int i = 0; i < 256; ++i) map.omega_grid.push_back(-3.0 + i * (6.0 / 255));
    map.values.resize(map.k_grid.size() * map.omega_grid.size());
    for (std::size_t ik = 0; ik < map.k_grid.size(); ++ik)
        for (std::size_t iw = 0; iw < map.omega_grid.size(); ++iw) {
            auto& pt = map.values[ik * map.omega_grid.size() + iw];
            pt.k = map.k_grid[ik];
            pt.omega = map.omega_grid[iw];
            const double center = 1.0 + 0.3 * pt.k * pt.k;
            const double d1 = pt.omega - center, d2 = pt.omega + center;
            pt.S_out = std::exp(-d1 * d1 / 0.02) + std::exp(-d2 * d2 / 0.02);
        }
    const double mid = estimate_gap_midpoint(map);
    CHECK(mid == doctest::Approx(0.5 * (1.0 + 1.3)).epsilon(0.03));

    const auto [lo, hi] = default_gap_window(1.5, 3.0);
    CHECK(lo == doctest::Approx(1.5 - 1.2));
    CHECK(hi == doctest::Approx(1.5 + 1.2));
}

TEST_CASE("power activation curve basics") {
    auto p = plain_cavity();
    std::vector<double> wg;
    for (int i = 0; i < 64; ++i) wg.push_back(-2.0 + i * (4.0 / 63));

    const auto curves = power_activation_curve(p, {0.0, 0.4}, {0.0, 1.0, 2.0}, wg, 0.3, 1.5);
    REQUIRE(curves.size() == 2);
    REQUIRE(curves[0].points.size() == 3);
    // P = 0 baseline is k-independent for the decoupled cavity
    CHECK(curves[0].points[0].C_at_peak ==
          doctest::Approx(curves[1].points[0].C_at_peak).epsilon(1e-12));
    // g_a = 0 keeps every power at the baseline
    for (const auto& c : curves)
        for (const auto& pt : c.points)
            CHECK(pt.C_at_peak == doctest::Approx(c.points[0].C_at_peak).epsilon(1e-12));

    CHECK_THROWS_AS(power_activation_curve(p, {0.0}, {2.0, 1.0}, wg, 0.3, 1.5), BadGrid);
}

TEST_CASE("integrated marker profile sums in-window cells") {
    ChernMarkerMap cm;
    cm.k_grid = {0.0, 1.0};
    cm.omega_grid = {0.0, 0.5, 1.0, 1.5};
    cm.C_values = {1, 2, 3, 4, 5, 6, 7, 8};
    cm.flags.assign(8, PointFlag::ok);
    const auto prof = integrated_marker_profile(cm, 0.4, 1.1);
    CHECK(prof[0] == doctest::Approx((2 + 3) * 0.5));
    CHECK(prof[1] == doctest::Approx((6 + 7) * 0.5));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "socbec/spectra.hpp"

#include <cmath>
#include <random>

using namespace socbec;

namespace {

// gain-regime working point used across the map tests
PhysicalParams gain_params() {
    PhysicalParams p;
    p.kappa = 0.92;
    p.gamma = 2.74;
    p.Delta_a = -0.71 - 180000.0;
    p.N = 180000.0;
    p.g_a = 1.0;
    p.U = 0.2;
    p.epsilon = 1.0;
    p.Omega_z = 3.0;
    p.delta = 0.0;
    p.alpha_tilde = 1.99;
    p.P = 198.46;
    p.omega_p = 1000.0;
    p.kappa_ext = 0.92;
    return p;
}

} // namespace

TEST_CASE("cavity response") {
    CHECK(cavity_response(0.0, 1.3, 0.7) == cplx(1.3 * 1.3 - 0.49, 0.0));
    CHECK(std::abs(cavity_response(1.0, 1.0, 0.0) - cplx(0.0, 2.0)) < 1e-15);
    // conjugate symmetry
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int t = 0; t < 50; ++t) {
        const double w = u(rng), kap = 0.1 + std::abs(u(rng)), Dl = u(rng);
        CHECK(std::abs(cavity_response(-w, kap, Dl) -
                       std::conj(cavity_response(w, kap, Dl))) < 1e-13);
    }
}

TEST_CASE("response kernels") {
    auto p = gain_params();
    auto d = derive(p);

    SUBCASE("omega = 0 kills every D-proportional term") {
        const auto kn = response_kernels(0.0, d, p, 0.4);
        CHECK(std::abs(kn.D) == 0.0);
        const cplx expect = 4.0 * d.M_of_k(0.4) * kn.Ksusc * kn.R;
        CHECK(std::abs(kn.Y_up - expect) < 1e-12 * std::abs(expect));
        CHECK(std::abs(kn.Y_dn - expect) < 1e-12 * std::abs(expect));
    }
    SUBCASE("drive off zeroes the noise channels") {
        auto p0 = p;
        p0.P = 0.0;
        auto d0 = derive(p0);
        const auto kn = response_kernels(1.3, d0, p0, 0.4);
        CHECK(std::abs(kn.C_coef) == 0.0);
        CHECK(std::abs(kn.F_up) == 0.0);
        CHECK(std::abs(kn.F_dn) == 0.0);
        CHECK(std::abs(kn.X - (kn.Y_up * kn.Y_dn + kn.Z_up * kn.Z_dn)) == 0.0);
    }
    SUBCASE("Omega_z sign flip swaps the up/down members") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> u(0.2, 2.5);
        for (int t = 0; t < 40; ++t) {
            auto pp = p;
            pp.Omega_z = u(rng);
            const double w = u(rng), k = u(rng) - 1.2;
            auto dp = derive(pp);
            const auto kn_pos = response_kernels(w, dp, pp, k);
            auto pm = pp;
            pm.Omega_z = -pp.Omega_z;
            const auto kn_neg = response_kernels(w, derive(pm), pm, k);
            CHECK(std::abs(kn_pos.Y_up - kn_neg.Y_dn) < 1e-9 * (1 + std::abs(kn_pos.Y_up)));
            CHECK(std::abs(kn_pos.Y_dn - kn_neg.Y_up) < 1e-9 * (1 + std::abs(kn_pos.Y_dn)));
            CHECK(std::abs(kn_pos.R - kn_neg.R) == 0.0);
            CHECK(std::abs(kn_pos.D - kn_neg.D) == 0.0);
            CHECK(kn_pos.Ksusc == kn_neg.Ksusc);
        }
    }
    SUBCASE("invariants: D = -w^2 R and X assembly") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (int t = 0; t < 100; ++t) {
            const double w = u(rng), k = u(rng);
            const auto kn = response_kernels(w, d, p, k);
            CHECK(std::abs(kn.D + w * w * kn.R) <= 1e-12 * std::abs(kn.D));
            CHECK(std::abs(kn.X - (kn.Y_up * kn.Y_dn + kn.Z_up * kn.Z_dn)) == 0.0);
        }
    }
}

TEST_CASE("atomic psd") {
    auto p = gain_params();

    SUBCASE("drive off means silent atoms") {
        auto p0 = p;
        p0.P = 0.0;
        auto d0 = derive(p0);
        const auto at = atomic_psd(1.1, d0, p0, 0.4);
        CHECK(at.S_up == 0.0);
        CHECK(at.S_dn == 0.0);
        CHECK(at.flag == PointFlag::ok);
    }
    SUBCASE("S_up at Omega_z equals S_dn at -Omega_z") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        auto d = derive(p);
        for (int t = 0; t < 100; ++t) {
            const double w = u(rng), k = u(rng);
            auto pm = p;
            pm.Omega_z = -p.Omega_z;
            const auto plus = atomic_psd(w, d, p, k);
            const auto minus = atomic_psd(w, derive(pm), pm, k);
            if (plus.flag != PointFlag::ok || minus.flag != PointFlag::ok) continue;
            CHECK(plus.S_up ==
                  doctest::Approx(minus.S_dn).epsilon(1e-10).scale(std::abs(plus.S_up) + 1));
            CHECK(plus.S_dn ==
                  doctest::Approx(minus.S_up).epsilon(1e-10).scale(std::abs(plus.S_dn) + 1));
        }
    }
    SUBCASE("finite across a desk grid") {
        auto d = derive(p);
        for (double k = -0.9; k <= 0.9; k += 0.15)
            for (double w = -5.5; w <= 5.5; w += 0.37) {
                const auto at = atomic_psd(w, d, p, k);
                if (at.flag == PointFlag::ok) {
                    CHECK(std::isfinite(at.S_up));
                    CHECK(std::isfinite(at.S_dn));
                }
            }
    }
}

TEST_CASE("output psd") {
    auto p = gain_params();

    SUBCASE("pure cavity form at zero drive") {
        auto p0 = p;
        p0.P = 0.0;
        auto d0 = derive(p0);
        const double w = 0.9;
        const auto so = output_psd(w, d0, p0, 0.2);
        const double Dl = d0.Delta;
        const cplx R = cavity_response(w, p0.kappa, Dl);
        const double expect = 2.0 * M_PI *
                              (p0.kappa * p0.kappa + w * w + Dl * Dl + 2.0 * p0.kappa * Dl) /
                              std::norm(R);
        CHECK(so.S_out == doctest::Approx(expect).epsilon(1e-12));
    }
    SUBCASE("large-frequency falloff") {
        auto p0 = p;
        p0.P = 0.0;
        auto d0 = derive(p0);
        const double w = 1e3;
        const auto so = output_psd(w, d0, p0, 0.0);
        CHECK(so.S_out < 2.0 * 2.0 * M_PI / (w * w));
        CHECK(so.S_out > 0.5 * 2.0 * M_PI / (w * w));
    }
    SUBCASE("kappa = |Delta| resonance at omega = 0 is flagged singular") {
        PhysicalParams ps;
        ps.kappa = 1.0;
        ps.gamma = 0.5;
        ps.Delta_a = 1.0;
        ps.g_a = 0.0;
        ps.N = 1.0;
        ps.P = 0.0;
        ps.kappa_ext = 1.0;
        auto ds = derive(ps);
        const auto so = output_psd(0.0, ds, ps, 0.0);
        CHECK(so.flag == PointFlag::singular_r);
        CHECK(std::isnan(so.S_out));
    }
}

TEST_CASE("output quadrature transfer") {
    SUBCASE("drive off removes the atomic coefficients") {
        auto p = gain_params();
        p.P = 0.0;
        auto d = derive(p);
        const auto t = output_quadrature_transfer(0.7, d, p, 0.1);
        CHECK(std::abs(t.q_atomic_coef) == 0.0);
        CHECK(std::abs(t.p_atomic_coef) == 0.0);
    }
    SUBCASE("substitution at omega = 0, kappa = 1, Delta = 2") {
        PhysicalParams p;
        p.kappa = 1.0;
        p.gamma = 0.1;
        p.Delta_a = 2.0;
        p.g_a = 0.0;
        p.N = 1.0;
        p.P = 0.0;
        p.kappa_ext = 1.0;
        auto d = derive(p);
        const auto t = output_quadrature_transfer(0.0, d, p, 0.0);
        CHECK(t.q_in_coef.real() == doctest::Approx(-5.0 / 3.0).epsilon(1e-12));
        CHECK(t.q_in_coef.imag() == doctest::Approx(0.0));
    }
    SUBCASE("conjugation symmetry under omega -> -omega") {
        auto p = gain_params();
        auto d = derive(p);
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (int i = 0; i < 50; ++i) {
            const double w = u(rng);
            const auto a = output_quadrature_transfer(w, d, p, 0.3);
            const auto b = output_quadrature_transfer(-w, d, p, 0.3);
            CHECK(std::abs(a.q_in_coef - std::conj(b.q_in_coef)) < 1e-12);
            CHECK(std::abs(a.p_in_coef - std::conj(b.p_in_coef)) < 1e-12);
            CHECK(std::abs(a.q_atomic_coef - std::conj(b.q_atomic_coef)) < 1e-12);
            CHECK(std::abs(a.p_atomic_coef - std::conj(b.p_atomic_coef)) < 1e-12);
        }
    }
}

TEST_CASE("psd_map") {
    auto p = gain_params();

    SUBCASE("1x1 grid reproduces the single-point operations") {
        auto d = derive(p);
        const auto map = psd_map(p, {0.31}, {1.27});
        REQUIRE(map.values.size() == 1);
        const auto at = atomic_psd(1.27, d, p, 0.31);
        const auto so = output_psd(1.27, d, p, 0.31);
        CHECK(map.values[0].S_up == at.S_up);
        CHECK(map.values[0].S_dn == at.S_dn);
        CHECK(map.values[0].S_out == so.S_out);
    }
    SUBCASE("serial and parallel evaluation are bit-identical") {
        std::vector<double> kg, wg;
        for (int i = 0; i < 24; ++i) kg.push_back(-0.9 + i * 0.075);
        for (int i = 0; i < 40; ++i) wg.push_back(-5.0 + i * 0.25);
        const auto m1 = psd_map(p, kg, wg, 1);
        const auto m8 = psd_map(p, kg, wg, 8);
        REQUIRE(m1.values.size() == m8.values.size());
        for (std::size_t i = 0; i < m1.values.size(); ++i) {
            // NaN-safe bit comparison
            CHECK(std::memcmp(&m1.values[i].S_out, &m8.values[i].S_out, sizeof(double)) == 0);
            CHECK(std::memcmp(&m1.values[i].S_up, &m8.values[i].S_up, sizeof(double)) == 0);
            CHECK(m1.values[i].flag == m8.values[i].flag);
        }
    }
    SUBCASE("non-increasing grid is rejected") {
        CHECK_THROWS_AS(psd_map(p, {0.0, 0.0}, {1.0}), BadGrid);
        CHECK_THROWS_AS(psd_map(p, {0.0}, {}), BadGrid);
    }
    SUBCASE("singular points are counted and flagged") {
        PhysicalParams ps;
        ps.kappa = 1.0;
        ps.gamma = 0.5;
        ps.Delta_a = 1.0;  // kappa = Delta resonance
        ps.g_a = 0.0;
        ps.N = 1.0;
        ps.P = 0.0;
        ps.kappa_ext = 1.0;
        const auto map = psd_map(ps, {0.0}, {-1.0, 0.0, 1.0});
        CHECK(map.singular_count == 1);
        CHECK(map.at(0, 1).flag == PointFlag::singular_r);
        CHECK(map.at(0, 0).flag == PointFlag::ok);
    }
}

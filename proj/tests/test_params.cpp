#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bridge/geometry.hpp"
#include "bridge/params.hpp"

using namespace bridge;

TEST_CASE("tacoma constants") {
    const auto p = MechanicalParams::tacoma_narrows();
    CHECK(p.E == 2.1e11);
    CHECK(p.E_c == 1.85e11);
    CHECK(p.G == 8.1e10);
    CHECK(p.L == 853.44);
    CHECK(p.ell == 6.0);
    CHECK(p.f == 70.71);
    CHECK(p.I == 0.154);
    CHECK(p.K == 6.07e-6);
    CHECK(p.J == 5.44);
    CHECK(p.A == 0.1228);
    CHECK(p.M == 7198.0);
    CHECK(p.g == 9.81);
}

TEST_CASE("derived quantities") {
    const auto p = MechanicalParams::tacoma_narrows();
    const auto d = derive(p);

    CHECK(d.q == doctest::Approx(35306.19).epsilon(1e-12));
    CHECK(d.H == doctest::Approx(45459642.6839379).epsilon(1e-12));
    CHECK(d.L_c == doctest::Approx(868.814950760751).epsilon(1e-12));
    CHECK(d.xi_bar == doctest::Approx(1.0534864564519242).epsilon(1e-14));

    // measured tension for the real bridge, retained as a sanity band
    CHECK(std::abs(d.H / 1e3 - 45413.0) / 45413.0 < 5e-3);
    CHECK(std::abs(d.L_c - 868.815) / 868.815 < 5e-4);
}

TEST_CASE("tension two routes") {
    const auto p = MechanicalParams::tacoma_narrows();
    const auto d = derive(p);
    // H = q L^2 / (8 f) with q the per-cable dead load
    CHECK(d.H == doctest::Approx(d.q * p.L * p.L / (8.0 * p.f)).epsilon(1e-14));
}

TEST_CASE("arc length closed form") {
    CHECK(cable_arc_length(853.44, 70.71) == doctest::Approx(868.814950760751).epsilon(1e-13));
    // shallow sag limit: L_c -> L + 8 f^2 / (3 L)
    const double L = 100.0, f = 0.01;
    CHECK(cable_arc_length(L, f) ==
          doctest::Approx(L + 8.0 * f * f / (3.0 * L)).epsilon(1e-10));
}

TEST_CASE("xi_bar dominates the grid") {
    const auto p = MechanicalParams::tacoma_narrows();
    const auto d = derive(p);
    QuadratureGrid grid(p.L, 64, 4);
    for (double x : grid.nodes()) CHECK(xi(x, p) <= d.xi_bar);
}

TEST_CASE("validation") {
    auto p = MechanicalParams::tacoma_narrows();
    CHECK(validate(p).empty());

    SUBCASE("zero sag") {
        p.f = 0.0;
        CHECK_FALSE(validate(p).empty());
    }
    SUBCASE("negative mass") {
        p.M = -1.0;
        CHECK_FALSE(validate(p).empty());
    }
    SUBCASE("half width too large") {
        p.ell = p.L / 10.0;
        CHECK_FALSE(validate(p).empty());
    }
    SUBCASE("sag exceeds span") {
        p.f = p.L;
        CHECK_FALSE(validate(p).empty());
    }
}

TEST_CASE("derive is deterministic") {
    const auto p = MechanicalParams::tacoma_narrows();
    const auto a = derive(p);
    const auto b = derive(p);
    CHECK(a.H == b.H);
    CHECK(a.L_c == b.L_c);
    CHECK(a.q == b.q);
    CHECK(a.xi_bar == b.xi_bar);
}

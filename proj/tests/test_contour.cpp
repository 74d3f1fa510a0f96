#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rpt/contour.hpp"

using namespace rpt;
using doctest::Approx;

TEST_CASE("site classification of a constant configuration, L=3 free") {
    auto lat = build_lattice(2, 3, false);
    auto bonds = make_bonds(lat, 1.0);
    std::vector<int> spins(9, 0);
    auto cls = classify_sites(spins, lat, bonds);
    CHECK(cls.e[0] == 0);
    CHECK(cls.e[2] == 4);  // corners
    CHECK(cls.e[3] == 4);  // edge midpoints
    CHECK(cls.e[4] == 1);  // center
    CHECK(cls.e4_prime == 0);
    CHECK(cls.e[0] + cls.e[1] + cls.e[2] + cls.e[3] + cls.e[4] == cls.n_sites);
}

TEST_CASE("checkerboard has no ordered bonds") {
    auto lat = build_lattice(2, 3, false);
    auto bonds = make_bonds(lat, 1.0);
    std::vector<int> spins(9);
    for (int v = 0; v < 9; ++v) {
        auto c = lat.coords(v);
        spins[v] = (c[0] + c[1]) % 2;
    }
    auto cls = classify_sites(spins, lat, bonds);
    CHECK(cls.e[0] == 9);
    CHECK(cls.e[4] == 0);
}

TEST_CASE("constant configuration with a 4-edge cutset around the origin") {
    auto lat = build_lattice(2, 5, true);
    auto cut = build_cutset(lat, 0);
    REQUIRE(cut.gamma.size() == 4);
    auto bonds = make_bonds(lat, 1.0, &cut, 0.5);
    std::vector<int> spins(25, 0);
    auto cls = classify_sites(spins, lat, bonds);
    // origin and its four neighbors touch weak bonds; all five are interior E4 sites
    const int origin = lat.origin();
    CHECK(cls.touches_weak[origin] == 1);
    long long n_weak = 0;
    for (char w : cls.touches_weak) n_weak += w;
    CHECK(n_weak == 5);
    CHECK(cls.e[4] == 9);
    CHECK(cls.e4_prime == 5);
}

TEST_CASE("bkl_rhs closed forms and guards") {
    SiteClassification cls;
    cls.e[4] = 7;  // all-ordered block, no weak contact
    CHECK(bkl_rhs(cls, 25.0, 0.0) == Approx(7.0 * std::log(25.0)).epsilon(1e-13));
    // the eps coefficient only touches E1+E2+E3+E4'
    CHECK(bkl_rhs(cls, 25.0, 0.9) == Approx(bkl_rhs(cls, 25.0, 0.0)).epsilon(1e-13));
    cls.e[1] = 2;
    cls.e4_prime = 3;
    const double lnq = std::log(25.0);
    CHECK(bkl_rhs(cls, 25.0, 0.25) == Approx(4.0 * lnq + 1.0 * (2 + 3) * lnq).epsilon(1e-12));
    CHECK(bkl_rhs(cls, 25.0, 0.5) > bkl_rhs(cls, 25.0, 0.25));
    CHECK(bkl_rhs(cls, 100.0, 0.25) > bkl_rhs(cls, 25.0, 0.25));
    CHECK_THROWS(bkl_rhs(cls, 1.0, 0.5));
    CHECK_THROWS(bkl_rhs(cls, 25.0, 1.0));
}

TEST_CASE("contours of a constant configuration: none without weak bonds") {
    auto lat = build_lattice(2, 5, false);
    auto bonds = make_bonds(lat, 1.0);
    std::vector<int> spins(25, 0);
    auto cs = extract_contours(spins, lat, bonds);
    CHECK(cs.grid == 4);
    CHECK(cs.component_size.empty());
    for (auto sq : cs.square) CHECK(sq == SquareClass::Ordered);
}

TEST_CASE("weak ring around the origin creates one surrounding contour") {
    auto lat = build_lattice(2, 5, true);
    auto cut = build_cutset(lat, 0);
    auto bonds = make_bonds(lat, 1.0, &cut, 0.5);
    std::vector<int> spins(25, 0);
    auto cs = extract_contours(spins, lat, bonds);
    REQUIRE(cs.component_size.size() == 1);
    CHECK(cs.surrounds_origin[0] == 1);
    long long n_contour = 0;
    for (auto sq : cs.square) n_contour += sq == SquareClass::Contour;
    CHECK(n_contour == cs.component_size[0]);
}

TEST_CASE("a disagreement ring yields an irregular surrounding contour") {
    auto lat = build_lattice(2, 7, false);
    auto bonds = make_bonds(lat, 1.0);
    std::vector<int> spins(49, 0);
    for (int v = 0; v < 49; ++v) {
        auto c = lat.coords(v);
        int d = std::max(std::abs(c[0] - 3), std::abs(c[1] - 3));
        if (d == 2) spins[v] = 1;
    }
    auto cs = extract_contours(spins, lat, bonds);
    bool surrounded = false;
    for (std::size_t c = 0; c < cs.component_size.size(); ++c)
        surrounded = surrounded || cs.surrounds_origin[c];
    CHECK(surrounded);
    // the four central squares stay ordered (inside the ring)
    int g = cs.grid, mid = g / 2;
    CHECK(cs.square[(mid - 1) * g + (mid - 1)] == SquareClass::Ordered);
}

TEST_CASE("census bookkeeping and Peierls companion") {
    auto lat = build_lattice(2, 7, false);
    auto bonds = make_bonds(lat, 1.0);
    std::vector<int> flat(49, 0), ringed(49, 0);
    for (int v = 0; v < 49; ++v) {
        auto c = lat.coords(v);
        if (std::max(std::abs(c[0] - 3), std::abs(c[1] - 3)) == 2) ringed[v] = 1;
    }
    ContourCensus census;
    census.add(flat, lat, bonds);
    census.add(ringed, lat, bonds);
    census.add(ringed, lat, bonds);
    CHECK(census.n_samples() == 3);
    auto rows = census.histogram();
    REQUIRE(rows.size() >= 1);
    bool found = false;
    for (const auto& r : rows)
        if (r.p_hat == Approx(2.0 / 3.0)) found = true;
    CHECK(found);
    CHECK(ContourCensus::log_peierls_rhs(8, 25.0, 1.0) ==
          Approx(8.0 * (2.0 * std::log(2.0) - 0.25 * std::log(25.0))).epsilon(1e-13));
}

TEST_CASE("chromatic counts via deletion-contraction") {
    const double q = 25.0;
    CHECK(detail::chromatic_count(3, {}, q) == Approx(q * q * q));
    CHECK(detail::chromatic_count(2, {{0, 1}}, q) == Approx(q * (q - 1.0)));
    CHECK(detail::chromatic_count(3, {{0, 1}, {1, 2}, {0, 2}}, q) ==
          Approx(q * (q - 1.0) * (q - 2.0)));
    CHECK(detail::chromatic_count(2, {{0, 0}}, q) == 0.0);
    // duplicate edges collapse
    CHECK(detail::chromatic_count(2, {{0, 1}, {1, 0}}, q) == Approx(q * (q - 1.0)));
}

TEST_CASE("constrained partition check on the 2x2 plaquette") {
    auto lat = build_lattice(2, 2, false);
    const double q = 25.0;
    const double J = selfdual_coupling(q);
    auto bonds = make_bonds(lat, J);
    auto rep = constrained_partition_check(lat, bonds, static_cast<int>(q));
    CHECK(rep.n_patterns == 16);
    // all-unbroken: Z = q e^{J E}
    const auto& full = rep.rows.back();
    CHECK(full.pattern == 0xFull);
    CHECK(full.compatible);
    CHECK(full.ln_z == Approx(4.0 * J + std::log(q)).epsilon(1e-12));
    // a single broken bond on a 4-cycle is never spin-realizable
    int n_single = 0;
    for (const auto& row : rep.rows)
        if (std::popcount(row.pattern) == 3) {
            CHECK(!row.compatible);
            ++n_single;
        }
    CHECK(n_single == 4);
    // all-broken: proper colorings of the 4-cycle
    const auto& none = rep.rows.front();
    CHECK(none.compatible);
    const double cyc4 = std::pow(q - 1.0, 4) + (q - 1.0);
    CHECK(none.ln_z == Approx(std::log(cyc4)).epsilon(1e-12));
    // deterministic across calls
    auto rep2 = constrained_partition_check(lat, bonds, static_cast<int>(q));
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        CHECK(rep.rows[i].ln_z == rep2.rows[i].ln_z);
        CHECK(rep.rows[i].rhs == rep2.rows[i].rhs);
    }
}

TEST_CASE("constrained partition check respects its cap and dimension guard") {
    auto big = build_lattice(2, 5, false);
    CHECK_THROWS_AS(constrained_partition_check(big, make_bonds(big, 1.0), 25), CapExceeded);
    auto lat1d = build_lattice(1, 4, false);
    CHECK_THROWS(constrained_partition_check(lat1d, make_bonds(lat1d, 1.0), 25));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rpt/bonds.hpp"
#include "rpt/lattice.hpp"

using namespace rpt;

TEST_CASE("box vertex and edge counts") {
    auto l22 = build_lattice(2, 2, false);
    CHECK(l22.n_sites == 4);
    CHECK(l22.n_edges() == 4);

    auto l23 = build_lattice(2, 3, false);
    CHECK(l23.n_sites == 9);
    CHECK(l23.n_edges() == 12);

    auto l32 = build_lattice(3, 2, false);
    CHECK(l32.n_sites == 8);
    CHECK(l32.n_edges() == 12);
}

TEST_CASE("edge count formula d*L^(d-1)*(L-1) over the test grid") {
    for (int d = 1; d <= 3; ++d)
        for (int L = 1; L <= 6; ++L) {
            auto lat = build_lattice(d, L, false);
            long long expected = d * (L - 1);
            for (int k = 0; k < d - 1; ++k) expected *= L;
            CHECK(lat.n_edges() == expected);
        }
}

TEST_CASE("edges connect lattice neighbors at distance one") {
    auto lat = build_lattice(3, 4, false);
    for (const auto& [u, v] : lat.edges) {
        auto cu = lat.coords(u), cv = lat.coords(v);
        int dist = 0;
        for (int k = 0; k < 3; ++k) dist += std::abs(cu[k] - cv[k]);
        CHECK(dist == 1);
    }
}

TEST_CASE("coordinate indexing round-trips") {
    for (int d = 1; d <= 3; ++d) {
        auto lat = build_lattice(d, 5, false);
        for (int v = 0; v < lat.n_sites; ++v) CHECK(lat.index(lat.coords(v)) == v);
    }
}

TEST_CASE("ghost wiring: one edge per missing neighbor") {
    auto lat = build_lattice(2, 3, true);
    // 12 lattice edges + corner vertices get 2 ghost edges, side centers 1
    CHECK(lat.n_lattice_edges == 12);
    CHECK(lat.n_edges() == 12 + 4 * 2 + 4 * 1);
    int g = lat.ghost();
    for (long long e = lat.n_lattice_edges; e < lat.n_edges(); ++e)
        CHECK(lat.edges[e][1] == g);
    CHECK(lat.boundary.size() == 8);
}

TEST_CASE("origin is the center vertex for odd L") {
    auto lat = build_lattice(2, 5, false);
    auto c = lat.coords(lat.origin());
    CHECK(c[0] == 2);
    CHECK(c[1] == 2);
}

TEST_CASE("cutset sizes") {
    auto l5 = build_lattice(2, 5, false);
    auto c0 = build_cutset(l5, 0);
    CHECK(c0.gamma.size() == 4);
    CHECK(c0.interior.size() == 1);
    CHECK(c0.interior[0] == l5.origin());

    auto l7 = build_lattice(2, 7, false);
    CHECK(build_cutset(l7, 1).gamma.size() == 12);

    auto l35 = build_lattice(3, 5, false);
    CHECK(build_cutset(l35, 0).gamma.size() == 6);
}

TEST_CASE("cutset geometry violations rejected") {
    auto l5 = build_lattice(2, 5, false);
    CHECK_THROWS(build_cutset(l5, 2));  // inner box touches the boundary
    CHECK_THROWS(build_cutset(build_lattice(2, 4, false), 0));  // even L
}

TEST_CASE("separation holds for built cutsets, fails with a leak") {
    for (int d = 1; d <= 3; ++d)
        for (int r = 0; r <= 1; ++r) {
            int L = 2 * r + 3;
            for (bool ghost : {false, true}) {
                auto lat = build_lattice(d, L, ghost);
                auto cut = build_cutset(lat, r);
                CHECK(separation_check(lat, cut));
                if (!cut.gamma.empty()) {
                    Cutset leaky = cut;
                    leaky.gamma.erase(leaky.gamma.begin());
                    CHECK_FALSE(separation_check(lat, leaky));
                }
            }
        }
}

TEST_CASE("cutset equal to the whole edge set separates trivially") {
    auto lat = build_lattice(2, 5, true);
    Cutset cut = build_cutset(lat, 1);
    cut.gamma.clear();
    for (int e = 0; e < lat.n_edges(); ++e) cut.gamma.push_back(e);
    CHECK(separation_check(lat, cut));
}

TEST_CASE("boundary cutset separates everything from the ghost") {
    auto lat = build_lattice(2, 5, true);
    auto cut = boundary_cutset(lat);
    CHECK(cut.gamma.size() == static_cast<std::size_t>(lat.n_edges() - lat.n_lattice_edges));
    CHECK(separation_check(lat, cut));
}

TEST_CASE("bad lattice arguments rejected") {
    CHECK_THROWS(build_lattice(0, 3, false));
    CHECK_THROWS(build_lattice(2, 0, false));
}

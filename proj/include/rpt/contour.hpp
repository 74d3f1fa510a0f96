#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "rpt/bonds.hpp"
#include "rpt/exact.hpp"
#include "rpt/lattice.hpp"
#include "rpt/rc.hpp"
#include "rpt/stats.hpp"
#include "rpt/union_find.hpp"

namespace rpt {

// BKL site bookkeeping: a bond is ordered iff its endpoint spins agree;
// E_k counts sites touching k ordered lattice bonds, E4' the E4 sites that
// also touch a weak (cutset, eps < 1) bond.
struct SiteClassification {
    std::vector<int> ordered_count;   // per site, 0..4 in d=2
    std::vector<char> touches_weak;   // per site
    long long e[5] = {0, 0, 0, 0, 0};
    long long e4_prime = 0;
    long long n_sites = 0;
};

namespace detail {

inline SiteClassification classify_from_bond_flags(const std::vector<char>& ordered,
                                                   const Lattice& lat, const BondMap& bonds) {
    if (lat.dim != 2)
        throw std::invalid_argument("classify_sites: the contour analysis is d=2 only");
    SiteClassification cls;
    cls.n_sites = lat.n_sites;
    cls.ordered_count.assign(static_cast<std::size_t>(lat.n_sites), 0);
    cls.touches_weak.assign(static_cast<std::size_t>(lat.n_sites), 0);
    for (long long e = 0; e < lat.n_lattice_edges; ++e) {
        if (ordered[e]) {
            ++cls.ordered_count[lat.edges[e][0]];
            ++cls.ordered_count[lat.edges[e][1]];
        }
    }
    for (long long e = 0; e < lat.n_edges(); ++e) {
        if (!bonds.weak[e]) continue;
        if (lat.edges[e][0] < lat.n_sites) cls.touches_weak[lat.edges[e][0]] = 1;
        if (lat.edges[e][1] < lat.n_sites) cls.touches_weak[lat.edges[e][1]] = 1;
    }
    for (int v = 0; v < lat.n_sites; ++v) {
        ++cls.e[cls.ordered_count[v]];
        if (cls.ordered_count[v] == 4 && cls.touches_weak[v]) ++cls.e4_prime;
    }
    return cls;
}

}  // namespace detail

inline SiteClassification classify_sites(const std::vector<int>& spins, const Lattice& lat,
                                         const BondMap& bonds) {
    if (static_cast<long long>(spins.size()) != lat.n_sites)
        throw std::invalid_argument("classify_sites: spin vector length mismatch");
    std::vector<char> ordered(static_cast<std::size_t>(lat.n_lattice_edges), 0);
    for (long long e = 0; e < lat.n_lattice_edges; ++e)
        ordered[e] = spins[lat.edges[e][0]] == spins[lat.edges[e][1]];
    return detail::classify_from_bond_flags(ordered, lat, bonds);
}

// Log of the partition-function bound
//   q^{E0+E4-E4'} * q^{(3/4+eps)(E1+E2+E3+E4')}.
inline double bkl_rhs(const SiteClassification& cls, double q, double eps) {
    if (q <= 1.0) throw std::invalid_argument("bkl_rhs: q must exceed 1");
    if (eps < 0.0 || eps >= 1.0) throw std::invalid_argument("bkl_rhs: eps must lie in [0,1)");
    const double lnq = std::log(q);
    return static_cast<double>(cls.e[0] + cls.e[4] - cls.e4_prime) * lnq +
           (0.75 + eps) * static_cast<double>(cls.e[1] + cls.e[2] + cls.e[3] + cls.e4_prime) * lnq;
}

// Unit-square taxonomy: ordered (four ordered bonds), disordered (four
// broken), irregular otherwise. An ordered square touching a weak bond is
// reclassified as a contour square.
enum class SquareClass : std::uint8_t { Ordered, Disordered, Irregular, Contour };

struct ContourSet {
    int grid = 0;                          // (L-1) squares per axis
    std::vector<SquareClass> square;       // grid*grid entries, row-major
    std::vector<int> component;            // per square, -1 if not a contour square
    std::vector<long long> component_size;
    std::vector<char> surrounds_origin;    // per component
};

inline ContourSet extract_contours(const std::vector<int>& spins, const Lattice& lat,
                                   const BondMap& bonds) {
    if (lat.dim != 2)
        throw std::invalid_argument("extract_contours: d=2 only");
    const int L = lat.side;
    const int g = L - 1;
    const SiteClassification cls = classify_sites(spins, lat, bonds);
    ContourSet cs;
    cs.grid = g;
    cs.square.assign(static_cast<std::size_t>(g) * g, SquareClass::Irregular);
    cs.component.assign(static_cast<std::size_t>(g) * g, -1);

    auto agree = [&](int u, int v) { return spins[u] == spins[v]; };
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            const int v = i * L + j;
            int n_ord = agree(v, v + 1) + agree(v + L, v + L + 1) + agree(v, v + L) +
                        agree(v + 1, v + L + 1);
            SquareClass c = n_ord == 4 ? SquareClass::Ordered
                          : n_ord == 0 ? SquareClass::Disordered
                                       : SquareClass::Irregular;
            if (c == SquareClass::Ordered) {
                bool weak = cls.touches_weak[v] || cls.touches_weak[v + 1] ||
                            cls.touches_weak[v + L] || cls.touches_weak[v + L + 1];
                if (weak) c = SquareClass::Contour;
            }
            cs.square[i * g + j] = c;
        }
    }

    auto is_contour = [&](int s) {
        return cs.square[s] == SquareClass::Irregular || cs.square[s] == SquareClass::Contour;
    };
    // 4-connected components of contour squares
    UnionFind uf(static_cast<std::size_t>(g) * g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            const int s = i * g + j;
            if (!is_contour(s)) continue;
            if (j + 1 < g && is_contour(s + 1)) uf.merge(s, s + 1);
            if (i + 1 < g && is_contour(s + g)) uf.merge(s, s + g);
        }
    std::map<int, int> root_to_id;
    for (int s = 0; s < g * g; ++s) {
        if (!is_contour(s)) continue;
        const int r = uf.find(s);
        auto [it, fresh] = root_to_id.try_emplace(r, static_cast<int>(root_to_id.size()));
        cs.component[s] = it->second;
        if (fresh) cs.component_size.push_back(0);
        ++cs.component_size[it->second];
    }

    // squares incident to the origin vertex
    const int c0 = (L - 1) / 2;
    std::vector<int> origin_squares;
    for (int di = -1; di <= 0; ++di)
        for (int dj = -1; dj <= 0; ++dj) {
            const int i = c0 + di, j = c0 + dj;
            if (i >= 0 && i < g && j >= 0 && j < g) origin_squares.push_back(i * g + j);
        }

    cs.surrounds_origin.assign(cs.component_size.size(), 0);
    std::vector<char> seen(static_cast<std::size_t>(g) * g);
    for (std::size_t c = 0; c < cs.component_size.size(); ++c) {
        bool at_origin = false;
        for (int s : origin_squares) at_origin = at_origin || cs.component[s] == static_cast<int>(c);
        if (at_origin) {
            cs.surrounds_origin[c] = 1;  // contour sitting on the origin
            continue;
        }
        // origin escapes to the square-grid border avoiding this component?
        std::fill(seen.begin(), seen.end(), 0);
        std::queue<int> bfs;
        for (int s : origin_squares)
            if (!seen[s]) {
                seen[s] = 1;
                bfs.push(s);
            }
        bool escaped = false;
        while (!bfs.empty() && !escaped) {
            const int s = bfs.front();
            bfs.pop();
            const int i = s / g, j = s % g;
            if (i == 0 || j == 0 || i == g - 1 || j == g - 1) {
                escaped = true;
                break;
            }
            const int nb[4] = {s - 1, s + 1, s - g, s + g};
            for (int t : nb) {
                if (seen[t] || cs.component[t] == static_cast<int>(c)) continue;
                seen[t] = 1;
                bfs.push(t);
            }
        }
        cs.surrounds_origin[c] = !escaped;
    }
    return cs;
}

// Empirical P(exists contour of size ell surrounding the origin) from an
// equilibrated sample stream, with multinomial errors and the companion
// Peierls bound 2^{2 ell} q^{-C ell / 4}.
class ContourCensus {
public:
    void add(const std::vector<int>& spins, const Lattice& lat, const BondMap& bonds) {
        const ContourSet cs = extract_contours(spins, lat, bonds);
        std::set<long long> sizes;
        for (std::size_t c = 0; c < cs.component_size.size(); ++c)
            if (cs.surrounds_origin[c]) sizes.insert(cs.component_size[c]);
        for (long long ell : sizes) ++counts_[ell];
        ++n_samples_;
    }

    struct Row {
        long long ell = 0;
        double p_hat = 0.0;
        double se = 0.0;
    };

    std::vector<Row> histogram() const {
        std::vector<Row> rows;
        for (const auto& [ell, c] : counts_) {
            Row r;
            r.ell = ell;
            r.p_hat = static_cast<double>(c) / static_cast<double>(n_samples_);
            r.se = std::sqrt(r.p_hat * (1.0 - r.p_hat) / static_cast<double>(n_samples_));
            rows.push_back(r);
        }
        return rows;
    }

    // WLS slope of log p_hat against ell.
    SlopeFit log_slope() const {
        std::vector<double> x, y, se;
        for (const auto& r : histogram()) {
            if (r.p_hat <= 0.0) continue;
            x.push_back(static_cast<double>(r.ell));
            y.push_back(std::log(r.p_hat));
            se.push_back(r.se / r.p_hat);
        }
        return wls_slope(x, y, se);
    }

    static double log_peierls_rhs(long long ell, double q, double C) {
        return static_cast<double>(ell) * (2.0 * std::log(2.0) - 0.25 * C * std::log(q));
    }

    long long n_samples() const { return n_samples_; }

private:
    std::map<long long, long long> counts_;
    long long n_samples_ = 0;
};

// --- constrained partition bound -------------------------------------------

namespace detail {

// proper colorings with q colors, deletion-contraction on a tiny multigraph
inline double chromatic_count(int n, std::vector<std::pair<int, int>> edges, double q) {
    // drop duplicates; a self loop kills the count
    std::set<std::pair<int, int>> uniq;
    for (auto [a, b] : edges) {
        if (a == b) return 0.0;
        if (a > b) std::swap(a, b);
        uniq.insert({a, b});
    }
    if (uniq.empty()) return std::pow(q, n);
    edges.assign(uniq.begin(), uniq.end());
    auto [a, b] = edges.back();
    edges.pop_back();
    std::vector<std::pair<int, int>> contracted;
    for (auto [u, v] : edges) {
        if (u == b) u = a;
        if (v == b) v = a;
        if (u > b) --u;
        if (v > b) --v;
        contracted.push_back({u, v});
    }
    return chromatic_count(n, edges, q) - chromatic_count(n - 1, contracted, q);
}

}  // namespace detail

struct PatternRow {
    std::uint64_t pattern = 0;  // bit e set = bond e unbroken (ordered)
    bool compatible = false;    // a spin configuration realizing it exists
    double ln_z = kLogZero;
    double rhs = 0.0;
    bool holds = false;
};

struct BklCheckReport {
    std::vector<PatternRow> rows;
    long long n_patterns = 0;
    long long n_compatible = 0;
    long long n_violations = 0;
};

// For every broken/unbroken bond pattern: the constrained Boltzmann sum
//   Z(Lambda|u,b) = sum over compatible spin configs of prod_unbroken e^{J_e}
// against the bound from bkl_rhs. eps_exponent < 0 means "use the bond map's
// weakening eps" (the default reading of the overloaded symbol).
inline BklCheckReport constrained_partition_check(const Lattice& lat, const BondMap& bonds,
                                                  int q, double eps_exponent = -1.0,
                                                  int edge_cap = 16) {
    if (lat.dim != 2)
        throw std::invalid_argument("constrained_partition_check: d=2 only");
    const int E = static_cast<int>(lat.n_lattice_edges);
    if (E > edge_cap)
        throw CapExceeded("constrained_partition_check: " + std::to_string(E) +
                          " edges exceeds the pattern cap of " + std::to_string(edge_cap));
    // unweakened maps carry eps = 1; the exponent then reverts to the plain 3/4
    const double eps = eps_exponent >= 0.0 ? eps_exponent : (bonds.eps < 1.0 ? bonds.eps : 0.0);
    const int V = static_cast<int>(lat.n_sites);

    BklCheckReport rep;
    rep.n_patterns = 1ll << E;
    UnionFind uf(static_cast<std::size_t>(V));
    for (std::uint64_t pat = 0; pat < (1ull << E); ++pat) {
        PatternRow row;
        row.pattern = pat;
        uf.reset(static_cast<std::size_t>(V));
        double coupling_sum = 0.0;
        for (int e = 0; e < E; ++e)
            if (pat >> e & 1) {
                uf.merge(lat.edges[e][0], lat.edges[e][1]);
                coupling_sum += bonds.coupling[e];
            }
        // broken bonds become inequality constraints between merged blocks
        std::map<int, int> root_to_id;
        for (int v = 0; v < V; ++v) root_to_id.try_emplace(uf.find(v), static_cast<int>(root_to_id.size()));
        std::vector<std::pair<int, int>> mismatches;
        bool compatible = true;
        for (int e = 0; e < E && compatible; ++e) {
            if (pat >> e & 1) continue;
            const int a = root_to_id[uf.find(lat.edges[e][0])];
            const int b = root_to_id[uf.find(lat.edges[e][1])];
            if (a == b) compatible = false;
            else mismatches.push_back({a, b});
        }
        double count = 0.0;
        if (compatible) count = detail::chromatic_count(static_cast<int>(root_to_id.size()), mismatches, q);
        row.compatible = compatible && count > 0.0;
        if (row.compatible) row.ln_z = coupling_sum + std::log(count);

        std::vector<char> ordered(static_cast<std::size_t>(E), 0);
        for (int e = 0; e < E; ++e) ordered[e] = (pat >> e) & 1;
        const SiteClassification cls = detail::classify_from_bond_flags(ordered, lat, bonds);
        row.rhs = bkl_rhs(cls, q, eps);
        row.holds = !row.compatible || row.ln_z <= row.rhs + 1e-9;
        if (row.compatible) ++rep.n_compatible;
        if (!row.holds) ++rep.n_violations;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace rpt

#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "rpt/bonds.hpp"
#include "rpt/lattice.hpp"
#include "rpt/rc.hpp"

namespace rpt {

struct ExactThetaResult {
    double log_z = kLogZero;
    double theta = 0.0;
};

namespace detail {

// DP state key layout: L frontier slot labels, ghost label, origin label
// (-1 if untracked), origin status (0 unseen, 1 live, 2 closed-disconnected).
using DpKey = std::vector<signed char>;

inline void dp_merge(DpKey& key, int L, signed char a, signed char b) {
    if (a == b) return;
    for (int i = 0; i <= L + 1; ++i)
        if (key[i] == b) key[i] = a;
}

inline void dp_canonicalize(DpKey& key, int L) {
    // relabel by first occurrence over slots 0..L (ghost included)
    signed char remap[64];
    for (auto& r : remap) r = -2;
    signed char next = 0;
    for (int i = 0; i <= L; ++i) {
        signed char l = key[i];
        if (l < 0) continue;
        if (remap[static_cast<int>(l)] == -2) remap[static_cast<int>(l)] = next++;
        key[i] = remap[static_cast<int>(l)];
    }
    if (key[L + 1] >= 0) key[L + 1] = remap[static_cast<int>(key[L + 1])];
}

}  // namespace detail

// Exact log partition function and origin-to-ghost connectivity probability
// for the FK measure on a d=2 wired box, by a sweep over vertices carrying
// the cluster partition of the frontier row. Handles lattices far beyond the
// brute-force enumeration cap (state count is set-partition sized in L, not
// exponential in the edge count).
inline ExactThetaResult wired_theta_exact(const Lattice& lat, const BondMap& bonds, double q) {
    if (lat.dim != 2) throw std::invalid_argument("wired_theta_exact: d=2 only");
    if (!lat.has_ghost) throw std::invalid_argument("wired_theta_exact: ghost lattice required");
    if (q <= 0.0) throw std::invalid_argument("wired_theta_exact: q must be > 0");
    const int L = lat.side;
    const int V = static_cast<int>(lat.n_sites);
    const int origin = lat.origin();

    // ghost edge ids per vertex
    std::vector<std::vector<int>> ghost_edges(static_cast<std::size_t>(V));
    for (long long e = lat.n_lattice_edges; e < lat.n_edges(); ++e)
        ghost_edges[lat.edges[e][0]].push_back(static_cast<int>(e));

    using detail::DpKey;
    std::map<DpKey, double> states;
    DpKey init(static_cast<std::size_t>(L + 3), -1);
    init[L] = 0;      // ghost block
    init[L + 1] = -1; // origin label
    init[L + 2] = 0;  // origin status
    states[init] = 1.0;
    double log_offset = 0.0;

    std::map<DpKey, double> next;
    for (int v = 0; v < V; ++v) {
        const int row = v / L, col = v % L;
        const int e_up = row > 0 ? lat.edge_between(v - L, v) : -1;
        const int e_left = col > 0 ? lat.edge_between(v - 1, v) : -1;
        const double p_up = e_up >= 0 ? bonds.prob[e_up] : 0.0;
        const double p_left = e_left >= 0 ? bonds.prob[e_left] : 0.0;
        double p_ghost_none = 1.0;
        for (int ge : ghost_edges[v]) p_ghost_none *= 1.0 - bonds.prob[ge];
        const double p_ghost = 1.0 - p_ghost_none;

        next.clear();
        for (const auto& [key0, w0] : states) {
            // fresh label for v: one past the current maximum
            signed char fresh = 0;
            for (int i = 0; i <= L; ++i)
                if (key0[i] >= fresh) fresh = static_cast<signed char>(key0[i] + 1);

            for (int up = 0; up < (e_up >= 0 ? 2 : 1); ++up) {
                double w1 = w0 * (e_up >= 0 ? (up ? p_up : 1.0 - p_up) : 1.0);
                if (w1 == 0.0) continue;
                for (int left = 0; left < (e_left >= 0 ? 2 : 1); ++left) {
                    double w2 = w1 * (e_left >= 0 ? (left ? p_left : 1.0 - p_left) : 1.0);
                    if (w2 == 0.0) continue;
                    for (int gh = 0; gh < (ghost_edges[v].empty() ? 1 : 2); ++gh) {
                        double w = w2 * (ghost_edges[v].empty() ? 1.0 : (gh ? p_ghost : p_ghost_none));
                        if (w == 0.0) continue;

                        DpKey key = key0;
                        signed char vlab = fresh;
                        if (v == origin) {
                            key[L + 1] = vlab;
                            key[L + 2] = 1;
                        }
                        auto merge_into = [&](signed char keep, signed char gone) {
                            if (key[L + 1] == gone) key[L + 1] = keep;
                            if (vlab == gone) vlab = keep;
                            detail::dp_merge(key, L, keep, gone);
                        };
                        // vertical bond to the vertex leaving slot `col`
                        if (up) merge_into(key[col], vlab);
                        // retire the old occupant of slot `col`
                        if (row > 0) {
                            signed char old = key[col];
                            key[col] = -1;
                            bool alive = vlab == old;
                            for (int i = 0; i <= L && !alive; ++i) alive = key[i] == old;
                            if (!alive) {
                                w *= q;  // cluster closed
                                if (key[L + 1] == old) {
                                    key[L + 1] = -1;
                                    key[L + 2] = 2;
                                }
                            }
                        }
                        key[col] = vlab;
                        if (left) merge_into(key[col - 1], key[col]);
                        if (gh) merge_into(key[L], key[col]);

                        detail::dp_canonicalize(key, L);
                        next[key] += w;
                    }
                }
            }
        }
        states.swap(next);
        double wmax = 0.0;
        for (const auto& [k, w] : states) wmax = std::max(wmax, w);
        if (wmax > 0.0) {
            log_offset += std::log(wmax);
            for (auto& [k, w] : states) w /= wmax;
        }
    }

    double total = 0.0, connected = 0.0;
    for (const auto& [key, w] : states) {
        int blocks = 0;
        for (int i = 0; i <= L; ++i) {
            signed char l = key[i];
            if (l < 0) continue;
            bool first = true;
            for (int j = 0; j < i && first; ++j) first = key[j] != l;
            if (first) ++blocks;
        }
        const double wf = w * std::pow(q, blocks);
        total += wf;
        if (key[L + 2] == 1 && key[L + 1] == key[L]) connected += wf;
    }
    if (total <= 0.0) throw std::runtime_error("wired_theta_exact: partition function vanished");
    return {log_offset + std::log(total), connected / total};
}

}  // namespace rpt

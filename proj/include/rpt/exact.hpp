#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rpt/bonds.hpp"
#include "rpt/lattice.hpp"
#include "rpt/rc.hpp"
#include "rpt/union_find.hpp"

namespace rpt {

// Thrown when a requested exact computation exceeds its enumeration cap.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Built-in library of increasing events for domination checks.
struct EventSpec {
    enum Kind { OriginToGhost, EdgeOccupied, CountAtLeast } kind = OriginToGhost;
    int arg = 0;  // edge id / count threshold

    std::string label() const {
        switch (kind) {
            case OriginToGhost: return "origin<->ghost";
            case EdgeOccupied: return "edge_" + std::to_string(arg) + "_occupied";
            case CountAtLeast: return "occupied>=" + std::to_string(arg);
        }
        return "?";
    }
};

struct ExactResult {
    double log_z = kLogZero;
    double theta = 0.0;                  // P(origin occupied-connected to ghost); 0 under free bc
    std::vector<double> edge_marginal;   // P(eta_e = 1) per edge
    std::vector<double> origin_marginal; // exact origin spin marginal (integer q)
    std::vector<double> event_prob;      // parallel to the events argument
    long long n_configs = 0;
};

// Brute-force sum of the FK weight over all 2^E edge configurations.
// Accumulation uses a running-maximum log-sum-exp rescale.
inline ExactResult enumerate_fk(const Lattice& lat, const BondMap& bonds, double q, bool wired,
                                int edge_cap = 24, const std::vector<EventSpec>& events = {}) {
    if (wired != lat.has_ghost)
        throw std::invalid_argument("enumerate_fk: wired flag must match the lattice's ghost flag");
    if (q <= 0.0) throw std::invalid_argument("enumerate_fk: q must be > 0");
    const int E = static_cast<int>(lat.n_edges());
    if (E > edge_cap)
        throw CapExceeded("enumerate_fk: " + std::to_string(E) +
                          " edges exceeds the enumeration cap of " + std::to_string(edge_cap));

    std::vector<long double> log_p(E), log_1mp(E);
    std::uint64_t forbidden = 0;  // bits that carry p_e = 0
    for (int e = 0; e < E; ++e) {
        const long double p = bonds.prob[e];
        if (p == 0.0L) forbidden |= (1ull << e);
        else log_p[e] = std::log(p);
        log_1mp[e] = std::log1p(-p);
    }
    long double base = 0.0L;
    for (int e = 0; e < E; ++e) base += log_1mp[e];
    const long double lnq = std::log(static_cast<long double>(q));
    const int n_verts = static_cast<int>(lat.n_vertices());
    const int origin = lat.origin();
    const int ghost = lat.ghost();

    UnionFind uf(static_cast<std::size_t>(n_verts));
    long double max_lw = -std::numeric_limits<long double>::infinity();
    long double z = 0.0L, theta_acc = 0.0L;
    std::vector<long double> edge_acc(E, 0.0L);
    std::vector<long double> event_acc(events.size(), 0.0L);

    ExactResult res;
    const std::uint64_t n_cfg = 1ull << E;
    res.n_configs = static_cast<long long>(n_cfg);
    for (std::uint64_t mask = 0; mask < n_cfg; ++mask) {
        if (mask & forbidden) continue;
        uf.reset(static_cast<std::size_t>(n_verts));
        long double lw = base;
        for (int e = 0; e < E; ++e)
            if (mask >> e & 1) {
                lw += log_p[e] - log_1mp[e];
                uf.merge(lat.edges[e][0], lat.edges[e][1]);
            }
        lw += static_cast<long double>(uf.count()) * lnq;
        if (lw > max_lw) {
            const long double f = std::exp(max_lw - lw);
            z *= f;
            theta_acc *= f;
            for (auto& a : edge_acc) a *= f;
            for (auto& a : event_acc) a *= f;
            max_lw = lw;
        }
        const long double w = std::exp(lw - max_lw);
        z += w;
        if (wired && uf.connected(origin, ghost)) theta_acc += w;
        for (int e = 0; e < E; ++e)
            if (mask >> e & 1) edge_acc[e] += w;
        for (std::size_t i = 0; i < events.size(); ++i) {
            bool hit = false;
            switch (events[i].kind) {
                case EventSpec::OriginToGhost:
                    hit = wired && uf.connected(origin, ghost);
                    break;
                case EventSpec::EdgeOccupied:
                    hit = (mask >> events[i].arg) & 1;
                    break;
                case EventSpec::CountAtLeast:
                    hit = std::popcount(mask) >= events[i].arg;
                    break;
            }
            if (hit) event_acc[i] += w;
        }
    }
    if (z <= 0.0L) throw std::runtime_error("enumerate_fk: partition function vanished");
    res.log_z = static_cast<double>(max_lw + std::log(z));
    res.theta = static_cast<double>(theta_acc / z);
    res.edge_marginal.resize(E);
    for (int e = 0; e < E; ++e) res.edge_marginal[e] = static_cast<double>(edge_acc[e] / z);
    res.event_prob.resize(events.size());
    for (std::size_t i = 0; i < events.size(); ++i)
        res.event_prob[i] = static_cast<double>(event_acc[i] / z);

    const double qi = std::round(q);
    if (qi == q && qi >= 2.0) {
        if (wired) {
            res.origin_marginal = origin_marginal_from_connectivity(res.theta, static_cast<int>(qi)).prob;
        } else {
            res.origin_marginal.assign(static_cast<std::size_t>(qi), 1.0 / qi);
        }
    } else if (qi == q && qi == 1.0) {
        res.origin_marginal = {1.0};
    }
    return res;
}

// Exact origin marginal by direct Potts Boltzmann sums,
// H = -sum_e J_e delta(sigma_x, sigma_y), ghost fixed to state 0 under wired.
inline std::vector<double> spin_enumerate(const Lattice& lat, const BondMap& bonds, int q,
                                          bool wired, long long config_cap = 100000000) {
    if (q < 1) throw std::invalid_argument("spin_enumerate: q must be >= 1");
    if (wired != lat.has_ghost)
        throw std::invalid_argument("spin_enumerate: wired flag must match the lattice's ghost flag");
    const int V = static_cast<int>(lat.n_sites);
    double n_cfg_f = std::pow(static_cast<double>(q), V);
    if (n_cfg_f > static_cast<double>(config_cap))
        throw CapExceeded("spin_enumerate: q^V = " + std::to_string(n_cfg_f) +
                          " exceeds the spin enumeration cap of " + std::to_string(config_cap));
    const long long n_cfg = static_cast<long long>(n_cfg_f + 0.5);
    const int E = static_cast<int>(lat.n_edges());
    const int origin = lat.origin();

    std::vector<int> spin(V + 1, 0);  // last slot is the ghost, pinned to 0
    double max_lw = kLogZero, z = 0.0;
    std::vector<double> tally(static_cast<std::size_t>(q), 0.0);
    for (long long cfg = 0; cfg < n_cfg; ++cfg) {
        double lw = 0.0;
        for (int e = 0; e < E; ++e) {
            int u = lat.edges[e][0], v = lat.edges[e][1];
            if (spin[u] == spin[v]) lw += bonds.coupling[e];
        }
        if (lw > max_lw) {
            const double f = std::exp(max_lw - lw);
            z *= f;
            for (auto& t : tally) t *= f;
            max_lw = lw;
        }
        const double w = std::exp(lw - max_lw);
        z += w;
        tally[spin[origin]] += w;
        // odometer
        for (int v = 0; v < V; ++v) {
            if (++spin[v] < q) break;
            spin[v] = 0;
        }
    }
    for (auto& t : tally) t /= z;
    return tally;
}

struct DominationRow {
    EventSpec event;
    double p_strong = 0.0;
    double p_weak = 0.0;
    bool ok = false;
};

struct DominationReport {
    std::vector<DominationRow> rows;
    bool pass = true;
};

// Event-wise FKG comparison of two bond maps on the same lattice,
// bonds_strong >= bonds_weak edgewise. P_strong(A) >= P_weak(A) - tol must
// hold for every increasing event in the list.
inline DominationReport check_event_domination(const Lattice& lat, const BondMap& bonds_strong,
                                               const BondMap& bonds_weak, double q,
                                               const std::vector<EventSpec>& events,
                                               int edge_cap = 24, double tol = 1e-12) {
    if (bonds_strong.n_edges() != lat.n_edges() || bonds_weak.n_edges() != lat.n_edges())
        throw std::invalid_argument("check_event_domination: bond map size mismatch");
    for (long long e = 0; e < lat.n_edges(); ++e)
        if (bonds_strong.coupling[e] < bonds_weak.coupling[e])
            throw std::invalid_argument(
                "check_event_domination: bond maps are not edgewise comparable");
    const bool wired = lat.has_ghost;
    ExactResult a = enumerate_fk(lat, bonds_strong, q, wired, edge_cap, events);
    ExactResult b = enumerate_fk(lat, bonds_weak, q, wired, edge_cap, events);
    DominationReport rep;
    for (std::size_t i = 0; i < events.size(); ++i) {
        DominationRow row;
        row.event = events[i];
        row.p_strong = a.event_prob[i];
        row.p_weak = b.event_prob[i];
        row.ok = row.p_strong >= row.p_weak - tol;
        rep.pass = rep.pass && row.ok;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace rpt

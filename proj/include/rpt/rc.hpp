#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rpt/bonds.hpp"
#include "rpt/lattice.hpp"
#include "rpt/union_find.hpp"

namespace rpt {

// One occupation bit per edge (ghost edges included when present).
using EdgeConfig = std::vector<std::uint8_t>;

// Distinguished log of an exactly-zero weight.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// Number of connected components of the occupied-edge subgraph; isolated
// vertices count as clusters. Under wired, the ghost is an ordinary vertex.
inline long long cluster_count(const Lattice& lat, const EdgeConfig& eta, bool wired,
                               UnionFind* scratch = nullptr) {
    if (static_cast<long long>(eta.size()) != lat.n_edges())
        throw std::invalid_argument("cluster_count: eta length mismatch");
    if (wired && !lat.has_ghost)
        throw std::invalid_argument("cluster_count: wired flag requires a ghost lattice");
    const long long n = wired ? lat.n_vertices() : lat.n_sites;
    const long long ne = wired ? lat.n_edges() : lat.n_lattice_edges;
    UnionFind local;
    UnionFind& uf = scratch ? *scratch : local;
    uf.reset(static_cast<std::size_t>(n));
    for (long long e = 0; e < ne; ++e)
        if (eta[e]) uf.merge(lat.edges[e][0], lat.edges[e][1]);
    return static_cast<long long>(uf.count());
}

// Natural log of the unnormalized FK weight
//   prod_e p_e^{eta_e} (1-p_e)^{1-eta_e} * q^{C(eta)}.
inline double log_weight(const Lattice& lat, const BondMap& bonds, const EdgeConfig& eta,
                         double q) {
    if (q <= 0.0 || std::isnan(q)) throw std::invalid_argument("log_weight: q must be > 0");
    if (static_cast<long long>(eta.size()) != lat.n_edges())
        throw std::invalid_argument("log_weight: eta length mismatch");
    const bool wired = lat.has_ghost;
    const long long ne = wired ? lat.n_edges() : lat.n_lattice_edges;
    double lw = 0.0;
    for (long long e = 0; e < ne; ++e) {
        const double p = bonds.prob[e];
        if (eta[e]) {
            if (p == 0.0) return kLogZero;
            lw += std::log(p);
        } else {
            if (p >= 1.0) return kLogZero;
            lw += std::log1p(-p);
        }
    }
    lw += static_cast<double>(cluster_count(lat, eta, wired)) * std::log(q);
    return lw;
}

// Length-q probability vector of the origin spin plus batch-mean errors and
// the theta (origin-to-ghost connectivity) diagnostic.
struct MarginalEstimate {
    std::vector<double> prob;
    std::vector<double> se;
    double theta = 0.0;
    double theta_se = 0.0;
    double ess = 0.0;
    long long n_samples = 0;
    std::uint64_t seed = 0;
    int stream = 0;
    std::string rng_name;
};

// Spin marginal induced by FK connectivity under wired-to-plus conditions:
// P(plus) = theta + (1-theta)/q, every other state (1-theta)/q.
inline MarginalEstimate origin_marginal_from_connectivity(double theta, int q) {
    if (theta < 0.0 || theta > 1.0)
        throw std::invalid_argument("origin_marginal_from_connectivity: theta outside [0,1]");
    if (q < 2) throw std::invalid_argument("origin_marginal_from_connectivity: q must be >= 2");
    MarginalEstimate m;
    m.theta = theta;
    const double rest = (1.0 - theta) / q;
    m.prob.assign(static_cast<std::size_t>(q), rest);
    m.prob[0] = theta + rest;
    m.se.assign(static_cast<std::size_t>(q), 0.0);
    return m;
}

// Total-variation distance of a marginal from the uniform q-vector, with
// crude error propagation from the per-component standard errors.
inline std::pair<double, double> tv_from_uniform(const MarginalEstimate& m, int q) {
    if (static_cast<int>(m.prob.size()) != q)
        throw std::invalid_argument("tv_from_uniform: marginal length != q");
    double tv = 0.0, var = 0.0;
    for (int k = 0; k < q; ++k) {
        tv += std::abs(m.prob[k] - 1.0 / q);
        if (!m.se.empty()) var += m.se[k] * m.se[k];
    }
    return {0.5 * tv, 0.5 * std::sqrt(var)};
}

}  // namespace rpt

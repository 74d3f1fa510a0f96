#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rpt/lattice.hpp"

namespace rpt {

// p_e = 1 - exp(-J_e); exactly 0 at J_e = 0.
inline double edge_probability(double coupling) {
    if (coupling < 0.0 || std::isnan(coupling))
        throw std::invalid_argument("edge_probability: coupling must be >= 0");
    if (coupling == 0.0) return 0.0;
    return -std::expm1(-coupling);
}

// Self-dual transition coupling of the planar q-state Potts model,
// J_c = ln(1 + sqrt(q)).
inline double selfdual_coupling(double q) {
    if (q < 1.0) throw std::invalid_argument("selfdual_coupling: q must be >= 1");
    return std::log1p(std::sqrt(q));
}

// Per-edge couplings: J everywhere, eps*J on the cutset edges.
struct BondMap {
    double base_coupling = 0.0;
    double eps = 1.0;
    std::vector<double> coupling;  // J_e per edge
    std::vector<double> prob;      // p_e = 1 - exp(-J_e)
    std::vector<char> weak;        // edge in gamma with eps < 1
    std::vector<int> gamma;        // cutset edge ids (copy; possibly empty)

    long long n_edges() const { return static_cast<long long>(coupling.size()); }
};

inline BondMap make_bonds(const Lattice& lat, double J, const Cutset* cut = nullptr,
                          double eps = 1.0) {
    if (J < 0.0) throw std::invalid_argument("make_bonds: J must be >= 0");
    if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("make_bonds: eps must lie in [0,1]");
    BondMap b;
    b.base_coupling = J;
    b.eps = eps;
    b.coupling.assign(static_cast<std::size_t>(lat.n_edges()), J);
    b.weak.assign(static_cast<std::size_t>(lat.n_edges()), 0);
    if (cut) {
        b.gamma = cut->gamma;
        for (int e : cut->gamma) {
            b.coupling[e] = eps * J;
            if (eps < 1.0) b.weak[e] = 1;
        }
    }
    b.prob.resize(b.coupling.size());
    for (std::size_t e = 0; e < b.coupling.size(); ++e) b.prob[e] = edge_probability(b.coupling[e]);
    return b;
}

// Diagnostic scale of the effective boundary term induced by the weakened
// cutset: 2d * eps * |gamma|.
inline double boundary_term_scale(const Lattice& lat, const BondMap& bonds) {
    return 2.0 * lat.dim * bonds.eps * static_cast<double>(bonds.gamma.size());
}

}  // namespace rpt

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rpt/bonds.hpp"
#include "rpt/lattice.hpp"
#include "rpt/rc.hpp"
#include "rpt/stats.hpp"
#include "rpt/union_find.hpp"

namespace rpt {

enum class BoundaryMode { Free, WiredGhost, WeaklyWiredGhost, Diagonal, WeaklyWiredAnnulus };

inline const char* to_string(BoundaryMode m) {
    switch (m) {
        case BoundaryMode::Free: return "free";
        case BoundaryMode::WiredGhost: return "wired-ghost";
        case BoundaryMode::WeaklyWiredGhost: return "weakly-wired-ghost";
        case BoundaryMode::Diagonal: return "diagonal";
        case BoundaryMode::WeaklyWiredAnnulus: return "weakly-wired-annulus";
    }
    return "?";
}

enum class InitMode { Auto, Random, OrderedPlus };
enum class Kernel { SwendsenWang, HeatBath };

struct ChainConfig {
    long long sweeps = 120000;   // total, burn-in included
    long long burnin = 20000;
    long long thinning = 1;
    std::uint64_t seed = 1;
    int stream = 0;
    InitMode init = InitMode::Auto;
    Kernel kernel = Kernel::SwendsenWang;
    int n_batches = 20;
    bool collect_edge_marginals = false;

    void validate() const {
        if (burnin < 0 || burnin >= sweeps)
            throw std::invalid_argument("ChainConfig: burn-in must lie in [0, sweeps)");
        if (thinning < 1) throw std::invalid_argument("ChainConfig: thinning must be >= 1");
    }
};

inline constexpr const char* kRngName = "mt19937_64/splitmix64-streams";

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent streams: the stream id perturbs the seed through splitmix64
// before it reaches the generator.
inline std::mt19937_64 make_rng(std::uint64_t seed, int stream) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(static_cast<std::uint64_t>(stream) + 0x51ED2701ull)));
}

struct ChainResult {
    MarginalEstimate marginal;
    std::vector<double> edge_mean;  // filled when collect_edge_marginals is set
    std::vector<double> edge_se;
};

// Edwards-Sokal cluster sampler over the joint spin/edge system with
// heterogeneous bonds. The ghost, when present, carries the plus state and is
// never recolored.
class Sampler {
public:
    Sampler(const Lattice& lat, const BondMap& bonds, int q, std::uint64_t seed, int stream)
        : lat_(lat), bonds_(bonds), q_(q), rng_(make_rng(seed, stream)),
          uf_(static_cast<std::size_t>(lat.n_vertices())),
          occ_(static_cast<std::size_t>(lat.n_edges()), 0),
          color_(static_cast<std::size_t>(lat.n_vertices()), -1),
          spin_(static_cast<std::size_t>(lat.n_sites), 0) {
        if (q < 1) throw std::invalid_argument("Sampler: q must be >= 1");
        adj_.resize(static_cast<std::size_t>(lat.n_sites));
        const long long ne = active_edges();
        for (long long e = 0; e < ne; ++e) {
            const auto& [u, v] = lat_.edges[e];
            if (u < lat_.n_sites) adj_[u].push_back({v, static_cast<int>(e)});
            if (v < lat_.n_sites) adj_[v].push_back({u, static_cast<int>(e)});
        }
    }

    void init(InitMode mode) {
        bool ordered = mode == InitMode::OrderedPlus ||
                       (mode == InitMode::Auto && lat_.has_ghost && bonds_.eps >= 0.5);
        if (ordered) {
            std::fill(spin_.begin(), spin_.end(), 0);
        } else {
            std::uniform_int_distribution<int> pick(0, q_ - 1);
            for (auto& s : spin_) s = pick(rng_);
        }
    }

    // One Swendsen-Wang sweep: bond draw, cluster build, cluster recoloring.
    void sw_sweep() {
        const long long ne = active_edges();
        uf_.reset(static_cast<std::size_t>(n_active_vertices()));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (long long e = 0; e < ne; ++e) {
            const auto& [u, v] = lat_.edges[e];
            const int su = spin_of(u), sv = spin_of(v);
            bool on = su == sv && bonds_.prob[e] > 0.0 && unif(rng_) < bonds_.prob[e];
            occ_[e] = on;
            if (on) uf_.merge(u, v);
        }
        last_connected_ = lat_.has_ghost && uf_.connected(lat_.origin(), lat_.ghost());
        std::fill(color_.begin(), color_.end(), -1);
        if (lat_.has_ghost) color_[uf_.find(lat_.ghost())] = 0;
        std::uniform_int_distribution<int> pick(0, q_ - 1);
        for (int v = 0; v < lat_.n_sites; ++v) {
            const int r = uf_.find(v);
            if (color_[r] < 0) color_[r] = pick(rng_);
            spin_[v] = color_[r];
        }
    }

    // Single-site heat bath; same stationary law, used as a dynamics
    // cross-check. Connectivity is still measured from a bond draw.
    void heat_bath_sweep() {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<double> w(static_cast<std::size_t>(q_));
        for (int v = 0; v < lat_.n_sites; ++v) {
            for (int k = 0; k < q_; ++k) w[k] = 0.0;
            for (auto [nbr, e] : adj_[v]) w[spin_of(nbr)] += bonds_.coupling[e];
            double tot = 0.0;
            for (int k = 0; k < q_; ++k) {
                w[k] = std::exp(w[k]);
                tot += w[k];
            }
            double u = unif(rng_) * tot;
            int k = 0;
            while (k + 1 < q_ && u > w[k]) u -= w[k], ++k;
            spin_[v] = k;
        }
        draw_bonds();
    }

    bool origin_connected() const { return last_connected_; }
    int origin_spin() const { return spin_[lat_.origin()]; }
    const std::vector<int>& spins() const { return spin_; }
    const EdgeConfig& bonds_drawn() const { return occ_; }

private:
    long long active_edges() const { return lat_.has_ghost ? lat_.n_edges() : lat_.n_lattice_edges; }
    long long n_active_vertices() const { return lat_.n_vertices(); }
    int spin_of(int v) const { return v < lat_.n_sites ? spin_[v] : 0; }

    // conditional bond draw given the spins (for connectivity measurement
    // under the heat-bath kernel)
    void draw_bonds() {
        const long long ne = active_edges();
        uf_.reset(static_cast<std::size_t>(n_active_vertices()));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (long long e = 0; e < ne; ++e) {
            const auto& [u, v] = lat_.edges[e];
            bool on = spin_of(u) == spin_of(v) && bonds_.prob[e] > 0.0 && unif(rng_) < bonds_.prob[e];
            occ_[e] = on;
            if (on) uf_.merge(u, v);
        }
        last_connected_ = lat_.has_ghost && uf_.connected(lat_.origin(), lat_.ghost());
    }

    const Lattice& lat_;
    const BondMap& bonds_;
    int q_;
    std::mt19937_64 rng_;
    UnionFind uf_;
    EdgeConfig occ_;
    std::vector<int> color_;
    std::vector<int> spin_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
    bool last_connected_ = false;
};

// Burn-in, then record the origin state and origin-ghost connectivity every
// thinning interval. Errors are batch means over >= 20 batches.
inline ChainResult run_chain(const Lattice& lat, const BondMap& bonds, int q,
                             const ChainConfig& cfg) {
    cfg.validate();
    Sampler s(lat, bonds, q, cfg.seed, cfg.stream);
    s.init(cfg.init);
    auto step = [&] {
        if (cfg.kernel == Kernel::SwendsenWang) s.sw_sweep();
        else s.heat_bath_sweep();
    };
    for (long long i = 0; i < cfg.burnin; ++i) step();

    const long long n_meas = (cfg.sweeps - cfg.burnin) / cfg.thinning;
    std::vector<double> theta_series;
    std::vector<int> origin_series;
    theta_series.reserve(static_cast<std::size_t>(n_meas));
    origin_series.reserve(static_cast<std::size_t>(n_meas));
    const long long E = lat.has_ghost ? lat.n_edges() : lat.n_lattice_edges;
    std::vector<std::uint8_t> edge_series;
    if (cfg.collect_edge_marginals)
        edge_series.reserve(static_cast<std::size_t>(n_meas * E));

    for (long long i = 0; i < n_meas; ++i) {
        for (long long t = 0; t < cfg.thinning; ++t) step();
        theta_series.push_back(s.origin_connected() ? 1.0 : 0.0);
        origin_series.push_back(s.origin_spin());
        if (cfg.collect_edge_marginals)
            edge_series.insert(edge_series.end(), s.bonds_drawn().begin(),
                               s.bonds_drawn().begin() + E);
    }

    ChainResult res;
    MarginalEstimate& m = res.marginal;
    m.n_samples = n_meas;
    m.seed = cfg.seed;
    m.stream = cfg.stream;
    m.rng_name = kRngName;
    const BatchStats ts = batch_means(theta_series, cfg.n_batches);
    m.theta = ts.mean;
    m.theta_se = ts.se;
    m.ess = ts.ess;
    m.prob.resize(static_cast<std::size_t>(q));
    m.se.resize(static_cast<std::size_t>(q));
    std::vector<double> ind(theta_series.size());
    for (int k = 0; k < q; ++k) {
        for (std::size_t i = 0; i < origin_series.size(); ++i)
            ind[i] = origin_series[i] == k ? 1.0 : 0.0;
        const BatchStats bs = batch_means(ind, cfg.n_batches);
        m.prob[k] = bs.mean;
        m.se[k] = bs.se;
    }
    if (cfg.collect_edge_marginals) {
        res.edge_mean.resize(static_cast<std::size_t>(E));
        res.edge_se.resize(static_cast<std::size_t>(E));
        for (long long e = 0; e < E; ++e) {
            for (long long i = 0; i < n_meas; ++i) ind[i] = edge_series[i * E + e];
            const BatchStats bs = batch_means(ind, cfg.n_batches);
            res.edge_mean[e] = bs.mean;
            res.edge_se[e] = bs.se;
        }
    }
    return res;
}

// Lattice + cutset + bonds for one experiment geometry.
struct ModelSetup {
    Lattice lat;
    Cutset cut;
    BondMap bonds;
    bool has_cutset = false;
};

// Outer box of side inner_L + 2w, ghost-wired at full strength on the
// outermost boundary, eps-weakened cutset of radius r around the inner box.
inline ModelSetup annulus_embed(int d, int inner_L, int w, int r, double J, double eps) {
    if (w < 0) throw std::invalid_argument("annulus_embed: w must be >= 0");
    if (inner_L % 2 == 0) throw std::invalid_argument("annulus_embed: inner side must be odd");
    if (2 * r + 1 > inner_L)
        throw std::invalid_argument("annulus_embed: cutset must fit inside the inner box");
    ModelSetup m;
    m.lat = build_lattice(d, inner_L + 2 * w, true);
    m.cut = build_cutset(m.lat, r);
    m.bonds = make_bonds(m.lat, J, &m.cut, eps);
    m.has_cutset = true;
    return m;
}

inline ModelSetup build_model(int d, int L, BoundaryMode mode, int r, double J, double eps,
                              int annulus_w = 0) {
    ModelSetup m;
    switch (mode) {
        case BoundaryMode::Free:
            m.lat = build_lattice(d, L, false);
            m.bonds = make_bonds(m.lat, J);
            break;
        case BoundaryMode::WiredGhost:
            m.lat = build_lattice(d, L, true);
            m.bonds = make_bonds(m.lat, J);
            break;
        case BoundaryMode::WeaklyWiredGhost:
            m.lat = build_lattice(d, L, true);
            m.cut = build_cutset(m.lat, r);
            m.bonds = make_bonds(m.lat, J, &m.cut, eps);
            m.has_cutset = true;
            break;
        case BoundaryMode::Diagonal:
            m.lat = build_lattice(d, L, true);
            m.cut = boundary_cutset(m.lat);
            m.bonds = make_bonds(m.lat, J, &m.cut, eps);
            m.has_cutset = true;
            break;
        case BoundaryMode::WeaklyWiredAnnulus:
            return annulus_embed(d, L, annulus_w, r, J, eps);
    }
    return m;
}

}  // namespace rpt

#pragma once

#include <array>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace rpt {

// Finite d-dimensional box graph with open (non-periodic) boundary.
// Vertices are indexed row-major over coordinates: index = ((c0*L + c1)*L + c2)...
// Optionally a ghost vertex (index n_sites) is attached to every boundary
// vertex, one ghost edge per missing lattice neighbor, so a d=2 corner
// carries two ghost edges. Ghost edges are appended after the lattice edges.
struct Lattice {
    int dim = 0;
    int side = 0;
    long long n_sites = 0;
    bool has_ghost = false;
    long long n_lattice_edges = 0;  // edges among real sites; ghost edges follow
    std::vector<std::array<int, 2>> edges;
    std::vector<int> boundary;  // vertices with fewer than 2d lattice neighbors

    int ghost() const { return static_cast<int>(n_sites); }
    long long n_vertices() const { return n_sites + (has_ghost ? 1 : 0); }
    long long n_edges() const { return static_cast<long long>(edges.size()); }

    std::vector<int> coords(int v) const {
        std::vector<int> c(dim);
        for (int k = dim - 1; k >= 0; --k) {
            c[k] = v % side;
            v /= side;
        }
        return c;
    }

    int index(const std::vector<int>& c) const {
        int v = 0;
        for (int k = 0; k < dim; ++k) v = v * side + c[k];
        return v;
    }

    // Center vertex; the measurement site. Exact center when side is odd.
    int origin() const {
        std::vector<int> c(dim, (side - 1) / 2);
        return index(c);
    }

    bool is_boundary(int v) const {
        auto c = coords(v);
        for (int x : c)
            if (x == 0 || x == side - 1) return true;
        return false;
    }

    // Edge id for an unordered vertex pair, -1 if absent.
    int edge_between(int u, int v) const {
        if (u > v) std::swap(u, v);
        auto it = pair_to_edge_.find((static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v));
        return it == pair_to_edge_.end() ? -1 : it->second;
    }

    std::unordered_map<std::uint64_t, int> pair_to_edge_;
};

inline Lattice build_lattice(int d, int L, bool ghost) {
    if (d < 1) throw std::invalid_argument("build_lattice: d must be >= 1");
    if (L < 1) throw std::invalid_argument("build_lattice: L must be >= 1");
    Lattice lat;
    lat.dim = d;
    lat.side = L;
    lat.n_sites = 1;
    for (int k = 0; k < d; ++k) lat.n_sites *= L;
    lat.has_ghost = ghost;

    // stride per axis in row-major order
    std::vector<long long> stride(d, 1);
    for (int k = d - 2; k >= 0; --k) stride[k] = stride[k + 1] * L;

    auto add_edge = [&lat](int u, int v) {
        lat.edges.push_back({u, v});
        int a = u, b = v;
        if (a > b) std::swap(a, b);
        lat.pair_to_edge_[(static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b)] =
            static_cast<int>(lat.edges.size()) - 1;
    };

    for (int v = 0; v < lat.n_sites; ++v) {
        auto c = lat.coords(v);
        for (int k = 0; k < d; ++k)
            if (c[k] + 1 < L) add_edge(v, v + static_cast<int>(stride[k]));
    }
    lat.n_lattice_edges = static_cast<long long>(lat.edges.size());

    for (int v = 0; v < lat.n_sites; ++v)
        if (lat.is_boundary(v)) lat.boundary.push_back(v);

    if (ghost) {
        const int g = lat.ghost();
        for (int v : lat.boundary) {
            auto c = lat.coords(v);
            for (int k = 0; k < d; ++k) {
                if (c[k] == 0) lat.edges.push_back({v, g});
                if (c[k] == L - 1) lat.edges.push_back({v, g});
            }
        }
    }
    return lat;
}

// Separating cutset: all edges with exactly one endpoint in the centered box
// of side 2r+1. Weakening these is the experiment's knob.
struct Cutset {
    int radius = 0;
    std::vector<int> gamma;            // edge ids, ascending
    std::vector<int> interior;         // vertex ids inside the box
    std::vector<char> interior_mask;   // size n_sites
    bool at_boundary = false;          // gamma is the ghost-edge layer
};

inline Cutset build_cutset(const Lattice& lat, int r) {
    if (r < 0) throw std::invalid_argument("build_cutset: r must be >= 0");
    if (lat.side % 2 == 0) throw std::invalid_argument("build_cutset: L must be odd");
    if (2 * r + 1 >= lat.side)
        throw std::invalid_argument("build_cutset: inner box must lie strictly inside the lattice");
    Cutset cut;
    cut.radius = r;
    cut.interior_mask.assign(static_cast<std::size_t>(lat.n_sites), 0);
    const int c0 = (lat.side - 1) / 2;
    for (int v = 0; v < lat.n_sites; ++v) {
        auto c = lat.coords(v);
        bool inside = true;
        for (int x : c)
            if (x < c0 - r || x > c0 + r) { inside = false; break; }
        if (inside) {
            cut.interior.push_back(v);
            cut.interior_mask[v] = 1;
        }
    }
    for (int e = 0; e < lat.n_edges(); ++e) {
        const auto& [u, v] = lat.edges[e];
        bool iu = u < lat.n_sites && cut.interior_mask[u];
        bool iv = v < lat.n_sites && cut.interior_mask[v];
        if (iu != iv) cut.gamma.push_back(e);
    }
    return cut;
}

// Cutset placed directly at the lattice boundary: gamma is the ghost-edge
// layer itself, interior is every real site. Used by the diagonal-limit mode.
inline Cutset boundary_cutset(const Lattice& lat) {
    if (!lat.has_ghost) throw std::invalid_argument("boundary_cutset: lattice has no ghost");
    Cutset cut;
    cut.radius = (lat.side - 1) / 2;
    cut.at_boundary = true;
    cut.interior_mask.assign(static_cast<std::size_t>(lat.n_sites), 1);
    cut.interior.resize(static_cast<std::size_t>(lat.n_sites));
    for (int v = 0; v < lat.n_sites; ++v) cut.interior[v] = v;
    for (long long e = lat.n_lattice_edges; e < lat.n_edges(); ++e)
        cut.gamma.push_back(static_cast<int>(e));
    return cut;
}

// BFS from Int(gamma) avoiding gamma edges; true iff no exterior vertex and
// no ghost is reachable.
inline bool separation_check(const Lattice& lat, const Cutset& cut) {
    std::vector<char> in_gamma(static_cast<std::size_t>(lat.n_edges()), 0);
    for (int e : cut.gamma) in_gamma[e] = 1;
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(lat.n_vertices()));
    for (int e = 0; e < lat.n_edges(); ++e) {
        adj[lat.edges[e][0]].push_back({lat.edges[e][1], e});
        adj[lat.edges[e][1]].push_back({lat.edges[e][0], e});
    }
    std::vector<char> seen(static_cast<std::size_t>(lat.n_vertices()), 0);
    std::queue<int> bfs;
    for (int v : cut.interior) {
        seen[v] = 1;
        bfs.push(v);
    }
    auto inside = [&](int v) { return v < lat.n_sites && cut.interior_mask[v]; };
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (auto [w, e] : adj[v]) {
            if (in_gamma[e] || seen[w]) continue;
            if (!inside(w)) return false;
            seen[w] = 1;
            bfs.push(w);
        }
    }
    return true;
}

}  // namespace rpt

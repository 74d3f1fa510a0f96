#pragma once

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rpt/exact.hpp"
#include "rpt/rc.hpp"
#include "rpt/sampler.hpp"
#include "rpt/stats.hpp"

namespace rpt {

inline int worker_count() {
    if (const char* env = std::getenv("RPT_WORKERS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Run fn(i) for i in [0, n) on up to worker_count() threads; slot-indexed
// writes keep the reduction deterministic.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> cursor{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (int i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

struct CurvePoint {
    int L = 0;
    double theta = 0.0;
    double theta_se = 0.0;
    double tv = 0.0;
    double tv_se = 0.0;
    double boundary_scale = 0.0;  // 2d * eps * |gamma|
    long long n_samples = 0;      // 0 marks an exact point
};

struct RobustnessCurve {
    int d = 2;
    int q = 2;
    double J = 0.0;
    double eps = 1.0;
    BoundaryMode mode = BoundaryMode::WeaklyWiredGhost;
    int r_override = -1;  // -1: r = (L-3)/2
    std::vector<CurvePoint> points;
    double slope = 0.0;
    double slope_se = 0.0;
    std::string verdict;
};

// TV distance from the uniform marginal plus propagated error.
inline std::pair<double, double> tv_from_free(const MarginalEstimate& m, int q) {
    return tv_from_uniform(m, q);
}

namespace detail {

inline void finish_curve(RobustnessCurve& curve) {
    bool all_zero = true;
    for (const auto& p : curve.points) all_zero = all_zero && p.theta == 0.0;
    if (all_zero) {
        curve.verdict = "flat-at-zero";
        return;
    }
    std::vector<double> x, y, se;
    for (const auto& p : curve.points) {
        x.push_back(static_cast<double>(p.L));
        y.push_back(p.theta);
        se.push_back(p.theta_se);
    }
    const SlopeFit fit = wls_slope(x, y, se);
    curve.slope = fit.slope;
    curve.slope_se = fit.slope_se;
    if (!fit.ok) curve.verdict = "flat";
    else if (fit.slope - 2.0 * fit.slope_se > 0.0) curve.verdict = "increasing";
    else if (fit.slope + 2.0 * fit.slope_se < 0.0) curve.verdict = "decreasing";
    else curve.verdict = "flat";
}

}  // namespace detail

// One robustness curve theta(L) at fixed (d, q, J, eps, mode). Exact
// enumeration replaces sampling whenever the lattice fits the cap. Each L
// gets its own RNG stream: cfg.stream + point index.
inline RobustnessCurve robustness_scan(int d, int q, double J, double eps,
                                       const std::vector<int>& L_list, BoundaryMode mode,
                                       const ChainConfig& cfg, int enum_cap = 24,
                                       int r_override = -1, int annulus_w = 0) {
    if (L_list.empty()) throw std::invalid_argument("robustness_scan: empty L list");
    for (std::size_t i = 0; i < L_list.size(); ++i) {
        if (L_list[i] % 2 == 0) throw std::invalid_argument("robustness_scan: L must be odd");
        if (i > 0 && L_list[i] <= L_list[i - 1])
            throw std::invalid_argument("robustness_scan: L list must be strictly increasing");
    }
    RobustnessCurve curve;
    curve.d = d;
    curve.q = q;
    curve.J = J;
    curve.eps = eps;
    curve.mode = mode;
    curve.r_override = r_override;
    curve.points.resize(L_list.size());

    parallel_for(static_cast<int>(L_list.size()), [&](int i) {
        const int L = L_list[i];
        int r = r_override >= 0 ? r_override : std::max(0, (L - 3) / 2);
        ModelSetup m = build_model(d, L, mode, r, J, eps, annulus_w);
        CurvePoint pt;
        pt.L = L;
        pt.boundary_scale = boundary_term_scale(m.lat, m.bonds);
        if (m.lat.n_edges() <= enum_cap) {
            ExactResult ex = enumerate_fk(m.lat, m.bonds, q, m.lat.has_ghost, enum_cap);
            pt.theta = ex.theta;
            pt.theta_se = 0.0;
            pt.n_samples = 0;
        } else {
            ChainConfig pc = cfg;
            pc.stream = cfg.stream + i;
            ChainResult cr = run_chain(m.lat, m.bonds, q, pc);
            pt.theta = cr.marginal.theta;
            pt.theta_se = cr.marginal.theta_se;
            pt.n_samples = cr.marginal.n_samples;
        }
        // connectivity-induced marginal: TV identity tv = theta (1 - 1/q)
        pt.tv = pt.theta * (1.0 - 1.0 / q);
        pt.tv_se = pt.theta_se * (1.0 - 1.0 / q);
        curve.points[i] = pt;
    });
    detail::finish_curve(curve);
    return curve;
}

// Diagonal sequence: gamma sits at the lattice boundary, wired directly
// outside, no margin.
inline RobustnessCurve diagonal_limit_scan(int d, int q, double J, double eps,
                                           const std::vector<int>& L_list,
                                           const ChainConfig& cfg, int enum_cap = 24) {
    return robustness_scan(d, q, J, eps, L_list, BoundaryMode::Diagonal, cfg, enum_cap);
}

// Ising robustness counterpart: q = 2 below the critical temperature.
inline RobustnessCurve ising_contrast(double J_factor, double eps, const std::vector<int>& L_list,
                                      const ChainConfig& cfg, int enum_cap = 24) {
    if (J_factor <= 1.0)
        throw std::invalid_argument("ising_contrast: J_factor must exceed 1 (below T_c)");
    const double J = J_factor * selfdual_coupling(2.0);
    return robustness_scan(2, 2, J, eps, L_list, BoundaryMode::WeaklyWiredGhost, cfg, enum_cap);
}

}  // namespace rpt

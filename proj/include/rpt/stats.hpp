#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rpt {

// Mean and batch-means standard error of a correlated series.
struct BatchStats {
    double mean = 0.0;
    double se = 0.0;
    double ess = 0.0;
    int n_batches = 0;
};

inline BatchStats batch_means(const std::vector<double>& series, int n_batches = 20) {
    BatchStats s;
    const std::size_t n = series.size();
    if (n == 0) return s;
    double sum = 0.0;
    for (double x : series) sum += x;
    s.mean = sum / static_cast<double>(n);
    if (n_batches < 2 || n < static_cast<std::size_t>(2 * n_batches)) {
        // too short for batching: fall back to iid error
        double ss = 0.0;
        for (double x : series) ss += (x - s.mean) * (x - s.mean);
        const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
        s.se = std::sqrt(var / static_cast<double>(n));
        s.ess = static_cast<double>(n);
        s.n_batches = 1;
        return s;
    }
    const std::size_t b = n / static_cast<std::size_t>(n_batches);
    std::vector<double> bm(static_cast<std::size_t>(n_batches), 0.0);
    for (int k = 0; k < n_batches; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < b; ++i) acc += series[k * b + i];
        bm[k] = acc / static_cast<double>(b);
    }
    double bmean = 0.0;
    for (double x : bm) bmean += x;
    bmean /= n_batches;
    double bss = 0.0;
    for (double x : bm) bss += (x - bmean) * (x - bmean);
    const double bvar = bss / static_cast<double>(n_batches - 1);
    s.se = std::sqrt(bvar / static_cast<double>(n_batches));
    s.n_batches = n_batches;
    double ss = 0.0;
    for (double x : series) ss += (x - s.mean) * (x - s.mean);
    const double var_iid = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
    s.ess = s.se > 0.0 ? var_iid / (s.se * s.se) : static_cast<double>(n);
    return s;
}

// Weighted least-squares slope of y against x with per-point standard errors.
// Points with se = 0 get the smallest positive se present (or unit weight if
// every se vanishes).
struct SlopeFit {
    double slope = 0.0;
    double slope_se = 0.0;
    double intercept = 0.0;
    bool ok = false;
};

inline SlopeFit wls_slope(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& se) {
    if (x.size() != y.size() || x.size() != se.size())
        throw std::invalid_argument("wls_slope: length mismatch");
    SlopeFit f;
    if (x.size() < 2) return f;
    double floor = 0.0;
    for (double s : se)
        if (s > 0.0 && (floor == 0.0 || s < floor)) floor = s;
    if (floor == 0.0) floor = 1.0;
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = se[i] > 0.0 ? se[i] : floor;
        const double w = 1.0 / (s * s);
        sw += w;
        swx += w * x[i];
        swy += w * y[i];
        swxx += w * x[i] * x[i];
        swxy += w * x[i] * y[i];
    }
    const double det = sw * swxx - swx * swx;
    if (det <= 0.0) return f;
    f.slope = (sw * swxy - swx * swy) / det;
    f.intercept = (swxx * swy - swx * swxy) / det;
    f.slope_se = std::sqrt(sw / det);
    f.ok = true;
    return f;
}

}  // namespace rpt

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "icdof/schemes.hpp"

// Power sweeps and degrees-of-freedom extraction: the DoF of a scheme is
// estimated as the least-squares slope of achievable rate against log2(P)
// over the top of the power grid, where the O(1) terms of the rate
// expressions matter least.

namespace icdof {

struct RateCurve {
    std::string scheme;
    double alpha = 0;
    std::vector<double> power;  // strictly increasing
    std::vector<RatePair> points;
};

struct DofFit {
    double slope1 = 0, slope2 = 0;
    double se_slope1 = 0, se_slope2 = 0;
    std::size_t window_begin = 0, window_end = 0;  // [begin, end) indices used
    // Robustness companion: difference quotient of the top two grid points.
    double diff_quotient1 = 0, diff_quotient2 = 0;
};

namespace detail {

struct Ols {
    double slope = 0, stderr_slope = 0;
};

inline Ols ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0) throw std::invalid_argument("fit_dof: degenerate grid");
    Ols o;
    o.slope = sxy / sxx;
    const double intercept = my - o.slope * mx;
    double ssr = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (intercept + o.slope * x[i]);
        ssr += r * r;
    }
    if (n > 2) o.stderr_slope = std::sqrt(ssr / (static_cast<double>(n - 2) * sxx));
    return o;
}

}  // namespace detail

inline DofFit fit_dof(const RateCurve& curve, std::size_t window) {
    const std::size_t n = curve.power.size();
    if (n < 3 || curve.points.size() != n) throw std::invalid_argument("fit_dof: need at least 3 grid points");
    if (window < 3) throw std::invalid_argument("fit_dof: window must cover at least 3 points");
    window = std::min(window, n);
    for (std::size_t i = 1; i < n; ++i)
        if (!(curve.power[i] > curve.power[i - 1]))
            throw std::invalid_argument("fit_dof: degenerate grid (powers must be strictly increasing)");

    const std::size_t begin = n - window;
    std::vector<double> x(window), y1(window), y2(window);
    for (std::size_t i = 0; i < window; ++i) {
        x[i] = std::log2(curve.power[begin + i]);
        y1[i] = curve.points[begin + i].r1;
        y2[i] = curve.points[begin + i].r2;
    }
    const auto o1 = detail::ols_slope(x, y1);
    const auto o2 = detail::ols_slope(x, y2);

    DofFit f;
    f.slope1 = o1.slope;
    f.slope2 = o2.slope;
    f.se_slope1 = o1.stderr_slope;
    f.se_slope2 = o2.stderr_slope;
    f.window_begin = begin;
    f.window_end = n;
    const double dx = std::log2(curve.power[n - 1]) - std::log2(curve.power[n - 2]);
    f.diff_quotient1 = (curve.points[n - 1].r1 - curve.points[n - 2].r1) / dx;
    f.diff_quotient2 = (curve.points[n - 1].r2 - curve.points[n - 2].r2) / dx;
    return f;
}

// Runs one scheme over a power grid with shared alpha/trials/seed. Trials are
// parallelized inside each point; the result is deterministic under the seed.
inline RateCurve sweep(SchemeId id, const SchemeConfig& base, const std::vector<double>& p_grid) {
    if (p_grid.size() < 3) throw std::invalid_argument("sweep: need at least 3 grid points");
    for (std::size_t i = 1; i < p_grid.size(); ++i)
        if (!(p_grid[i] > p_grid[i - 1])) throw std::invalid_argument("sweep: grid must be strictly increasing");
    RateCurve curve;
    curve.scheme = scheme_name(id);
    curve.alpha = base.alpha;
    curve.power = p_grid;
    curve.points.reserve(p_grid.size());
    for (const double p : p_grid) {
        SchemeConfig cfg = base;
        cfg.power = p;
        curve.points.push_back(run_scheme(id, cfg));
    }
    return curve;
}

inline std::vector<double> db_grid(double pmin_db, double pmax_db, std::size_t points) {
    if (points < 2 || !(pmax_db > pmin_db)) throw std::invalid_argument("db_grid: bad range");
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double db = pmin_db + (pmax_db - pmin_db) * static_cast<double>(i) / static_cast<double>(points - 1);
        g[i] = std::pow(10.0, db / 10.0);
    }
    return g;
}

}  // namespace icdof

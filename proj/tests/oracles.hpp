#pragma once

// Test-only analytic oracles, independent of the library implementation
// paths they are used to check.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "ccg/quadrature.hpp"
#include "ccg/stats.hpp"

namespace oracle {

// Coarse grid scan followed by golden-section refinement of the bracket.
inline double maximize_on_interval(const std::function<double(double)>& f,
                                   double a, double b, int grid = 4096) {
    double best_x = a, best = f(a);
    for (int i = 1; i <= grid; ++i) {
        const double x = a + (b - a) * i / grid;
        const double v = f(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    double lo = std::max(a, best_x - (b - a) / grid);
    double hi = std::min(b, best_x + (b - a) / grid);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        }
    }
    return std::max(f1, f2);
}

// Survival function of the radial law with density proportional to
// t^{n-1} (1+t)^{-n-r}, via the compact substitution v = t/(1+t).
inline double radial_power_survival(int n, double r, double R) {
    const double w = R / (1.0 + R);
    auto f = [&](double v) {
        return std::pow(v, n - 1.0) * std::pow(1.0 - v, r - 1.0);
    };
    const double tail = ccg::num::adaptive_simpson(f, w, 1.0, 1e-14);
    return tail / std::exp(ccg::num::lbeta(n, r));
}

// Ordinary least squares slope of y against x.
inline double ols_slope(std::span<const double> x, std::span<const double> y) {
    const double mx = ccg::num::mean(x);
    const double my = ccg::num::mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

// Smallest eps with P(|chi_n / sqrt(n) - 1| >= eps) <= eps, solved on a fine
// grid with the exact chi-square CDF.
inline double chi_shell_epsilon(int n, double grid_step = 1e-4) {
    const double nd = n;
    for (double eps = grid_step; eps < 1.0; eps += grid_step) {
        const double lo = (1.0 - eps) * std::sqrt(nd);
        const double hi = (1.0 + eps) * std::sqrt(nd);
        const double p = ccg::num::chi_square_cdf(nd, lo * lo) +
                         ccg::num::chi_square_sf(nd, hi * hi);
        if (p <= eps) return eps;
    }
    return 1.0;
}

}  // namespace oracle

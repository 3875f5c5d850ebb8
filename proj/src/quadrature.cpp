#include "ccg/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace ccg::num {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) * (fa + 4.0 * fm + fb) / 6.0;
}

double simpson_rec(const std::function<double(double)>& f, double a, double fa,
                   double b, double fb, double m, double fm, double whole,
                   double eps, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1);
}

// 17-point composite Simpson, used only to size error budgets.
double crude_estimate(const std::function<double(double)>& f, double a,
                      double b) {
    const int k = 16;
    const double h = (b - a) / k;
    double s = f(a) + f(b);
    for (int i = 1; i < k; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double eps, int max_depth) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    return simpson_rec(f, a, fa, b, fb, m, fm, whole, eps, max_depth);
}

double integrate_halfline(const std::function<double(double)>& g, double tol) {
    if (!(tol > 0.0))
        throw std::invalid_argument("integrate_halfline: tol must be > 0");
    const double eps_rel = std::max(tol, 1e-13);
    double total = 0.0;
    double lo = 0.0, hi = 1.0;
    double prev_panel = -1.0;
    const int growth_limit = 64;
    for (int k = 0; k < growth_limit; ++k) {
        const double scale =
            std::max({std::fabs(crude_estimate(g, lo, hi)), total});
        const double panel =
            adaptive_simpson(g, lo, hi, 0.25 * eps_rel * scale);
        total += panel;
        if (total > 0.0 && prev_panel > 0.0 && panel < prev_panel) {
            const double q = panel / prev_panel;
            // Geometric extrapolation of the remaining mass.
            const double tail = panel * q / (1.0 - q);
            if (q < 0.9 && tail <= eps_rel * total) return total;
        }
        if (total == 0.0 && k > 8) return 0.0;  // identically zero so far
        prev_panel = panel;
        lo = hi;
        hi *= 2.0;
    }
    throw QuadratureError(
        "integrate_halfline: tail did not converge before cutoff growth limit");
}

}  // namespace ccg::num

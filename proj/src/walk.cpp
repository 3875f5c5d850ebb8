#include "ccg/walk.hpp"

#include <cmath>
#include <stdexcept>

namespace ccg::vol {

using num::Vec;

namespace {

// Largest t >= 0 with x + t*u still inside, to within tol. The certified
// sandwich guarantees exit before hi.
double chord_extent(const ConvexBody& body, const Vec& x, const Vec& u,
                    double hi, double tol) {
    Vec probe(x.size());
    auto at = [&](double t) -> const Vec& {
        for (std::size_t i = 0; i < x.size(); ++i) probe[i] = x[i] + t * u[i];
        return probe;
    };
    if (body.contains(at(hi)))
        throw std::runtime_error(
            "hit_and_run_step: outer radius certificate violated");
    double lo = 0.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (body.contains(at(mid)))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace

Vec hit_and_run_step(const ConvexBody& body, const Vec& x,
                     num::RngStream& rng) {
    if (static_cast<int>(x.size()) != body.dim)
        throw std::invalid_argument("hit_and_run_step: dimension mismatch");
    if (!body.contains(x))
        throw std::invalid_argument("hit_and_run_step: point not inside body");

    const Vec u = rng.unit_sphere(body.dim);
    Vec neg_u(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) neg_u[i] = -u[i];

    double center_dist = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = x[i] - body.interior_point[i];
        center_dist += d * d;
    }
    center_dist = std::sqrt(center_dist);
    const double bracket = center_dist + body.outer_radius * 1.0000001 + 1e-12;
    const double tol = 1e-9 * std::max(body.outer_radius, 1.0);

    const double t_plus = chord_extent(body, x, u, bracket, tol);
    const double t_minus = chord_extent(body, x, neg_u, bracket, tol);

    const double t = rng.uniform(-t_minus, t_plus);
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + t * u[i];
    return y;
}

std::vector<Vec> hit_and_run_chain(const ConvexBody& body, const Vec& start,
                                   long burn_in, long thin, std::size_t count,
                                   num::RngStream& rng) {
    Vec x = start;
    for (long i = 0; i < burn_in; ++i) x = hit_and_run_step(body, x, rng);
    std::vector<Vec> out;
    out.reserve(count);
    const long gap = std::max<long>(1, thin);
    for (std::size_t k = 0; k < count; ++k) {
        for (long i = 0; i < gap; ++i) x = hit_and_run_step(body, x, rng);
        out.push_back(x);
    }
    return out;
}

}  // namespace ccg::vol

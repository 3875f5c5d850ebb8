#include "ccg/volume.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ccg/parallel.hpp"
#include "ccg/stats.hpp"

namespace ccg::vol {

using num::Mat;
using num::Vec;

namespace {

// Distance from `from` to the boundary of the body along +-direction.
double boundary_distance(const ConvexBody& body, const Vec& from,
                         const Vec& direction) {
    Vec probe(from.size());
    auto inside = [&](double t) {
        for (std::size_t i = 0; i < from.size(); ++i)
            probe[i] = from[i] + t * direction[i];
        return body.contains(probe);
    };
    double lo = 0.0;
    double hi = 2.0 * body.outer_radius + 1e-9;
    if (inside(hi))
        throw std::runtime_error("round_body: outer certificate violated");
    for (int it = 0; it < 60 && hi - lo > 1e-12 * body.outer_radius; ++it) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

RoundResult round_body(const ConvexBody& body, std::size_t samples,
                       long walk_budget, num::RngStream& rng) {
    body.validate();
    const int n = body.dim;
    if (samples <= static_cast<std::size_t>(n))
        throw std::invalid_argument("round_body: need more samples than dim");

    num::RngStream walk_rng = rng.substream(0);
    const long burn = std::max<long>(walk_budget, static_cast<long>(n) * n);
    const auto chain = hit_and_run_chain(body, body.interior_point, burn,
                                         std::max(1, n), samples, walk_rng);

    Vec mu(n, 0.0);
    for (const auto& x : chain)
        for (int j = 0; j < n; ++j) mu[j] += x[j];
    for (auto& v : mu) v /= static_cast<double>(samples);
    Mat cov(n, n);
    for (const auto& x : chain)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k)
                cov.at(j, k) += (x[j] - mu[j]) * (x[k] - mu[k]);
    for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
            cov.at(j, k) /= static_cast<double>(samples);
            cov.at(k, j) = cov.at(j, k);
        }

    RoundResult out;
    try {
        out.map.linear = num::sym_inv_sqrt(cov);
    } catch (const std::domain_error&) {
        throw std::runtime_error(
            "round_body: singular sample covariance (walk budget too small)");
    }
    out.map.shift = num::matvec(out.map.linear, mu);
    for (auto& v : out.map.shift) v = -v;
    out.body = affine_image(body, out.map.linear, out.map.shift);

    // Probe the mapped body from the mapped sample mean (the origin).
    Vec center(n, 0.0);
    if (!out.body.contains(center)) center = out.body.interior_point;

    num::RngStream probe_rng = rng.substream(1);
    std::vector<Vec> dirs;
    for (int j = 0; j < n; ++j) {
        Vec e(n, 0.0);
        e[j] = 1.0;
        dirs.push_back(e);
        for (auto& v : e) v = -v;
        dirs.push_back(e);
    }
    for (int k = 0; k < 64; ++k) dirs.push_back(probe_rng.unit_sphere(n));

    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (const auto& d : dirs) {
        const double t = boundary_distance(out.body, center, d);
        rmin = std::min(rmin, t);
        rmax = std::max(rmax, t);
    }
    out.r_probe = rmin;
    out.R_probe = rmax;
    out.d_hat = rmax / rmin;

    // Tighten the mapped certificates with the probe center: the ball
    // B(center, rmin_cert) around an interior point stays inside only via the
    // certified transform, so keep those; record probes separately.
    return out;
}

VolumeEstimate volume_multiphase(const ConvexBody& body, double eps, double eta,
                                 num::RngStream& rng, int workers, int replicas,
                                 long max_total_steps, double probed_d) {
    body.validate();
    const int n = body.dim;
    if (n > 12)
        throw std::invalid_argument("volume_multiphase: desk scale is n <= 12");
    if (!(eps > 0.0 && eps < 1.0) || !(eta > 0.0 && eta < 1.0))
        throw std::invalid_argument("volume_multiphase: eps, eta in (0,1)");
    const double d_cert = body.outer_radius / body.inner_radius;
    const double roundness = probed_d > 0.0 ? probed_d : d_cert;
    if (roundness > 10.0)
        throw std::invalid_argument(
            "volume_multiphase: body too eccentric (round it first, need d <= 10)");
    if (replicas < 4)
        throw std::invalid_argument("volume_multiphase: need >= 4 replicas");

    const double r = body.inner_radius;
    const Vec& c = body.interior_point;
    const int phases =
        std::max(0, static_cast<int>(std::ceil(n * std::log2(d_cert))));
    const double base_volume = unit_ball_volume(n) * std::pow(r, n);
    const long burn_in = static_cast<long>(n) * n;
    const long thin = n;
    const double z = num::normal_quantile(1.0 - 0.5 * eta);

    VolumeEstimate est;
    est.phases = phases;
    est.base_volume = base_volume;
    est.burn_in = burn_in;
    est.thin = thin;
    est.replicas = replicas;

    if (phases == 0) {  // the body is its own inscribed ball
        est.value = base_volume;
        est.lo = est.hi = base_volume;
        return est;
    }

    std::size_t samples_per_phase = 512;
    long steps_used = 0;
    for (;;) {
        // counts[phase][replica]
        std::vector<std::vector<long>> counts(
            static_cast<std::size_t>(phases),
            std::vector<long>(static_cast<std::size_t>(replicas), 0));
        std::vector<long> calls(static_cast<std::size_t>(replicas), 0);

        par::for_index(static_cast<std::size_t>(replicas), workers,
                       [&](std::size_t rep) {
            long local_calls = 0;
            for (int i = 1; i <= phases; ++i) {
                const double radius_i =
                    r * std::pow(2.0, static_cast<double>(i) / n);
                const double radius_prev =
                    r * std::pow(2.0, static_cast<double>(i - 1) / n);
                ConvexBody phase_body = body;
                phase_body.outer_radius = std::min(body.outer_radius, radius_i);
                auto base_contains = body.contains;
                const Vec center = c;
                phase_body.contains =
                    [&local_calls, base_contains, center,
                     radius_i](std::span<const double> x) {
                        ++local_calls;
                        double s = 0.0;
                        for (std::size_t j = 0; j < x.size(); ++j) {
                            const double d = x[j] - center[j];
                            s += d * d;
                        }
                        if (s > radius_i * radius_i) return false;
                        return base_contains(x);
                    };
                num::RngStream sub = rng.substream(
                    static_cast<std::uint64_t>(rep) * 1000 + i);
                Vec x = c;
                for (long b = 0; b < burn_in; ++b)
                    x = hit_and_run_step(phase_body, x, sub);
                long hit = 0;
                for (std::size_t s = 0; s < samples_per_phase; ++s) {
                    for (long t = 0; t < thin; ++t)
                        x = hit_and_run_step(phase_body, x, sub);
                    double d2 = 0.0;
                    for (int j = 0; j < n; ++j) {
                        const double d = x[j] - c[j];
                        d2 += d * d;
                    }
                    if (d2 <= radius_prev * radius_prev) ++hit;
                }
                counts[i - 1][rep] = hit;
            }
            calls[rep] = local_calls;
        });

        for (long v : calls) est.oracle_calls += v;
        steps_used += static_cast<long>(replicas) * phases *
                      (burn_in + thin * static_cast<long>(samples_per_phase));

        // pooled fractions and per-replica volume estimates
        est.phase_fractions.clear();
        est.phase_ratios.clear();
        double value = base_volume;
        for (int i = 0; i < phases; ++i) {
            long total = 0;
            for (long v : counts[i]) total += v;
            const double frac =
                std::max(1.0, static_cast<double>(total)) /
                (static_cast<double>(replicas) * samples_per_phase);
            est.phase_fractions.push_back(frac);
            est.phase_ratios.push_back(1.0 / frac);
            value *= 1.0 / frac;
        }
        est.value = value;

        std::vector<double> rep_log(static_cast<std::size_t>(replicas), 0.0);
        bool degenerate = false;
        for (int rep = 0; rep < replicas; ++rep) {
            double lv = std::log(base_volume);
            for (int i = 0; i < phases; ++i) {
                if (counts[i][rep] == 0) {
                    degenerate = true;
                    break;
                }
                lv += std::log(static_cast<double>(samples_per_phase)) -
                      std::log(static_cast<double>(counts[i][rep]));
            }
            rep_log[rep] = lv;
        }
        double rel = 1.0;
        if (!degenerate) {
            const auto s = num::summarize_replicas(rep_log);
            rel = z * s.stderr_;
            est.rel_ci = rel;
            est.lo = value * std::exp(-rel);
            est.hi = value * std::exp(rel);
        }
        est.samples_per_phase = samples_per_phase;

        if (!degenerate && rel <= eps) return est;
        if (steps_used >= max_total_steps) {
            est.budget_exhausted = true;
            return est;
        }
        samples_per_phase *= 2;
    }
}

int hull_membership(const std::vector<Vec>& points, std::span<const double> x,
                    double tol, int max_iters) {
    const int n = static_cast<int>(x.size());
    const std::size_t m = points.size();
    if (m == 0) throw std::invalid_argument("hull_membership: no points");

    // Pairwise Frank-Wolfe for min over conv{+-u} of 0.5 |y - x|^2; the
    // iterate is a sparse convex combination over signed vertices.
    std::map<long, double> weight;  // signed index: +(i+1), -(i+1)
    auto vertex = [&](long code) {
        const double sgn = code > 0 ? 1.0 : -1.0;
        const Vec& u = points[static_cast<std::size_t>(std::labs(code)) - 1];
        Vec v(u);
        for (auto& w : v) w *= sgn;
        return v;
    };

    // start from the vertex closest in direction to x
    long start = 1;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        const double d = num::dot(points[i], x);
        if (d > best) {
            best = d;
            start = static_cast<long>(i + 1);
        }
        if (-d > best) {
            best = -d;
            start = -static_cast<long>(i + 1);
        }
    }
    weight[start] = 1.0;
    Vec y = vertex(start);

    const double tol2 = 0.5 * tol * tol;
    for (int it = 0; it < max_iters; ++it) {
        Vec g(n);  // gradient of 0.5|y-x|^2 is y - x
        for (int j = 0; j < n; ++j) g[j] = y[j] - x[j];
        const double f = 0.5 * num::dot(g, g);
        if (f <= tol2) return +1;

        // FW vertex: argmin <g, v> over signed vertices
        long fw_code = 1;
        double fw_val = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const double d = num::dot(g, points[i]);
            if (d < fw_val) {
                fw_val = d;
                fw_code = static_cast<long>(i + 1);
            }
            if (-d < fw_val) {
                fw_val = -d;
                fw_code = -static_cast<long>(i + 1);
            }
        }
        // away vertex: argmax <g, v> over the active set
        long away_code = 0;
        double away_val = -std::numeric_limits<double>::infinity();
        for (const auto& [code, w] : weight) {
            if (w <= 0.0) continue;
            const double d = num::dot(g, vertex(code));
            if (d > away_val) {
                away_val = d;
                away_code = code;
            }
        }

        // duality gap certifies a positive distance: f* >= f - gap
        const double gap = num::dot(g, y) - fw_val;
        if (f - gap > tol2) return -1;

        const Vec v_fw = vertex(fw_code);
        const Vec v_aw = vertex(away_code);
        Vec dir(n);
        for (int j = 0; j < n; ++j) dir[j] = v_fw[j] - v_aw[j];
        const double dn = num::dot(dir, dir);
        if (dn <= 0.0) return 0;
        double gamma = -num::dot(g, dir) / dn;
        const double gamma_max = weight[away_code];
        gamma = std::clamp(gamma, 0.0, gamma_max);
        if (gamma <= 0.0) return 0;

        weight[fw_code] += gamma;
        weight[away_code] -= gamma;
        if (weight[away_code] <= 1e-15) weight.erase(away_code);
        for (int j = 0; j < n; ++j) y[j] += gamma * dir[j];
    }
    return 0;
}

namespace {

HullRatioResult hull_ratio_impl(const std::vector<Vec>& points, int n,
                                std::size_t samples_per_replica, int replicas,
                                num::RngStream& rng, int workers) {
    if (n > 6)
        throw std::invalid_argument("hull_volume_ratio: desk scale is n <= 6");
    if (replicas < 2)
        throw std::invalid_argument("hull_volume_ratio: need >= 2 replicas");

    std::vector<double> fracs(static_cast<std::size_t>(replicas));
    std::vector<long> resampled(static_cast<std::size_t>(replicas), 0);
    par::for_index(fracs.size(), workers, [&](std::size_t rep) {
        num::RngStream sub = rng.substream(rep);
        long inside = 0;
        long bad = 0;
        for (std::size_t s = 0; s < samples_per_replica; ++s) {
            int cls = 0;
            do {
                Vec x = sub.unit_sphere(n);
                const double radius =
                    std::pow(sub.uniform(), 1.0 / static_cast<double>(n));
                for (auto& v : x) v *= radius;
                cls = hull_membership(points, x);
                if (cls == 0) ++bad;
            } while (cls == 0);
            if (cls > 0) ++inside;
        }
        fracs[rep] = static_cast<double>(inside) /
                     static_cast<double>(samples_per_replica);
        resampled[rep] = bad;
    });

    HullRatioResult out;
    out.n = n;
    out.points = points.size();
    double pooled = num::mean(fracs);
    out.ratio_root = std::pow(pooled, 1.0 / static_cast<double>(n));
    std::vector<double> roots(fracs.size());
    for (std::size_t i = 0; i < fracs.size(); ++i)
        roots[i] = std::pow(std::max(fracs[i], 1e-300),
                            1.0 / static_cast<double>(n));
    const auto s = num::summarize_replicas(roots);
    out.ci_lo = s.lo;
    out.ci_hi = s.hi;
    const double ratio_nd = static_cast<double>(points.size()) / n;
    out.reference_bound = std::sqrt(std::log1p(ratio_nd) / n);
    out.estimate_over_bound = out.ratio_root / out.reference_bound;
    for (long b : resampled) out.resampled += b;
    return out;
}

}  // namespace

HullRatioResult hull_volume_ratio(int n, std::size_t point_count,
                                  std::size_t samples_per_replica,
                                  int replicas, num::RngStream& rng,
                                  int workers) {
    num::RngStream prng = rng.substream(1000000);
    std::vector<Vec> points;
    points.reserve(point_count);
    for (std::size_t i = 0; i < point_count; ++i)
        points.push_back(prng.unit_sphere(n));
    return hull_ratio_impl(points, n, samples_per_replica, replicas, rng,
                           workers);
}

HullRatioResult hull_volume_ratio_points(const std::vector<Vec>& points,
                                         std::size_t samples_per_replica,
                                         int replicas, num::RngStream& rng,
                                         int workers) {
    if (points.empty())
        throw std::invalid_argument("hull_volume_ratio: empty point set");
    return hull_ratio_impl(points, static_cast<int>(points[0].size()),
                           samples_per_replica, replicas, rng, workers);
}

}  // namespace ccg::vol

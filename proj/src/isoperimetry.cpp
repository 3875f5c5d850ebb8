#include "ccg/isoperimetry.hpp"

#include <algorithm>
#include <cmath>

#include "ccg/parallel.hpp"

namespace ccg::isop {

using dist::DistributionSpec;
using num::Vec;

SetSpec SetSpec::halfspace(Vec theta, double offset) {
    SetSpec s;
    s.kind = Kind::halfspace;
    const double nn = num::norm2(theta);
    if (!(nn > 0.0)) throw std::invalid_argument("halfspace: zero normal");
    for (auto& v : theta) v /= nn;
    s.theta = std::move(theta);
    s.offset = offset / nn;
    return s;
}

SetSpec SetSpec::ball(double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be > 0");
    SetSpec s;
    s.kind = Kind::ball;
    s.radius = radius;
    return s;
}

BoundaryEstimate boundary_measure(const DistributionSpec& spec,
                                  const SetSpec& set, double eps,
                                  std::size_t samples_per_replica, int replicas,
                                  num::RngStream& rng, int workers) {
    if (!(eps > 0.0 && eps <= 0.1))
        throw std::invalid_argument(
            "boundary_measure: eps must lie in (0, 0.1] (shell resolution)");
    if (replicas < 2)
        throw std::invalid_argument("boundary_measure: need >= 2 replicas");
    if (set.kind == SetSpec::Kind::halfspace &&
        static_cast<int>(set.theta.size()) != spec.n)
        throw std::invalid_argument("boundary_measure: set dimension mismatch");

    struct Row {
        double full, half;
    };
    std::vector<Row> rows(static_cast<std::size_t>(replicas));
    par::for_index(rows.size(), workers, [&](std::size_t rep) {
        num::RngStream sub = rng.substream(rep);
        const auto batch = dist::sample(spec, samples_per_replica, sub);
        long base = 0, plus_half = 0, plus_full = 0;
        for (std::size_t i = 0; i < batch.count; ++i) {
            double v;
            double lim0, lim1, lim2;
            if (set.kind == SetSpec::Kind::halfspace) {
                v = num::dot(set.theta, batch.row(i));
                lim0 = set.offset;
            } else {
                v = num::norm2(batch.row(i));
                lim0 = set.radius;
            }
            lim1 = lim0 + 0.5 * eps;
            lim2 = lim0 + eps;
            if (v <= lim0) ++base;
            if (v <= lim1) ++plus_half;
            if (v <= lim2) ++plus_full;
        }
        const double inv = 1.0 / static_cast<double>(samples_per_replica);
        rows[rep].full = (plus_full - base) * inv / eps;
        rows[rep].half = (plus_half - base) * inv / (0.5 * eps);
    });

    std::vector<double> full(rows.size()), half(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        full[i] = rows[i].full;
        half[i] = rows[i].half;
    }
    const auto sf = num::summarize_replicas(full);
    const auto sh = num::summarize_replicas(half);

    BoundaryEstimate out;
    out.value = sf.mean;
    out.stderr_ = sf.stderr_;
    out.lo = sf.lo;
    out.hi = sf.hi;
    out.eps = eps;
    out.half_eps_value = sh.mean;
    const double scale = std::max(std::fabs(sf.mean), std::fabs(sh.mean));
    out.eps_too_large =
        std::fabs(sf.mean - sh.mean) >
        0.05 * scale + 3.0 * (sf.stderr_ + sh.stderr_);
    return out;
}

namespace {

struct MarginalProbe {
    double density = 0.0;
    double cdf = 0.0;
    double mass = 0.0;  // samples inside the differencing window
    bool unstable = false;
};

// CDF-difference density with Richardson extrapolation and a two-bandwidth
// consistency check, on a sorted marginal sample.
MarginalProbe probe_marginal(const std::vector<double>& sorted, double t) {
    const std::size_t N = sorted.size();
    const double sigma = std::sqrt(num::variance(sorted));
    const double b = sigma * std::pow(static_cast<double>(N), -0.2);
    auto cdf_at = [&](double x) {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
        return static_cast<double>(it - sorted.begin()) / static_cast<double>(N);
    };
    MarginalProbe probe;
    const double f_b = (cdf_at(t + b) - cdf_at(t - b)) / (2.0 * b);
    const double f_h = (cdf_at(t + 0.5 * b) - cdf_at(t - 0.5 * b)) / b;
    probe.cdf = cdf_at(t);
    probe.density = (4.0 * f_h - f_b) / 3.0;
    probe.mass = (cdf_at(t + b) - cdf_at(t - b)) * static_cast<double>(N);
    probe.unstable =
        std::fabs(f_h - f_b) > 0.25 * std::max(1e-300, std::max(f_h, f_b));
    return probe;
}

num::Vec cheeger_direction(int d, int n, num::RngStream& sub) {
    if (d < n) {
        num::Vec theta(n, 0.0);
        theta[d] = 1.0;  // coordinate axes first
        return theta;
    }
    return sub.unit_sphere(n);
}

std::vector<double> sorted_marginal(const DistributionSpec& spec,
                                    const num::Vec& theta, std::size_t N,
                                    num::RngStream& rng) {
    const auto batch = dist::sample(spec, N, rng);
    std::vector<double> proj(batch.count);
    for (std::size_t i = 0; i < batch.count; ++i)
        proj[i] = num::dot(theta, batch.row(i));
    std::sort(proj.begin(), proj.end());
    return proj;
}

}  // namespace

CheegerEstimate halfspace_cheeger(const DistributionSpec& spec,
                                  int direction_count,
                                  const std::vector<double>& t_grid,
                                  std::size_t samples_per_direction,
                                  num::RngStream& rng, int workers) {
    if (direction_count < 1)
        throw std::invalid_argument("halfspace_cheeger: need directions");
    const int n = spec.n;
    const std::size_t N = samples_per_direction;

    // Selection pass. The argmin over a few hundred noisy probes is biased
    // low, so the winning probe is re-estimated afterwards on a fresh
    // holdout sample of the same direction.
    std::vector<std::vector<CheegerProbe>> per_dir(
        static_cast<std::size_t>(direction_count));
    par::for_index(per_dir.size(), workers, [&](std::size_t d) {
        num::RngStream sub = rng.substream(2 * d);
        const Vec theta = cheeger_direction(static_cast<int>(d), n, sub);
        const auto proj = sorted_marginal(spec, theta, N, sub);
        for (double t : t_grid) {
            const MarginalProbe mp = probe_marginal(proj, t);
            CheegerProbe probe;
            probe.direction_id = static_cast<int>(d);
            probe.t = t;
            probe.cdf = mp.cdf;
            probe.density = mp.density;
            probe.window_mass = mp.mass;
            if (mp.mass < 100.0 || mp.unstable || mp.cdf <= 0.0 ||
                mp.cdf >= 1.0 || mp.density <= 0.0) {
                probe.skipped = true;
            } else {
                probe.ratio = mp.density / (mp.cdf * (1.0 - mp.cdf));
            }
            per_dir[d].push_back(probe);
        }
    });

    // Prefer well-populated probes for the argmin; fall back to any valid one.
    CheegerEstimate out;
    out.h_upper = std::numeric_limits<double>::infinity();
    const double eligible_mass = 800.0;
    double fallback = std::numeric_limits<double>::infinity();
    int fb_dir = 0;
    double fb_t = 0.0;
    for (std::size_t d = 0; d < per_dir.size(); ++d) {
        for (const auto& probe : per_dir[d]) {
            out.probes.push_back(probe);
            if (probe.skipped) continue;
            if (probe.window_mass >= eligible_mass && probe.ratio < out.h_upper) {
                out.h_upper = probe.ratio;
                out.best_direction = probe.direction_id;
                out.best_t = probe.t;
            }
            if (probe.ratio < fallback) {
                fallback = probe.ratio;
                fb_dir = probe.direction_id;
                fb_t = probe.t;
            }
        }
    }
    if (std::isinf(out.h_upper)) {
        if (std::isinf(fallback))
            throw std::runtime_error(
                "halfspace_cheeger: every probe was skipped "
                "(bandwidth instability)");
        out.h_upper = fallback;
        out.best_direction = fb_dir;
        out.best_t = fb_t;
    }

    // Holdout evaluation of the winner.
    {
        const std::size_t d = static_cast<std::size_t>(out.best_direction);
        num::RngStream sel = rng.substream(2 * d);
        const Vec theta = cheeger_direction(out.best_direction, n, sel);
        num::RngStream holdout = rng.substream(2 * d + 1);
        const auto proj = sorted_marginal(spec, theta, N, holdout);
        const MarginalProbe mp = probe_marginal(proj, out.best_t);
        if (mp.cdf > 0.0 && mp.cdf < 1.0 && mp.density > 0.0)
            out.h_upper = mp.density / (mp.cdf * (1.0 - mp.cdf));
    }
    return out;
}

CheegerBounds cheeger_lower_bounds(const conc::ShellStats& shell) {
    if (!(shell.var_norm_sq.mean > 0.0) || !(shell.mean_norm.mean > 0.0))
        throw std::invalid_argument("cheeger_lower_bounds: missing shell fields");
    CheegerBounds b;
    b.n = shell.n;
    const double nd = shell.n;
    b.kls = 1.0 / shell.mean_norm.mean;
    b.bobkov = std::pow(shell.var_norm_sq.mean, -0.25);
    b.eldan = std::pow(nd, -1.0 / 3.0) / std::sqrt(std::log(nd));
    b.gm_implied = std::pow(nd, -5.0 / 12.0);
    return b;
}

PoincareEstimate poincare_quotient(const DistributionSpec& spec,
                                   const ScalarField& f,
                                   const GradientField& grad_f,
                                   std::size_t samples_per_replica,
                                   int replicas, num::RngStream& rng,
                                   int workers) {
    if (replicas < 2)
        throw std::invalid_argument("poincare_quotient: need >= 2 replicas");
    struct Row {
        double var, grad_sq;
    };
    std::vector<Row> rows(static_cast<std::size_t>(replicas));
    par::for_index(rows.size(), workers, [&](std::size_t rep) {
        num::RngStream sub = rng.substream(rep);
        const auto batch = dist::sample(spec, samples_per_replica, sub);
        std::vector<double> fv(batch.count), gv(batch.count);
        for (std::size_t i = 0; i < batch.count; ++i) {
            fv[i] = f(batch.row(i));
            const Vec g = grad_f(batch.row(i));
            gv[i] = num::dot(g, g);
        }
        rows[rep] = {num::variance(fv), num::mean(gv)};
    });

    double var_sum = 0.0, grad_sum = 0.0;
    std::vector<double> quotients(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        var_sum += rows[i].var;
        grad_sum += rows[i].grad_sq;
        quotients[i] = rows[i].grad_sq / rows[i].var;
    }
    if (!(var_sum > 1e-14 * std::max(1.0, grad_sum)))
        throw std::runtime_error("poincare_quotient: vanishing variance");

    PoincareEstimate out;
    out.var_f = var_sum / replicas;
    out.grad_sq = grad_sum / replicas;
    out.quotient = out.grad_sq / out.var_f;
    const auto s = num::summarize_replicas(quotients);
    out.ci_lo = s.lo;
    out.ci_hi = s.hi;
    return out;
}

std::vector<PoincareProbe> poincare_probe_family(
    const DistributionSpec& spec, std::size_t samples_per_replica,
    int replicas, num::RngStream& rng, int workers) {
    const int n = spec.n;
    std::vector<PoincareProbe> out;

    num::RngStream dir_rng = rng.substream(1000);
    const Vec theta = dir_rng.unit_sphere(n);

    struct Def {
        std::string name;
        ScalarField f;
        GradientField g;
        bool lipschitz;
    };
    std::vector<Def> defs;
    {
        Vec e1(n, 0.0);
        e1[0] = 1.0;
        defs.push_back({"linear_e1",
                        [e1](std::span<const double> x) { return num::dot(e1, x); },
                        [e1](std::span<const double>) { return e1; }, true});
        defs.push_back({"linear_random",
                        [theta](std::span<const double> x) { return num::dot(theta, x); },
                        [theta](std::span<const double>) { return theta; }, true});
        defs.push_back({"coordinate_square",
                        [](std::span<const double> x) { return x[0] * x[0]; },
                        [n](std::span<const double> x) {
                            Vec g(n, 0.0);
                            g[0] = 2.0 * x[0];
                            return g;
                        },
                        false});
        defs.push_back({"norm_squared",
                        [](std::span<const double> x) {
                            double s = 0.0;
                            for (double v : x) s += v * v;
                            return s;
                        },
                        [](std::span<const double> x) {
                            Vec g(x.begin(), x.end());
                            for (auto& v : g) v *= 2.0;
                            return g;
                        },
                        false});
        const double delta = 0.1;
        defs.push_back({"smoothed_norm",
                        [delta](std::span<const double> x) {
                            double s = delta * delta;
                            for (double v : x) s += v * v;
                            return std::sqrt(s);
                        },
                        [delta](std::span<const double> x) {
                            double s = delta * delta;
                            for (double v : x) s += v * v;
                            const double r = std::sqrt(s);
                            Vec g(x.begin(), x.end());
                            for (auto& v : g) v /= r;
                            return g;
                        },
                        true});
    }

    for (std::size_t k = 0; k < defs.size(); ++k) {
        num::RngStream sub = rng.substream(k);
        PoincareProbe probe;
        probe.name = defs[k].name;
        probe.estimate = poincare_quotient(spec, defs[k].f, defs[k].g,
                                           samples_per_replica, replicas, sub,
                                           workers);
        probe.lipschitz = defs[k].lipschitz;
        if (probe.lipschitz)
            probe.d_inf_certificate = 1.0 / probe.estimate.var_f;
        out.push_back(std::move(probe));
    }
    return out;
}

double gaussian_halfspace_profile(double alpha, double eps) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("gaussian_halfspace_profile: alpha must be in (0,1)");
    if (eps < 0.0)
        throw std::domain_error("gaussian_halfspace_profile: eps must be >= 0");
    return num::normal_cdf(num::normal_quantile(alpha) + eps);
}

}  // namespace ccg::isop

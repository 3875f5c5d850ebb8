#include "ccg/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ccg::conc {

using dist::DistributionSpec;
using dist::Family;
using num::Mat;
using num::Vec;

namespace {

void require_moment_exists(const DistributionSpec& spec, double p) {
    if (spec.family == Family::sconcave_gc && p >= spec.r)
        throw MomentError(
            "moment does not exist: s-concave law has moments of order p < r "
            "only (p = " + std::to_string(p) + ", r = " + std::to_string(spec.r) +
            ")");
}

double batch_norm(std::span<const double> row, NormKind kind) {
    switch (kind) {
        case NormKind::l2: return num::norm2(row);
        case NormKind::l1: return num::norm1(row);
        case NormKind::linf: return num::norm_inf(row);
    }
    return 0.0;
}

// mean of |v|^p in a fixed pairwise order
double moment_pow(std::span<const double> v, double p) {
    std::vector<double> buf(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        buf[i] = std::pow(std::fabs(v[i]), p);
    return num::pairwise_sum(buf) / static_cast<double>(v.size());
}

MomentEstimate combine_replica_moments(const std::vector<double>& pow_means,
                                       double p, bool use_median) {
    MomentEstimate est;
    est.median_of_means = use_median;
    std::vector<double> roots(pow_means.size());
    for (std::size_t i = 0; i < roots.size(); ++i)
        roots[i] = std::pow(pow_means[i], 1.0 / p);
    const auto s = num::summarize_replicas(roots);
    est.stderr_ = s.stderr_;
    est.value = use_median ? std::pow(num::median_of(pow_means), 1.0 / p)
                           : std::pow(num::mean(pow_means), 1.0 / p);
    est.lo = est.value - (s.mean - s.lo);
    est.hi = est.value + (s.hi - s.mean);
    if (s.mean > 0.0 && s.stderr_ * std::sqrt(static_cast<double>(s.count)) >
                            0.5 * s.mean)
        est.unstable = true;
    return est;
}

struct DirectionalSearch {
    Vec direction;
    std::string provenance;
};

// Projected-gradient ascent of z -> mean |<z, x_i>|^p on the unit sphere,
// starting from `z`; the batch is row-major count x n.
double sphere_ascent(const std::vector<double>& data, std::size_t count, int n,
                     double p, Vec& z, int iters) {
    auto eval = [&](const Vec& dir) {
        double s = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            double d = 0.0;
            const double* row = data.data() + i * n;
            for (int j = 0; j < n; ++j) d += dir[j] * row[j];
            s += std::pow(std::fabs(d), p);
        }
        return s / static_cast<double>(count);
    };
    double best = eval(z);
    double step = 0.25;
    for (int it = 0; it < iters; ++it) {
        Vec grad(n, 0.0);
        for (std::size_t i = 0; i < count; ++i) {
            double d = 0.0;
            const double* row = data.data() + i * n;
            for (int j = 0; j < n; ++j) d += z[j] * row[j];
            const double w = p * std::pow(std::fabs(d), p - 1.0) *
                             (d >= 0.0 ? 1.0 : -1.0);
            for (int j = 0; j < n; ++j) grad[j] += w * row[j];
        }
        const double gn = num::norm2(grad);
        if (gn == 0.0) break;
        Vec cand(n);
        for (int j = 0; j < n; ++j) cand[j] = z[j] + step * grad[j] / gn;
        const double cn = num::norm2(cand);
        for (auto& v : cand) v /= cn;
        const double val = eval(cand);
        if (val > best) {
            best = val;
            z = cand;
            step *= 1.5;
        } else {
            step *= 0.5;
            if (step < 1e-6) break;
        }
    }
    return best;
}

DirectionalSearch search_best_direction(const std::vector<double>& data,
                                        std::size_t count, int n, double p,
                                        int random_directions,
                                        num::RngStream& rng) {
    auto eval = [&](const Vec& dir) {
        double s = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            double d = 0.0;
            const double* row = data.data() + i * n;
            for (int j = 0; j < n; ++j) d += dir[j] * row[j];
            s += std::pow(std::fabs(d), p);
        }
        return s / static_cast<double>(count);
    };

    DirectionalSearch out;
    double best = -1.0;
    for (int j = 0; j < n; ++j) {
        Vec e(n, 0.0);
        e[j] = 1.0;
        const double v = eval(e);
        if (v > best) {
            best = v;
            out.direction = e;
            out.provenance = "coordinate:" + std::to_string(j);
        }
    }
    for (int k = 0; k < random_directions; ++k) {
        const Vec z = rng.unit_sphere(n);
        const double v = eval(z);
        if (v > best) {
            best = v;
            out.direction = z;
            out.provenance = "random:" + std::to_string(k);
        }
    }
    Vec refined = out.direction;
    const double refined_val = sphere_ascent(data, count, n, p, refined, 40);
    if (refined_val > best) {
        out.direction = refined;
        out.provenance += "+ascent";
    }
    return out;
}

}  // namespace

std::vector<double> default_p_grid(int n) {
    std::vector<double> grid{1.0};
    const double top = 2.0 * std::ceil(std::sqrt(static_cast<double>(n)));
    for (double p = 2.0; p <= top; p *= 2.0) grid.push_back(p);
    return grid;
}

ShellStats shell_stats(const DistributionSpec& spec,
                       std::size_t samples_per_replica, int replicas,
                       const std::vector<double>& t_grid, num::RngStream& rng,
                       int workers) {
    if (!spec.isotropic)
        throw dist::SpecError("shell_stats: spec must be isotropic");
    if (replicas < 2)
        throw std::invalid_argument("shell_stats: need >= 2 replicas");

    const double sqrt_n = std::sqrt(static_cast<double>(spec.n));
    struct Row {
        double mean_norm, mean_sq, var_norm, var_sq, ratio;
        std::vector<long> counts;
    };
    std::vector<Row> rows(static_cast<std::size_t>(replicas));

    par::for_index(rows.size(), workers, [&](std::size_t rep) {
        num::RngStream sub = rng.substream(rep);
        const auto batch = dist::sample(spec, samples_per_replica, sub);
        std::vector<double> norm(batch.count), sq(batch.count);
        for (std::size_t i = 0; i < batch.count; ++i) {
            const double s = num::norm2(batch.row(i));
            norm[i] = s;
            sq[i] = s * s;
        }
        Row& row = rows[rep];
        row.mean_norm = num::mean(norm);
        row.mean_sq = num::mean(sq);
        row.var_norm = num::variance(norm);
        row.var_sq = num::variance(sq);
        row.ratio = row.var_sq / row.mean_sq;
        row.counts.assign(t_grid.size(), 0);
        for (double s : norm) {
            const double dev = std::fabs(s - sqrt_n);
            for (std::size_t ti = 0; ti < t_grid.size(); ++ti)
                if (dev >= t_grid[ti] * sqrt_n) ++row.counts[ti];
        }
    });

    auto collect = [&](auto&& get) {
        std::vector<double> v(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) v[i] = get(rows[i]);
        return num::summarize_replicas(v);
    };

    ShellStats out;
    out.n = spec.n;
    out.samples_per_replica = samples_per_replica;
    out.replicas = replicas;
    out.mean_norm = collect([](const Row& r) { return r.mean_norm; });
    out.mean_norm_sq = collect([](const Row& r) { return r.mean_sq; });
    out.var_norm = collect([](const Row& r) { return r.var_norm; });
    out.var_norm_sq = collect([](const Row& r) { return r.var_sq; });
    out.var_ratio = collect([](const Row& r) { return r.ratio; });

    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
        TailPoint pt;
        pt.t = t_grid[ti];
        std::vector<double> freq(rows.size());
        long total = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            total += rows[i].counts[ti];
            freq[i] = static_cast<double>(rows[i].counts[ti]) /
                      static_cast<double>(samples_per_replica);
        }
        const auto s = num::summarize_replicas(freq);
        pt.prob = s.mean;
        pt.ci_lo = std::max(0.0, s.lo);
        pt.ci_hi = std::min(1.0, s.hi);
        pt.count = total;
        pt.degenerate = (total == 0);
        out.tail.push_back(pt);
    }
    return out;
}

MomentEstimate strong_moment(const DistributionSpec& spec, double p,
                             std::size_t samples_per_replica, int replicas,
                             num::RngStream& rng, int workers) {
    if (!(p >= 1.0)) throw std::invalid_argument("strong_moment: p must be >= 1");
    require_moment_exists(spec, p);
    if (replicas < 2)
        throw std::invalid_argument("strong_moment: need >= 2 replicas");

    std::vector<double> pow_means(static_cast<std::size_t>(replicas));
    par::for_index(pow_means.size(), workers, [&](std::size_t rep) {
        num::RngStream sub = rng.substream(rep);
        const auto batch = dist::sample(spec, samples_per_replica, sub);
        std::vector<double> norms(batch.count);
        for (std::size_t i = 0; i < batch.count; ++i)
            norms[i] = num::norm2(batch.row(i));
        pow_means[rep] = moment_pow(norms, p);
    });
    return combine_replica_moments(pow_means, p, p > 8.0);
}

WeakMomentEstimate weak_moment(const DistributionSpec& spec, double p,
                               std::size_t samples_per_replica, int replicas,
                               int random_directions, num::RngStream& rng,
                               int workers) {
    if (!(p >= 1.0)) throw std::invalid_argument("weak_moment: p must be >= 1");
    require_moment_exists(spec, p);

    // Search on a dedicated substream (after all replica streams).
    num::RngStream search_rng = rng.substream(static_cast<std::uint64_t>(replicas));
    const std::size_t search_n = std::min<std::size_t>(samples_per_replica, 100000);
    const auto search_batch = dist::sample(spec, search_n, search_rng);
    num::RngStream cand_rng = rng.substream(replicas + 1);
    auto found = search_best_direction(search_batch.data, search_batch.count,
                                       spec.n, p, random_directions, cand_rng);

    std::vector<double> pow_means(static_cast<std::size_t>(replicas));
    par::for_index(pow_means.size(), workers, [&](std::size_t rep) {
        num::RngStream sub = rng.substream(rep);
        const auto batch = dist::sample(spec, samples_per_replica, sub);
        std::vector<double> proj(batch.count);
        for (std::size_t i = 0; i < batch.count; ++i)
            proj[i] = num::dot(found.direction, batch.row(i));
        pow_means[rep] = moment_pow(proj, p);
    });

    WeakMomentEstimate out;
    out.estimate = combine_replica_moments(pow_means, p, p > 8.0);
    out.direction = found.direction;
    out.provenance = found.provenance;
    return out;
}

MomentProfile moment_profile(const DistributionSpec& spec,
                             const std::vector<double>& p_grid,
                             std::size_t samples_per_replica, int replicas,
                             int random_directions, num::RngStream& rng,
                             int workers) {
    for (double p : p_grid) {
        if (!(p >= 1.0))
            throw std::invalid_argument("moment_profile: p grid must be >= 1");
        require_moment_exists(spec, p);
    }
    const bool use_median =
        std::any_of(p_grid.begin(), p_grid.end(), [](double p) { return p > 8.0; });

    // One direction search per p on a shared search batch.
    num::RngStream search_rng = rng.substream(static_cast<std::uint64_t>(replicas));
    const std::size_t search_n = std::min<std::size_t>(samples_per_replica, 100000);
    const auto search_batch = dist::sample(spec, search_n, search_rng);
    std::vector<DirectionalSearch> dirs(p_grid.size());
    par::for_index(p_grid.size(), workers, [&](std::size_t pi) {
        num::RngStream cand = rng.substream(replicas + 1 + pi);
        dirs[pi] = search_best_direction(search_batch.data, search_batch.count,
                                         spec.n, p_grid[pi], random_directions,
                                         cand);
    });

    // Per replica, one materialized batch shared by every p (the per-sample
    // bound |<z,x>| <= |x|_2 then survives every later reduction).
    const std::size_t np = p_grid.size();
    std::vector<std::vector<double>> strong_pow(np),
        weak_pow(np);  // [p][replica]
    for (auto& v : strong_pow) v.resize(replicas);
    for (auto& v : weak_pow) v.resize(replicas);
    std::vector<double> mean_norm_reps(replicas);

    par::for_index(static_cast<std::size_t>(replicas), workers, [&](std::size_t rep) {
        num::RngStream sub = rng.substream(rep);
        const auto batch = dist::sample(spec, samples_per_replica, sub);
        std::vector<double> norms(batch.count);
        for (std::size_t i = 0; i < batch.count; ++i)
            norms[i] = num::norm2(batch.row(i));
        mean_norm_reps[rep] = num::mean(norms);
        for (std::size_t pi = 0; pi < np; ++pi) {
            strong_pow[pi][rep] = moment_pow(norms, p_grid[pi]);
            std::vector<double> proj(batch.count);
            for (std::size_t i = 0; i < batch.count; ++i)
                proj[i] = num::dot(dirs[pi].direction, batch.row(i));
            weak_pow[pi][rep] = moment_pow(proj, p_grid[pi]);
        }
    });

    MomentProfile out;
    out.p_grid = p_grid;
    for (std::size_t pi = 0; pi < np; ++pi) {
        out.strong.push_back(
            combine_replica_moments(strong_pow[pi], p_grid[pi], use_median));
        WeakMomentEstimate w;
        w.estimate =
            combine_replica_moments(weak_pow[pi], p_grid[pi], use_median);
        w.direction = dirs[pi].direction;
        w.provenance = dirs[pi].provenance;
        out.weak.push_back(std::move(w));
    }
    const auto ms = num::summarize_replicas(mean_norm_reps);
    out.mean_norm = {ms.mean, ms.stderr_, ms.lo, ms.hi, false, false};
    return out;
}

std::vector<RatioPoint> weak_strong_check(const DistributionSpec& spec,
                                          const std::vector<double>& p_grid,
                                          NormKind norm,
                                          std::size_t samples_per_replica,
                                          int replicas, num::RngStream& rng,
                                          int workers) {
    for (double p : p_grid) require_moment_exists(spec, p);
    const int n = spec.n;

    // Dual-ball candidate directions per norm kind.
    num::RngStream search_rng = rng.substream(static_cast<std::uint64_t>(replicas));
    const std::size_t search_n = std::min<std::size_t>(samples_per_replica, 100000);
    const auto search_batch = dist::sample(spec, search_n, search_rng);
    num::RngStream cand_rng = rng.substream(replicas + 1);

    auto eval_dir = [&](const Vec& z, double p) {
        double s = 0.0;
        for (std::size_t i = 0; i < search_batch.count; ++i)
            s += std::pow(std::fabs(num::dot(z, search_batch.row(i))), p);
        return s / static_cast<double>(search_batch.count);
    };

    std::vector<Vec> best_dirs(p_grid.size());
    for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
        const double p = p_grid[pi];
        if (norm == NormKind::l2) {
            auto found =
                search_best_direction(search_batch.data, search_batch.count, n,
                                      p, 64, cand_rng);
            best_dirs[pi] = found.direction;
        } else if (norm == NormKind::linf) {
            // dual is the l1 ball: extreme points are +-e_j, exhaustive
            double best = -1.0;
            for (int j = 0; j < n; ++j) {
                Vec e(n, 0.0);
                e[j] = 1.0;
                const double v = eval_dir(e, p);
                if (v > best) {
                    best = v;
                    best_dirs[pi] = e;
                }
            }
        } else {
            // dual is the l_inf ball: search over sign vertices
            Vec z(n, 1.0);
            double best = eval_dir(z, p);
            for (int k = 0; k < 32; ++k) {
                Vec cand(n);
                for (auto& v : cand) v = cand_rng.uniform() < 0.5 ? -1.0 : 1.0;
                const double val = eval_dir(cand, p);
                if (val > best) {
                    best = val;
                    z = cand;
                }
            }
            for (int sweep = 0; sweep < 3; ++sweep) {
                for (int j = 0; j < n; ++j) {
                    Vec cand = z;
                    cand[j] = -cand[j];
                    const double val = eval_dir(cand, p);
                    if (val > best) {
                        best = val;
                        z = cand;
                    }
                }
            }
            best_dirs[pi] = z;
        }
    }

    const std::size_t np = p_grid.size();
    std::vector<std::vector<double>> strong_pow(np), sigma_pow(np);
    for (auto& v : strong_pow) v.resize(replicas);
    for (auto& v : sigma_pow) v.resize(replicas);
    std::vector<double> mean_norm_reps(replicas);

    par::for_index(static_cast<std::size_t>(replicas), workers, [&](std::size_t rep) {
        num::RngStream sub = rng.substream(rep);
        const auto batch = dist::sample(spec, samples_per_replica, sub);
        std::vector<double> norms(batch.count);
        for (std::size_t i = 0; i < batch.count; ++i)
            norms[i] = batch_norm(batch.row(i), norm);
        mean_norm_reps[rep] = num::mean(norms);
        for (std::size_t pi = 0; pi < np; ++pi) {
            strong_pow[pi][rep] = moment_pow(norms, p_grid[pi]);
            std::vector<double> proj(batch.count);
            for (std::size_t i = 0; i < batch.count; ++i)
                proj[i] = num::dot(best_dirs[pi], batch.row(i));
            sigma_pow[pi][rep] = moment_pow(proj, p_grid[pi]);
        }
    });

    std::vector<RatioPoint> out;
    for (std::size_t pi = 0; pi < np; ++pi) {
        const double p = p_grid[pi];
        RatioPoint pt;
        pt.p = p;
        pt.strong = std::pow(num::mean(strong_pow[pi]), 1.0 / p);
        pt.mean_norm = num::mean(mean_norm_reps);
        pt.sigma = std::pow(num::mean(sigma_pow[pi]), 1.0 / p);
        pt.ratio = pt.strong / (pt.mean_norm + pt.sigma);
        std::vector<double> ratios(static_cast<std::size_t>(replicas));
        for (int r = 0; r < replicas; ++r) {
            const double st = std::pow(strong_pow[pi][r], 1.0 / p);
            const double sg = std::pow(sigma_pow[pi][r], 1.0 / p);
            ratios[r] = st / (mean_norm_reps[r] + sg);
        }
        const auto s = num::summarize_replicas(ratios);
        pt.ci_lo = s.lo;
        pt.ci_hi = s.hi;
        out.push_back(pt);
    }
    return out;
}

GrowthTable borell_growth(const DistributionSpec& spec, const Vec& direction,
                          const std::vector<double>& p_grid,
                          std::size_t samples_per_replica, int replicas,
                          num::RngStream& rng, int workers) {
    if (!spec.log_concave())
        throw dist::SpecError("borell_growth: bound targets log-concave marginals");
    Vec z = direction;
    const double zn = num::norm2(z);
    if (!(zn > 0.0)) throw std::invalid_argument("borell_growth: zero direction");
    for (auto& v : z) v /= zn;

    const std::size_t np = p_grid.size();
    std::vector<std::vector<double>> pow_means(np);
    for (auto& v : pow_means) v.resize(replicas);
    par::for_index(static_cast<std::size_t>(replicas), workers, [&](std::size_t rep) {
        num::RngStream sub = rng.substream(rep);
        const auto batch = dist::sample(spec, samples_per_replica, sub);
        std::vector<double> proj(batch.count);
        for (std::size_t i = 0; i < batch.count; ++i)
            proj[i] = num::dot(z, batch.row(i));
        for (std::size_t pi = 0; pi < np; ++pi)
            pow_means[pi][rep] = moment_pow(proj, p_grid[pi]);
    });

    GrowthTable table;
    for (std::size_t pi = 0; pi < np; ++pi) {
        const double p = p_grid[pi];
        std::vector<double> vals(static_cast<std::size_t>(replicas));
        for (int r = 0; r < replicas; ++r)
            vals[r] = std::pow(pow_means[pi][r], 1.0 / p) / p;
        const auto s = num::summarize_replicas(vals);
        GrowthPoint pt;
        pt.p = p;
        pt.value = std::pow(num::mean(pow_means[pi]), 1.0 / p) / p;
        pt.ci_lo = s.lo;
        pt.ci_hi = s.hi;
        table.points.push_back(pt);
        table.max_constant = std::max(table.max_constant, pt.value);
    }
    return table;
}

namespace {

std::vector<Vec> sign_lattice_forms(int m) {
    // Nonzero points of {-1,0,1}^m up to antipodal symmetry, normalized.
    std::vector<Vec> forms;
    const int total = static_cast<int>(std::pow(3.0, m));
    for (int code = 0; code < total; ++code) {
        Vec v(m, 0.0);
        int c = code;
        int first_nonzero_sign = 0;
        for (int j = 0; j < m; ++j) {
            const int d = c % 3;
            c /= 3;
            v[j] = (d == 0) ? 0.0 : (d == 1 ? 1.0 : -1.0);
            if (first_nonzero_sign == 0 && d != 0)
                first_nonzero_sign = (d == 1) ? 1 : -1;
        }
        if (first_nonzero_sign != 1) continue;  // kill zero and antipodes
        const double nn = num::norm2(v);
        for (auto& x : v) x /= nn;
        forms.push_back(std::move(v));
    }
    return forms;
}

}  // namespace

HConditionReport h_condition_ratio(const DistributionSpec& spec, double p,
                                   const Mat& projection, GaugeKind gauge,
                                   std::size_t samples, num::RngStream& rng) {
    if (!(p >= 1.0))
        throw std::invalid_argument("h_condition_ratio: p must be >= 1");
    require_moment_exists(spec, p);
    const int m = static_cast<int>(std::ceil(p));
    if (static_cast<int>(projection.rows) != m)
        throw std::invalid_argument(
            "h_condition_ratio: projection must have ceil(p) rows");
    if (static_cast<int>(projection.cols) != spec.n)
        throw std::invalid_argument("h_condition_ratio: projection col mismatch");
    if (gauge == GaugeKind::max_forms && m > 8)
        throw std::invalid_argument("h_condition_ratio: form gauge limited to m <= 8");

    // full row rank check
    const Mat gram = num::matmul(projection, num::transpose(projection));
    const auto eig = num::jacobi_eigensym(gram);
    double lo = eig.values[0], hi = eig.values[0];
    for (double v : eig.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(lo > 1e-12 * std::max(hi, 1.0)))
        throw std::invalid_argument(
            "h_condition_ratio: degenerate projection (rank below ceil(p))");

    const std::vector<Vec> forms =
        (gauge == GaugeKind::max_forms) ? sign_lattice_forms(m) : std::vector<Vec>{};

    const auto batch = dist::sample(spec, samples, rng);
    std::vector<double> gvals(batch.count);
    Vec y(m);
    for (std::size_t i = 0; i < batch.count; ++i) {
        const auto row = batch.row(i);
        for (int a = 0; a < m; ++a) {
            double s = 0.0;
            for (int j = 0; j < spec.n; ++j) s += projection.at(a, j) * row[j];
            y[a] = s;
        }
        if (gauge == GaugeKind::euclidean) {
            gvals[i] = num::norm2(y);
        } else {
            double best = 0.0;
            for (const auto& f : forms)
                best = std::max(best, std::fabs(num::dot(f, y)));
            gvals[i] = best;
        }
    }
    HConditionReport rep;
    rep.p = p;
    rep.m = m;
    rep.gauge = (gauge == GaugeKind::euclidean) ? "euclidean" : "max_forms";
    rep.moment_p = std::pow(moment_pow(gvals, p), 1.0 / p);
    rep.moment_1 = num::mean(gvals);
    rep.lambda_hat = rep.moment_p / rep.moment_1;
    return rep;
}

namespace {

// min over the unit sphere in R^m of (mean |<z, y_i>|^p)^{1/p} for a
// materialized m-column batch.
double sphere_min_directional(const std::vector<double>& y, std::size_t count,
                              int m, double p, num::RngStream& rng) {
    auto eval = [&](const Vec& z) {
        double s = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            double d = 0.0;
            const double* row = y.data() + i * m;
            for (int j = 0; j < m; ++j) d += z[j] * row[j];
            s += std::pow(std::fabs(d), p);
        }
        return std::pow(s / static_cast<double>(count), 1.0 / p);
    };
    if (m == 1) return eval(Vec{1.0});

    Vec best_z;
    double best = std::numeric_limits<double>::infinity();
    if (m == 2) {
        const int grid = 128;
        for (int k = 0; k < grid; ++k) {
            const double a = num::pi * k / grid;
            const Vec z{std::cos(a), std::sin(a)};
            const double v = eval(z);
            if (v < best) {
                best = v;
                best_z = z;
            }
        }
    } else {
        for (int k = 0; k < 512; ++k) {
            const Vec z = rng.unit_sphere(m);
            const double v = eval(z);
            if (v < best) {
                best = v;
                best_z = z;
            }
        }
    }
    // local descent refinement
    double step = 0.1;
    for (int it = 0; it < 60 && step > 1e-7; ++it) {
        bool improved = false;
        for (int j = 0; j < m; ++j) {
            for (double sgn : {1.0, -1.0}) {
                Vec cand = best_z;
                cand[j] += sgn * step;
                const double cn = num::norm2(cand);
                for (auto& v : cand) v /= cn;
                const double val = eval(cand);
                if (val < best) {
                    best = val;
                    best_z = cand;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return best;
}

}  // namespace

ProofChainReport proof_chain_check(const DistributionSpec& spec, double p,
                                   std::size_t samples, int projection_draws,
                                   num::RngStream& rng, int workers) {
    if (spec.n > 8 || p > 4.0)
        throw std::invalid_argument(
            "proof_chain_check: small scale only (n <= 8, p <= 4)");
    if (!spec.log_concave())
        throw dist::SpecError("proof_chain_check: spec must be log-concave");
    require_moment_exists(spec, p);
    const int n = spec.n;
    const int m = static_cast<int>(std::ceil(p));

    num::RngStream xs = rng.substream(0);
    const auto batch = dist::sample(spec, samples, xs);

    // sigma_p by directional search
    num::RngStream cand = rng.substream(1);
    const auto found = search_best_direction(batch.data, batch.count, n, p, 64,
                                             cand);
    std::vector<double> proj(batch.count);
    for (std::size_t i = 0; i < batch.count; ++i)
        proj[i] = num::dot(found.direction, batch.row(i));
    const double sigma_p = std::pow(moment_pow(proj, p), 1.0 / p);

    ProofChainReport rep;
    rep.p = p;
    rep.m = m;
    rep.sigma_p = sigma_p;

    // Step 1: Gaussian mixing of the directional moments.
    const int n_g = 200;
    std::vector<double> inner_pow(n_g);
    par::for_index(static_cast<std::size_t>(n_g), workers, [&](std::size_t k) {
        num::RngStream gs = rng.substream(100 + k);
        const Vec g = gs.normal_vec(n);
        double s = 0.0;
        for (std::size_t i = 0; i < batch.count; ++i)
            s += std::pow(std::fabs(num::dot(g, batch.row(i))), p);
        inner_pow[k] = s / static_cast<double>(batch.count);
    });
    rep.step1_lhs = std::pow(num::mean(inner_pow), 1.0 / p);
    std::vector<double> inner_root(n_g);
    for (int k = 0; k < n_g; ++k) inner_root[k] = std::pow(inner_pow[k], 1.0 / p);
    rep.step1_main = num::mean(inner_root);
    rep.step1_implied_c =
        (rep.step1_lhs - rep.step1_main) / (std::sqrt(p) * sigma_p);

    // Steps 2 and 3 over independent Gaussian projections.
    rep.draws = projection_draws;
    std::vector<double> min_vals(projection_draws);
    std::vector<double> lambdas(projection_draws);
    std::vector<int> holds(projection_draws, 0);
    par::for_index(static_cast<std::size_t>(projection_draws), workers,
                   [&](std::size_t d) {
        num::RngStream as = rng.substream(10000 + d);
        Mat a(m, n);
        for (auto& v : a.a) v = as.normal();
        // Y = A X
        std::vector<double> y(batch.count * static_cast<std::size_t>(m));
        std::vector<double> ynorm(batch.count);
        for (std::size_t i = 0; i < batch.count; ++i) {
            const auto row = batch.row(i);
            double nn = 0.0;
            for (int q = 0; q < m; ++q) {
                double s = 0.0;
                for (int j = 0; j < n; ++j) s += a.at(q, j) * row[j];
                y[i * m + q] = s;
                nn += s * s;
            }
            ynorm[i] = std::sqrt(nn);
        }
        const double min_dir = sphere_min_directional(y, batch.count, m, p, as);
        min_vals[d] = min_dir;
        const double e_norm = num::mean(ynorm);
        const double e_norm_p = std::pow(moment_pow(ynorm, p), 1.0 / p);
        const double lambda = e_norm_p / e_norm;
        lambdas[d] = lambda;
        holds[d] = (min_dir <= lambda * e_norm * (1.0 + 1e-12)) ? 1 : 0;
    });
    rep.step2_lhs = rep.step1_main;
    rep.step2_main = num::mean(min_vals);
    rep.step2_implied_c =
        (rep.step2_lhs - rep.step2_main) / (std::sqrt(p) * sigma_p);
    rep.gauge_step_holds = std::accumulate(holds.begin(), holds.end(), 0);
    rep.lambda_mean = num::mean(lambdas);
    return rep;
}

const char* tail_form_name(TailForm form) {
    switch (form) {
        case TailForm::paouris: return "paouris";
        case TailForm::gm: return "gm";
        case TailForm::small_ball: return "small-ball";
        case TailForm::sconcave: return "sconcave";
    }
    return "?";
}

TailLedger tail_form_check(const DistributionSpec& spec, TailForm form,
                           const std::vector<double>& t_grid, double big_c,
                           double small_c, std::size_t samples_per_replica,
                           int replicas, num::RngStream& rng, int workers) {
    if (!spec.isotropic)
        throw dist::SpecError("tail_form_check: spec must be isotropic");
    if (form == TailForm::sconcave && spec.family != Family::sconcave_gc)
        throw dist::SpecError(
            "tail_form_check: sconcave form applies to the s-concave family");

    const int n = spec.n;
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    // Event per form at threshold t.
    auto event = [&](double norm, double t) {
        switch (form) {
            case TailForm::paouris:
            case TailForm::sconcave: return norm >= t * sqrt_n;
            case TailForm::gm: return std::fabs(norm - sqrt_n) >= t * sqrt_n;
            case TailForm::small_ball: return norm <= t * sqrt_n;
        }
        return false;
    };
    auto bound = [&](double t) {
        switch (form) {
            case TailForm::paouris:
                return big_c * std::exp(-small_c * t * sqrt_n);
            case TailForm::gm:
                return big_c *
                       std::exp(-small_c * sqrt_n * std::min(t * t * t, t));
            case TailForm::small_ball:
                return std::pow(small_c * t, sqrt_n);
            case TailForm::sconcave: {
                const double base =
                    small_c * std::max(1.0, spec.r / sqrt_n) / t;
                return std::pow(base, 0.5 * spec.r);
            }
        }
        return 0.0;
    };

    struct Row {
        std::vector<long> counts;
        std::vector<double> markov;  // log bound per t, or +inf
    };
    std::vector<Row> rows(static_cast<std::size_t>(replicas));
    par::for_index(rows.size(), workers, [&](std::size_t rep) {
        num::RngStream sub = rng.substream(rep);
        const auto batch = dist::sample(spec, samples_per_replica, sub);
        std::vector<double> norms(batch.count);
        for (std::size_t i = 0; i < batch.count; ++i)
            norms[i] = num::norm2(batch.row(i));
        Row& row = rows[rep];
        row.counts.assign(t_grid.size(), 0);
        row.markov.assign(t_grid.size(),
                          std::numeric_limits<double>::infinity());
        for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
            for (double s : norms)
                if (event(s, t_grid[ti])) ++row.counts[ti];
            if (form == TailForm::paouris || form == TailForm::sconcave) {
                const double pt = t_grid[ti] * sqrt_n;
                const bool feasible =
                    pt >= 1.0 && pt <= 64.0 &&
                    (spec.family != Family::sconcave_gc || pt < spec.r);
                if (feasible) {
                    // Markov: P(|X| >= s) <= E|X|^p / s^p at p = t sqrt n
                    const double mp = moment_pow(norms, pt);
                    row.markov[ti] =
                        std::log(mp) - pt * std::log(t_grid[ti] * sqrt_n);
                }
            }
        }
    });

    TailLedger ledger;
    ledger.form = form;
    ledger.big_c = big_c;
    ledger.small_c = small_c;
    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
        TailLedgerRow out;
        out.t = t_grid[ti];
        std::vector<double> freq(rows.size());
        long total = 0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            total += rows[r].counts[ti];
            freq[r] = static_cast<double>(rows[r].counts[ti]) /
                      static_cast<double>(samples_per_replica);
        }
        const auto s = num::summarize_replicas(freq);
        out.empirical = s.mean;
        out.ci_lo = std::max(0.0, s.lo);
        out.ci_hi = std::min(1.0, s.hi);
        out.count = total;
        out.unobservable = (total == 0);
        out.bound = bound(t_grid[ti]);
        out.satisfied = out.empirical <= out.bound;
        double mk = 0.0;
        bool mk_feasible = !std::isinf(rows[0].markov[ti]);
        if (mk_feasible) {
            std::vector<double> logs(rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r)
                logs[r] = rows[r].markov[ti];
            mk = std::exp(num::mean(logs));
        }
        out.markov_bound = mk;
        out.markov_feasible = mk_feasible;
        ledger.rows.push_back(out);
    }
    return ledger;
}

}  // namespace ccg::conc

#include "ccg/cltm.hpp"

#include <algorithm>
#include <cmath>

#include "ccg/parallel.hpp"

namespace ccg::clt {

using dist::DistributionSpec;
using num::Vec;

double marginal_ks(const DistributionSpec& spec, const Vec& theta,
                   std::size_t samples, num::RngStream& rng) {
    if (!spec.isotropic)
        throw dist::SpecError("marginal_ks: spec must be isotropic");
    if (static_cast<int>(theta.size()) != spec.n)
        throw std::invalid_argument("marginal_ks: direction dimension mismatch");
    if (std::fabs(num::norm2(theta) - 1.0) > 1e-12)
        throw std::invalid_argument("marginal_ks: direction must be unit");
    const auto batch = dist::sample(spec, samples, rng);
    std::vector<double> proj(batch.count);
    for (std::size_t i = 0; i < batch.count; ++i)
        proj[i] = num::dot(theta, batch.row(i));
    std::sort(proj.begin(), proj.end());
    return num::ks_distance(proj, num::normal_cdf);
}

SurveyResult direction_survey(const DistributionSpec& spec,
                              int direction_count, std::size_t samples,
                              const std::vector<double>& thresholds,
                              num::RngStream& rng, int workers,
                              bool correlated) {
    if (direction_count < 100)
        throw std::invalid_argument("direction_survey: need at least 100 directions");
    SurveyResult out;
    out.ks.resize(static_cast<std::size_t>(direction_count));

    // In correlated mode a single shared batch is projected on every
    // direction; the default draws a fresh batch per direction.
    dist::SampleBatch shared;
    if (correlated) {
        num::RngStream sub = rng.substream(1000000);
        shared = dist::sample(spec, samples, sub);
    }

    par::for_index(out.ks.size(), workers, [&](std::size_t d) {
        num::RngStream dir_rng = rng.substream(2 * d);
        const Vec theta = dir_rng.unit_sphere(spec.n);
        const dist::SampleBatch* batch = &shared;
        dist::SampleBatch own;
        if (!correlated) {
            num::RngStream sub = rng.substream(2 * d + 1);
            own = dist::sample(spec, samples, sub);
            batch = &own;
        }
        std::vector<double> proj(batch->count);
        for (std::size_t i = 0; i < batch->count; ++i)
            proj[i] = num::dot(theta, batch->row(i));
        std::sort(proj.begin(), proj.end());
        out.ks[d] = num::ks_distance(proj, num::normal_cdf);
    });

    std::vector<double> sorted = out.ks;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        const double pos = q * (sorted.size() - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return (i + 1 < sorted.size())
                   ? sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
                   : sorted.back();
    };
    out.q10 = quantile(0.10);
    out.q25 = quantile(0.25);
    out.median = quantile(0.50);
    out.q75 = quantile(0.75);
    out.q90 = quantile(0.90);
    for (double thr : thresholds) {
        const auto below = std::count_if(sorted.begin(), sorted.end(),
                                         [&](double v) { return v <= thr; });
        out.threshold_fractions.emplace_back(
            thr, static_cast<double>(below) / sorted.size());
    }
    return out;
}

double classical_be_bound(const Vec& theta, double tau) {
    if (std::fabs(num::norm2(theta) - 1.0) > 1e-12)
        throw std::invalid_argument("classical_be_bound: direction must be unit");
    double s4 = 0.0;
    for (double v : theta) s4 += v * v * v * v;
    return tau * std::sqrt(s4);
}

double abp_epsilon_from_norms(std::vector<double> norms, int n,
                              double grid_step, bool* at_floor) {
    if (norms.empty())
        throw std::invalid_argument("abp_epsilon: empty sample");
    if (!(grid_step > 0.0 && grid_step < 1.0))
        throw std::invalid_argument("abp_epsilon: bad grid step");
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    for (auto& v : norms) v = std::fabs(v / sqrt_n - 1.0);
    std::sort(norms.begin(), norms.end());
    const double total = static_cast<double>(norms.size());
    bool first = true;
    for (double eps = grid_step; eps < 1.0 + grid_step; eps += grid_step) {
        const auto it = std::lower_bound(norms.begin(), norms.end(), eps);
        const double tail = static_cast<double>(norms.end() - it) / total;
        if (tail <= eps) {
            if (at_floor) *at_floor = first;
            return eps;
        }
        first = false;
    }
    if (at_floor) *at_floor = false;
    return 1.0;
}

AbpResult abp_epsilon(const DistributionSpec& spec,
                      std::size_t samples_per_replica, int replicas,
                      double grid_step, num::RngStream& rng, int workers) {
    if (!spec.isotropic)
        throw dist::SpecError("abp_epsilon: spec must be isotropic");
    if (replicas < 2)
        throw std::invalid_argument("abp_epsilon: need >= 2 replicas");

    std::vector<std::vector<double>> norms(static_cast<std::size_t>(replicas));
    par::for_index(norms.size(), workers, [&](std::size_t rep) {
        num::RngStream sub = rng.substream(rep);
        const auto batch = dist::sample(spec, samples_per_replica, sub);
        norms[rep].resize(batch.count);
        for (std::size_t i = 0; i < batch.count; ++i)
            norms[rep][i] = num::norm2(batch.row(i));
    });

    std::vector<double> rep_eps(static_cast<std::size_t>(replicas));
    for (int r = 0; r < replicas; ++r)
        rep_eps[r] = abp_epsilon_from_norms(norms[r], spec.n, grid_step);

    // pooled fixed point
    std::vector<double> pooled;
    pooled.reserve(static_cast<std::size_t>(replicas) * samples_per_replica);
    for (const auto& v : norms) pooled.insert(pooled.end(), v.begin(), v.end());
    AbpResult out;
    out.grid_step = grid_step;
    bool at_floor = false;
    out.eps_star = abp_epsilon_from_norms(std::move(pooled), spec.n, grid_step,
                                          &at_floor);
    out.at_grid_floor = at_floor;
    const auto s = num::summarize_replicas(rep_eps);
    out.ci_lo = s.lo;
    out.ci_hi = s.hi;
    return out;
}

}  // namespace ccg::clt

#include "ccg/covariance.hpp"

#include <cmath>
#include <stdexcept>

namespace ccg::cov {

using num::Mat;

Mat gram_second_moment(const dist::SampleBatch& batch, par::ExecMode mode,
                       int workers) {
    const int n = batch.n;
    const std::size_t N = batch.count;
    const std::size_t blocks = std::min<std::size_t>(64, N);
    std::vector<Mat> partial(blocks, Mat(n, n));

    par::for_index(blocks, workers, mode, [&](std::size_t b) {
        const std::size_t lo = b * N / blocks;
        const std::size_t hi = (b + 1) * N / blocks;
        Mat& g = partial[b];
        for (std::size_t i = lo; i < hi; ++i) {
            const auto row = batch.row(i);
            for (int j = 0; j < n; ++j) {
                const double xj = row[j];
                for (int k = j; k < n; ++k) g.at(j, k) += xj * row[k];
            }
        }
    });

    Mat total(n, n);
    for (const Mat& g : partial)
        for (std::size_t i = 0; i < total.a.size(); ++i) total.a[i] += g.a[i];
    for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
            total.at(j, k) /= static_cast<double>(N);
            total.at(k, j) = total.at(j, k);
        }
    return total;
}

CovApproxReport cov_deviation_batch(const dist::SampleBatch& batch) {
    if (batch.count == 0) throw std::invalid_argument("cov_deviation: empty batch");
    const Mat gram = gram_second_moment(batch);
    const num::SymEig eig = num::jacobi_eigensym(gram);
    CovApproxReport rep;
    rep.n = batch.n;
    rep.samples = batch.count;
    double lo = eig.values[0], hi = eig.values[0];
    for (double v : eig.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    rep.s_max = std::sqrt(std::max(0.0, hi));
    rep.s_min = std::sqrt(std::max(0.0, lo));
    rep.eps_hat = std::max(hi - 1.0, 1.0 - lo);
    return rep;
}

CovApproxReport cov_deviation(const dist::DistributionSpec& spec,
                              std::size_t samples, num::RngStream& rng) {
    if (!spec.isotropic)
        throw dist::SpecError(
            "cov_deviation: spec must be isotropic (deviation from identity is "
            "meaningless otherwise)");
    const auto batch = dist::sample(spec, samples, rng);
    return cov_deviation_batch(batch);
}

std::vector<double> deviation_replicas(const dist::DistributionSpec& spec,
                                       std::size_t samples, int replicas,
                                       num::RngStream& rng, int workers) {
    if (!spec.isotropic)
        throw dist::SpecError("deviation_replicas: spec must be isotropic");
    std::vector<double> out(static_cast<std::size_t>(replicas));
    par::for_index(out.size(), workers, [&](std::size_t r) {
        num::RngStream sub = rng.substream(r);
        const auto batch = dist::sample(spec, samples, sub);
        // per-replica work stays single-threaded; blocks still fix the order
        out[r] = cov_deviation_batch(batch).eps_hat;
    });
    return out;
}

ComplexityCurve sample_complexity_curve(const dist::DistributionSpec& spec,
                                        const std::vector<double>& eps_grid,
                                        double eta, int replicas,
                                        std::size_t base_samples,
                                        std::size_t max_samples,
                                        num::RngStream& rng, int workers) {
    if (eps_grid.empty())
        throw std::invalid_argument("sample_complexity_curve: empty eps grid");
    for (double e : eps_grid)
        if (!(e > 0.0 && e < 1.0))
            throw std::invalid_argument(
                "sample_complexity_curve: eps grid must lie in (0,1)");
    if (replicas < 32)
        throw std::invalid_argument(
            "sample_complexity_curve: need at least 32 replicas");

    ComplexityCurve curve;
    std::vector<std::vector<double>> all_eps;  // per grid N, per replica
    std::uint64_t stream_base = 0;
    for (std::size_t N = base_samples; N <= max_samples; N *= 2) {
        curve.grid.push_back(N);
        num::RngStream level = rng.substream(stream_base++);
        auto eps = deviation_replicas(spec, N, replicas, level, workers);
        curve.median_eps.push_back(num::median_of(eps));
        all_eps.push_back(std::move(eps));
    }

    const double resolution = 1.0 / static_cast<double>(replicas);
    for (double eps : eps_grid) {
        ComplexityPoint pt;
        pt.eps = eps;
        pt.unresolved_eta = eta < resolution;
        bool found = false;
        for (std::size_t gi = 0; gi < curve.grid.size(); ++gi) {
            long successes = 0;
            for (double e : all_eps[gi])
                if (e <= eps) ++successes;
            const double freq =
                static_cast<double>(successes) / static_cast<double>(replicas);
            if (freq >= 1.0 - eta) {
                pt.n_star = curve.grid[gi];
                pt.success = freq;
                const auto ci = num::wilson_interval(successes, replicas);
                pt.ci_lo = ci.lo;
                pt.ci_hi = ci.hi;
                found = true;
                break;
            }
        }
        if (!found) {
            pt.budget_exhausted = true;
            pt.n_star = curve.grid.back();
            long successes = 0;
            for (double e : all_eps.back())
                if (e <= eps) ++successes;
            pt.success =
                static_cast<double>(successes) / static_cast<double>(replicas);
            const auto ci = num::wilson_interval(successes, replicas);
            pt.ci_lo = ci.lo;
            pt.ci_hi = ci.hi;
        }
        curve.points.push_back(pt);
    }
    return curve;
}

}  // namespace ccg::cov

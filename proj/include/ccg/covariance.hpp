#pragma once

#include <vector>

#include "ccg/distributions.hpp"
#include "ccg/linalg.hpp"
#include "ccg/parallel.hpp"
#include "ccg/rng.hpp"
#include "ccg/stats.hpp"

namespace ccg::cov {

// (1/N) sum_i X_i X_i^t with a fixed 64-block reduction order, so the OpenMP
// and serial paths agree bit for bit.
num::Mat gram_second_moment(const dist::SampleBatch& batch,
                            par::ExecMode mode = par::ExecMode::openmp,
                            int workers = 0);

struct CovApproxReport {
    int n = 0;
    std::size_t samples = 0;
    double eps_hat = 0.0;  // operator norm of (1/N) sum X X^t - Id
    double s_min = 0.0;    // extreme singular values of the row-normalized
    double s_max = 0.0;    // sample matrix (rows X_i / sqrt(N))
};

// Deviation of an externally supplied batch (test hook for constructed
// batches).
CovApproxReport cov_deviation_batch(const dist::SampleBatch& batch);

// Samples N points from an isotropic spec and reports the deviation.
// Non-isotropic specs are rejected.
CovApproxReport cov_deviation(const dist::DistributionSpec& spec,
                              std::size_t samples, num::RngStream& rng);

// eps_hat for `replicas` independent replicas on substreams of rng.
std::vector<double> deviation_replicas(const dist::DistributionSpec& spec,
                                       std::size_t samples, int replicas,
                                       num::RngStream& rng, int workers = 0);

struct ComplexityPoint {
    double eps = 0.0;
    std::size_t n_star = 0;       // smallest N on the doubling grid
    double success = 0.0;         // replica frequency at n_star
    double ci_lo = 0.0;           // Wilson interval
    double ci_hi = 0.0;
    bool unresolved_eta = false;  // eta below 1/replicas resolution
    bool budget_exhausted = false;  // n_star is only a lower bound
};

struct ComplexityCurve {
    std::vector<std::size_t> grid;  // the doubling N grid actually probed
    // median eps_hat per grid N (for slope diagnostics and reports)
    std::vector<double> median_eps;
    std::vector<ComplexityPoint> points;
};

// For each eps in eps_grid, the smallest N on the doubling grid
// {base, 2*base, ...} <= max_samples with replica success frequency
// >= 1 - eta. Replica deviations are computed once per N and shared
// across the eps grid.
ComplexityCurve sample_complexity_curve(const dist::DistributionSpec& spec,
                                        const std::vector<double>& eps_grid,
                                        double eta, int replicas,
                                        std::size_t base_samples,
                                        std::size_t max_samples,
                                        num::RngStream& rng, int workers = 0);

// Reference curves rendered alongside the measured N*(eps).
inline double reference_n_quadratic(int n, double eps) {
    return static_cast<double>(n) * n / (eps * eps);
}
inline double reference_n_polylog(int n, double eps) {
    const double ln = std::log(static_cast<double>(n));
    return static_cast<double>(n) * ln * ln * ln / (eps * eps);
}
inline double reference_n_linear(int n, double eps) {
    return static_cast<double>(n) / (eps * eps);
}

}  // namespace ccg::cov

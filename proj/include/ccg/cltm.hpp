#pragma once

#include <vector>

#include "ccg/distributions.hpp"
#include "ccg/rng.hpp"
#include "ccg/stats.hpp"

namespace ccg::clt {

// Kolmogorov distance of <theta, X> against the standard normal CDF.
// theta must be unit to 1e-12.
double marginal_ks(const dist::DistributionSpec& spec, const num::Vec& theta,
                   std::size_t samples, num::RngStream& rng);

struct SurveyResult {
    std::vector<double> ks;  // one entry per direction, in direction order
    double q10 = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, q90 = 0.0;
    // fraction of directions with KS below each requested threshold
    std::vector<std::pair<double, double>> threshold_fractions;
};

// KS over uniformly random directions. Each direction gets a fresh sample on
// its own substream unless correlated mode is requested.
SurveyResult direction_survey(const dist::DistributionSpec& spec,
                              int direction_count, std::size_t samples,
                              const std::vector<double>& thresholds,
                              num::RngStream& rng, int workers = 0,
                              bool correlated = false);

// tau * (sum_i theta_i^4)^{1/2}
double classical_be_bound(const num::Vec& theta, double tau);

struct AbpResult {
    double eps_star = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double grid_step = 0.0;
    bool at_grid_floor = false;  // solved at the first grid point; resolution
                                 // insufficient to localize the fixed point
};

// Smallest eps on the grid {step, 2 step, ...} with
// P(| |X|_2/sqrt(n) - 1 | >= eps) <= eps; CI from replica fixed points.
AbpResult abp_epsilon(const dist::DistributionSpec& spec,
                      std::size_t samples_per_replica, int replicas,
                      double grid_step, num::RngStream& rng, int workers = 0);

// Core of the fixed-point search on precomputed norms (test hook for
// constructed batches).
double abp_epsilon_from_norms(std::vector<double> norms, int n,
                              double grid_step, bool* at_floor = nullptr);

}  // namespace ccg::clt

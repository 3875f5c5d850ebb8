#pragma once

#include <vector>

#include "ccg/body.hpp"
#include "ccg/isotropy.hpp"
#include "ccg/rng.hpp"
#include "ccg/walk.hpp"

namespace ccg::vol {

struct RoundResult {
    iso::AffineMap map;      // whitening map applied to the body
    ConvexBody body;         // T(K) with soundly transformed certificates
    double d_hat = 0.0;      // probed sandwich estimate R_hat / r_hat
    double r_probe = 0.0;    // min probed boundary distance from the center
    double R_probe = 0.0;    // max probed boundary distance
};

// Empirical rounding: whitening from hit-and-run samples, then directional
// probing (2n axes + 64 random directions) of the mapped body.
RoundResult round_body(const ConvexBody& body, std::size_t samples,
                       long walk_budget, num::RngStream& rng);

struct VolumeEstimate {
    double value = 0.0;
    double rel_ci = 0.0;   // half-width of the relative confidence interval
    double lo = 0.0;
    double hi = 0.0;
    int phases = 0;
    double base_volume = 0.0;            // volume of the inscribed start ball
    std::vector<double> phase_fractions; // per phase, fraction in K_{i-1}
    std::vector<double> phase_ratios;    // 1 / fraction, multiplied into value
    long oracle_calls = 0;
    long burn_in = 0;
    long thin = 0;
    std::size_t samples_per_phase = 0;  // per replica chain, final round
    int replicas = 0;
    bool budget_exhausted = false;
};

// Multiphase Monte-Carlo volume of a rounded membership-oracle body via the
// chain K_i = K cap 2^{i/n} r B. The roundness precondition d <= 10 is
// checked against probed_d when given (the certificate ratio can stay loose
// after an affine map; the extra phases it forces just saturate near
// fraction 1). Stops when the relative CI reaches eps at confidence 1 - eta
// or the step budget runs out (then flagged).
VolumeEstimate volume_multiphase(const ConvexBody& body, double eps, double eta,
                                 num::RngStream& rng, int workers = 0,
                                 int replicas = 16,
                                 long max_total_steps = 200000000,
                                 double probed_d = 0.0);

struct HullRatioResult {
    int n = 0;
    std::size_t points = 0;
    double ratio_root = 0.0;      // (Vol conv{+-u_i} / Vol B)^{1/n}
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double reference_bound = 0.0; // sqrt(log(1 + N/n) / n), constant excluded
    double estimate_over_bound = 0.0;
    long resampled = 0;           // indeterminate membership calls
};

// Monte-Carlo volume of the absolute convex hull of points on the unit
// sphere, membership tested by a pairwise conditional-gradient distance
// minimization with tolerance 1e-8; indeterminate points are resampled.
HullRatioResult hull_volume_ratio(int n, std::size_t point_count,
                                  std::size_t samples_per_replica,
                                  int replicas, num::RngStream& rng,
                                  int workers = 0);

// Same estimate against a fixed point set (deterministic test hook).
HullRatioResult hull_volume_ratio_points(const std::vector<num::Vec>& points,
                                         std::size_t samples_per_replica,
                                         int replicas, num::RngStream& rng,
                                         int workers = 0);

// Membership of x in conv{+-points} by pairwise Frank-Wolfe distance test.
// Returns +1 inside, -1 outside, 0 indeterminate.
int hull_membership(const std::vector<num::Vec>& points,
                    std::span<const double> x, double tol = 1e-8,
                    int max_iters = 4000);

}  // namespace ccg::vol

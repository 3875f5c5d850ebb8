#pragma once

#include <string>
#include <vector>

#include "ccg/distributions.hpp"
#include "ccg/linalg.hpp"
#include "ccg/parallel.hpp"
#include "ccg/rng.hpp"
#include "ccg/stats.hpp"

namespace ccg::conc {

struct MomentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TailPoint {
    double t = 0.0;
    double prob = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    long count = 0;
    bool degenerate = false;  // no observed mass at this threshold
};

struct ShellStats {
    int n = 0;
    std::size_t samples_per_replica = 0;
    int replicas = 0;
    num::ReplicaSummary mean_norm;     // E |X|_2
    num::ReplicaSummary mean_norm_sq;  // E |X|_2^2
    num::ReplicaSummary var_norm;      // Var |X|_2
    num::ReplicaSummary var_norm_sq;   // Var |X|_2^2
    num::ReplicaSummary var_ratio;     // Var |X|_2^2 / E |X|_2^2
    std::vector<TailPoint> tail;      // P(| |X|_2 - sqrt n | >= t sqrt n)
};

ShellStats shell_stats(const dist::DistributionSpec& spec,
                       std::size_t samples_per_replica, int replicas,
                       const std::vector<double>& t_grid, num::RngStream& rng,
                       int workers = 0);

struct MomentEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool unstable = false;         // replica spread above 50%
    bool median_of_means = false;  // estimator used for the point value
};

// (E |X|_2^p)^{1/p}; refuses p >= r for the s-concave family. Replica
// medians-of-means take over for p > 8.
MomentEstimate strong_moment(const dist::DistributionSpec& spec, double p,
                             std::size_t samples_per_replica, int replicas,
                             num::RngStream& rng, int workers = 0);

struct WeakMomentEstimate {
    MomentEstimate estimate;  // certified lower bound on sigma_p
    num::Vec direction;
    std::string provenance;  // which candidate won the search
};

// sup over unit directions of (E |<z,X>|^p)^{1/p}, lower-bounded by a search
// over coordinates, random directions and projected-gradient ascent.
WeakMomentEstimate weak_moment(const dist::DistributionSpec& spec, double p,
                               std::size_t samples_per_replica, int replicas,
                               int random_directions, num::RngStream& rng,
                               int workers = 0);

struct MomentProfile {
    std::vector<double> p_grid;
    std::vector<MomentEstimate> strong;
    std::vector<WeakMomentEstimate> weak;
    MomentEstimate mean_norm;  // E |X|_2
};

// Shared-batch profile: strong(p) is exactly non-decreasing in p because all
// orders reduce the same empirical measure.
MomentProfile moment_profile(const dist::DistributionSpec& spec,
                             const std::vector<double>& p_grid,
                             std::size_t samples_per_replica, int replicas,
                             int random_directions, num::RngStream& rng,
                             int workers = 0);

// Geometric p-grid {1, 2, 4, ..., 2*ceil(sqrt(n))}.
std::vector<double> default_p_grid(int n);

enum class NormKind { l2, l1, linf };

struct RatioPoint {
    double p = 0.0;
    double strong = 0.0;    // (E ||X||^p)^{1/p}
    double mean_norm = 0.0; // E ||X||
    double sigma = 0.0;     // dual-constrained directional moment (lower bound)
    double ratio = 0.0;     // strong / (mean + sigma)
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

std::vector<RatioPoint> weak_strong_check(const dist::DistributionSpec& spec,
                                          const std::vector<double>& p_grid,
                                          NormKind norm,
                                          std::size_t samples_per_replica,
                                          int replicas, num::RngStream& rng,
                                          int workers = 0);

struct GrowthPoint {
    double p = 0.0;
    double value = 0.0;  // (E |<z,X>|^p)^{1/p} / p
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

struct GrowthTable {
    std::vector<GrowthPoint> points;
    double max_constant = 0.0;  // max over the grid
};

GrowthTable borell_growth(const dist::DistributionSpec& spec,
                          const num::Vec& direction,
                          const std::vector<double>& p_grid,
                          std::size_t samples_per_replica, int replicas,
                          num::RngStream& rng, int workers = 0);

enum class GaugeKind { euclidean, max_forms };

struct HConditionReport {
    double p = 0.0;
    int m = 0;  // ceil(p)
    double lambda_hat = 0.0;  // (E ||Y||^p)^{1/p} / E ||Y||
    double moment_p = 0.0;
    double moment_1 = 0.0;
    std::string gauge;
};

// Y = projection * X; lambda for the named gauge. The projection must have
// exactly ceil(p) rows and full row rank.
HConditionReport h_condition_ratio(const dist::DistributionSpec& spec, double p,
                                   const num::Mat& projection, GaugeKind gauge,
                                   std::size_t samples, num::RngStream& rng);

struct ProofChainReport {
    double p = 0.0;
    int m = 0;
    double sigma_p = 0.0;
    // concentration step: (E_G E_X)^{1/p} vs E_G (E_X)^{1/p} + c sqrt(p) sigma_p
    double step1_lhs = 0.0;
    double step1_main = 0.0;
    double step1_implied_c = 0.0;
    // min-max step: E_G(...)^{1/p} vs E_A min_z (...)^{1/p} + c sqrt(p) sigma_p
    double step2_lhs = 0.0;
    double step2_main = 0.0;
    double step2_implied_c = 0.0;
    // gauge step, checked per projection draw:
    // min_z (E|<z,AX>|^p)^{1/p} <= lambda_hat(A) E|AX|_2
    int draws = 0;
    int gauge_step_holds = 0;
    double lambda_mean = 0.0;
};

// Small-scale numeric walk through the three-inequality chain. Enforces
// n <= 8, p <= 4, m <= 4.
ProofChainReport proof_chain_check(const dist::DistributionSpec& spec, double p,
                                   std::size_t samples, int projection_draws,
                                   num::RngStream& rng, int workers = 0);

enum class TailForm { paouris, gm, small_ball, sconcave };

struct TailLedgerRow {
    double t = 0.0;
    double empirical = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    long count = 0;
    double bound = 0.0;
    bool satisfied = false;     // empirical <= bound
    double markov_bound = 0.0;  // strong-moment route at p = t sqrt n
    bool markov_feasible = false;
    bool unobservable = false;  // zero observed mass: no empirical information
};

struct TailLedger {
    TailForm form;
    double big_c = 0.0;
    double small_c = 0.0;
    std::vector<TailLedgerRow> rows;
};

TailLedger tail_form_check(const dist::DistributionSpec& spec, TailForm form,
                           const std::vector<double>& t_grid, double big_c,
                           double small_c, std::size_t samples_per_replica,
                           int replicas, num::RngStream& rng, int workers = 0);

const char* tail_form_name(TailForm form);

}  // namespace ccg::conc

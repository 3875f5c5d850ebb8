#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ccg::num {

inline constexpr double pi = 3.14159265358979323846;

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi);
}

// Phi via erfc keeps absolute error near machine epsilon in both tails.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

inline double normal_sf(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

// Wichura's PPND16 rational approximations, relative error ~1e-16.
double normal_quantile(double p);

// Regularized incomplete gamma P(a,x) and Q(a,x) = 1 - P(a,x).
double reg_gamma_lower(double a, double x);
double reg_gamma_upper(double a, double x);

inline double chi_square_cdf(double dof, double x) {
    return reg_gamma_lower(0.5 * dof, 0.5 * x);
}
inline double chi_square_sf(double dof, double x) {
    return reg_gamma_upper(0.5 * dof, 0.5 * x);
}

inline double lbeta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// (E |G|_2^p)^{1/p} for G standard Gaussian in R^n.
inline double chi_moment(int n, double p) {
    return std::sqrt(2.0) *
           std::exp((std::lgamma(0.5 * (n + p)) - std::lgamma(0.5 * n)) / p);
}

inline double chi_mean(int n) { return chi_moment(n, 1.0); }

// Pairwise summation in a fixed order; the reduction used by every moment
// estimator so that results do not depend on worker count.
double pairwise_sum(std::span<const double> v);

inline double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean: empty sample");
    return pairwise_sum(v) / static_cast<double>(v.size());
}

// Two-pass variance (pairwise sums), denominator N.
double variance(std::span<const double> v);

// sup_t |F_emp(t) - F(t)| over sample points, both sides of each jump.
double ks_distance(std::span<const double> sorted_samples,
                   const std::function<double(double)>& ref_cdf);

// Two-sample KS statistic; both inputs must be sorted.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval for k successes out of m trials.
Interval wilson_interval(long k, long m, double z = 1.959963984540054);

// Summary of per-replica estimates: point estimate, stderr of the mean and a
// +-z stderr interval. Replica batching is the only CI mechanism used here.
struct ReplicaSummary {
    double mean = 0.0;
    double stderr_ = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double median = 0.0;
    std::size_t count = 0;
};

ReplicaSummary summarize_replicas(std::span<const double> values,
                                  double z = 1.959963984540054);

double median_of(std::vector<double> values);

}  // namespace ccg::num

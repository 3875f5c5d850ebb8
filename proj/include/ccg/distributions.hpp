#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ccg/body.hpp"
#include "ccg/linalg.hpp"
#include "ccg/rng.hpp"

namespace ccg::dist {

struct SpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Family {
    gaussian,
    product_exponential,
    uniform_cube,
    uniform_simplex,
    uniform_lp_ball,
    sconcave_gc,
    oracle_uniform,
};

enum class Gauge { l2, l1 };

// A sampleable measure: family + parameters + a flag requesting the exactly
// normalized (mean zero, identity covariance) variant. Normalization always
// uses population constants, never empirical whitening.
struct DistributionSpec {
    Family family = Family::gaussian;
    int n = 1;
    bool isotropic = false;
    double p = 2.0;                 // uniform_lp_ball
    double r = 0.0;                 // sconcave_gc
    Gauge gauge = Gauge::l2;        // sconcave_gc
    std::shared_ptr<const vol::ConvexBody> body;  // oracle_uniform
    long walk_budget = 0;           // oracle_uniform

    static DistributionSpec gaussian_spec(int n);
    static DistributionSpec product_exponential_spec(int n, bool isotropic);
    static DistributionSpec cube_spec(int n, bool isotropic);
    static DistributionSpec simplex_spec(int n, bool isotropic);
    static DistributionSpec lp_ball_spec(int n, double p, bool isotropic);
    static DistributionSpec sconcave_spec(int n, double r, Gauge gauge,
                                          bool isotropic);
    static DistributionSpec oracle_uniform_spec(
        std::shared_ptr<const vol::ConvexBody> body, long walk_budget);

    void validate() const;  // throws SpecError
    bool log_concave() const { return family != Family::sconcave_gc; }
    std::string family_name() const;

    // (key, value) pairs in the fixed report order; to_kv() renders them as
    // one "key = value" line each.
    std::vector<std::pair<std::string, std::string>> kv() const;
    std::string to_kv() const;
    std::string id() const;  // single-line form of the same fields
};

struct SampleBatch {
    int n = 0;
    std::size_t count = 0;
    std::vector<double> data;  // row-major, count x n
    std::string spec_id;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    long walk_budget = 0;

    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * static_cast<std::size_t>(n),
                static_cast<std::size_t>(n)};
    }
    std::span<double> row(std::size_t i) {
        return {data.data() + i * static_cast<std::size_t>(n),
                static_cast<std::size_t>(n)};
    }
};

SampleBatch sample(const DistributionSpec& spec, std::size_t count,
                   num::RngStream& rng);

struct LogDensity {
    double value = 0.0;      // natural log; -inf outside the support
    bool normalized = true;  // false when the additive constant is unknown
};

LogDensity log_density(const DistributionSpec& spec,
                       std::span<const double> x);

// Population facts for the spec exactly as sampled (after normalization when
// isotropic is set). Closed forms where they exist, 1-D quadrature otherwise.
num::Vec population_mean(const DistributionSpec& spec);
num::Mat population_cov(const DistributionSpec& spec);
double population_log_det_cov(const DistributionSpec& spec);
double log_density_at_mean(const DistributionSpec& spec);

// Coordinate standard deviation of the raw (non-normalized) variant; the
// scale factor applied by the isotropic flag for the product-like families.
double raw_coordinate_sigma(const DistributionSpec& spec);

struct MidpointCheck {
    bool pass = true;
    std::size_t witness = 0;  // index of the first violating pair
};

using LogDensityFn = std::function<double(std::span<const double>)>;

MidpointCheck midpoint_logconcavity(
    const LogDensityFn& log_density_fn,
    std::span<const std::pair<num::Vec, num::Vec>> pairs,
    double slack = 1e-9);

MidpointCheck midpoint_logconcavity(
    const DistributionSpec& spec,
    std::span<const std::pair<num::Vec, num::Vec>> pairs,
    double slack = 1e-9);

struct SConcaveParams {
    int n = 0;
    double r = 0.0;
    double s = 0.0;      // -1/r
    double beta = 0.0;   // n + r
    double gamma = 0.0;  // 1/gamma = 1/s - n
    bool log_concave_limit = false;  // r = infinity
};

SConcaveParams sconcave_params(int n, double r);

}  // namespace ccg::dist

#pragma once

#include <span>

#include "ccg/body.hpp"
#include "ccg/distributions.hpp"
#include "ccg/linalg.hpp"
#include "ccg/rng.hpp"
#include "ccg/stats.hpp"

namespace ccg::iso {

struct AffineMap {
    num::Mat linear;  // invertible
    num::Vec shift;

    num::Vec apply(std::span<const double> x) const;
    void validate() const;  // nonzero determinant, finite entries
};

// Whitening map T with T(batch) having empirical mean 0 and covariance
// identity; the linear part is the inverse symmetric square root of the
// empirical covariance. Throws on rank-deficient batches.
AffineMap empirical_isotropy(const dist::SampleBatch& batch);

// Affine-invariant isotropic constant of a body carrying the uniform
// measure: (det Cov)^{1/2n} / Vol^{1/n}; reduces to Vol^{-1/n} in isotropic
// position.
double isotropic_constant_body(double volume, const num::Mat& cov);

// Convenience for the exact uniform families (cube, lp ball, simplex, and
// oracle bodies with known volume). Throws for non-uniform specs.
double isotropic_constant_body(const dist::DistributionSpec& spec);

struct ConstantCI {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Same constant when the volume comes with a confidence interval.
ConstantCI isotropic_constant_body(double vol_value, double vol_lo,
                                   double vol_hi, const num::Mat& cov);

// Isotropic constant of a density: (det Cov X)^{1/2n} * f(EX)^{1/n}.
double isotropic_constant_density(const dist::DistributionSpec& spec);

// The same constant computed for the pushforward under an invertible linear
// map, from the transformation rules of Cov and of the density at the mean;
// equals isotropic_constant_density(spec) identically.
double isotropic_constant_density_image(const dist::DistributionSpec& spec,
                                        const num::Mat& t);

// Star body {x : integral_0^inf t^{p-1} f(tx) dt >= f(0)/p}. The radial
// function comes from the substitution w = (t)^p which removes the endpoint
// singularity for every p > 0.
struct BallBody {
    dist::DistributionSpec source;
    double order = 1.0;  // p
    double tol = 1e-10;
    double log_f0 = 0.0;

    double radial(std::span<const double> unit_theta) const;
    bool contains(std::span<const double> x) const;
};

BallBody make_ball_body(const dist::DistributionSpec& f, double p,
                        double tol = 1e-10);

// p * integral_0^inf t^{p-1} f(t x) dt; membership holds iff this is >= f(0).
double ball_body_membership_integral(const dist::DistributionSpec& f, double p,
                                     std::span<const double> x,
                                     double tol = 1e-10);

double ball_body_radial(const dist::DistributionSpec& f, double p,
                        std::span<const double> unit_theta, double tol = 1e-10);

struct SectionEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Monte-Carlo (n-1)-volume of the central hyperplane section K cap theta^perp
// for a unit-volume body, by rejection in the outer-radius box of the
// hyperplane; CI from replica batching.
SectionEstimate section_volume(const vol::ConvexBody& body,
                               const num::Vec& theta,
                               std::size_t samples_per_replica, int replicas,
                               num::RngStream& rng, int workers = 0);

}  // namespace ccg::iso

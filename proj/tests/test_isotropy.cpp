#include <algorithm>
#include <cmath>

#include "ccg/isotropy.hpp"
#include "ccg/stats.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccg;
using dist::DistributionSpec;
using dist::Gauge;

namespace {

// Random invertible map with condition number <= kappa and known determinant.
num::Mat random_conditioned(int n, double kappa, num::RngStream& rng) {
    num::Mat g1(n, n), g2(n, n);
    for (auto& v : g1.a) v = rng.normal();
    for (auto& v : g2.a) v = rng.normal();
    const num::Mat q1 = num::orthonormalize_columns(g1);
    const num::Mat q2 = num::orthonormalize_columns(g2);
    num::Mat d(n, n);
    for (int i = 0; i < n; ++i)
        d.at(i, i) = std::exp(rng.uniform(0.0, std::log(kappa)));
    return num::matmul(num::matmul(q1, d), q2);
}

// Radial function of an indicator-density spec by bisection on the density
// support; the independent oracle for the K_p(1_K) = K identity.
double support_radial_by_bisection(const DistributionSpec& spec,
                                   const num::Vec& theta) {
    double lo = 0.0, hi = 1.0;
    auto inside = [&](double t) {
        num::Vec x(theta.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = t * theta[i];
        return !std::isinf(dist::log_density(spec, x).value);
    };
    while (inside(hi)) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE_BEGIN("isotropy");

TEST_CASE("empirical whitening recovers scale and shift") {
    auto spec = DistributionSpec::gaussian_spec(4);
    num::RngStream rng(101, 0);
    const std::size_t N = 200000;
    auto batch = dist::sample(spec, N, rng);

    const auto t0 = iso::empirical_isotropy(batch);
    const double se = 4.0 / std::sqrt(static_cast<double>(N));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(std::fabs(t0.linear.at(i, j) - (i == j ? 1.0 : 0.0)) <= se);

    // scale the batch by 2: whitening linear part ~ identity / 2
    auto scaled = batch;
    for (auto& v : scaled.data) v *= 2.0;
    const auto t2 = iso::empirical_isotropy(scaled);
    for (int i = 0; i < 4; ++i)
        CHECK(t2.linear.at(i, i) == doctest::Approx(0.5).epsilon(2e-2));

    // shift the batch: map shift recovers (whitened) minus the offset
    auto shifted = batch;
    for (std::size_t i = 0; i < shifted.count; ++i) shifted.row(i)[0] += 5.0;
    const auto ts = iso::empirical_isotropy(shifted);
    CHECK(ts.shift[0] == doctest::Approx(-5.0).epsilon(2e-2));

    // composition: the whitened batch re-whitens to the identity within 1e-10
    auto whitened = batch;
    for (std::size_t i = 0; i < whitened.count; ++i) {
        const num::Vec y = t0.apply(batch.row(i));
        std::copy(y.begin(), y.end(), whitened.row(i).begin());
    }
    const auto tw = iso::empirical_isotropy(whitened);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(std::fabs(tw.linear.at(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-10);

    // rank-deficient batch is rejected
    auto degenerate = dist::sample(spec, 100, rng);
    for (std::size_t i = 0; i < degenerate.count; ++i)
        degenerate.row(i)[3] = degenerate.row(i)[0];
    CHECK_THROWS(iso::empirical_isotropy(degenerate));
}

TEST_CASE("isotropic constants of bodies match closed forms") {
    using doctest::Approx;
    // isotropic cube: L = 1/(2 sqrt(3)) in every dimension
    for (int n : {2, 5, 9}) {
        CHECK(iso::isotropic_constant_body(DistributionSpec::cube_spec(n, true)) ==
              Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-12));
    }
    // isotropic disk has radius 2 and L = (4 pi)^{-1/2}
    CHECK(iso::isotropic_constant_body(
              DistributionSpec::lp_ball_spec(2, 2.0, true)) ==
          Approx(1.0 / std::sqrt(4.0 * num::pi)).epsilon(1e-12));

    // affine invariance through the (volume, covariance) overload
    num::RngStream rng(55, 0);
    auto cube = DistributionSpec::cube_spec(3, true);
    const double base = iso::isotropic_constant_body(cube);
    const num::Mat cov0 = dist::population_cov(cube);
    const double vol0 = std::pow(2.0 * std::sqrt(3.0), 3);
    for (int trial = 0; trial < 20; ++trial) {
        const num::Mat t = random_conditioned(3, 10.0, rng);
        const double det = std::fabs(num::lu_det(t));
        const num::Mat cov =
            num::matmul(num::matmul(t, cov0), num::transpose(t));
        const double L = iso::isotropic_constant_body(vol0 * det, cov);
        CHECK(L == Approx(base).epsilon(1e-9));
    }

    CHECK_THROWS(iso::isotropic_constant_body(DistributionSpec::gaussian_spec(3)));
}

TEST_CASE("isotropic constants of densities match closed forms and are invariant") {
    using doctest::Approx;
    for (int n : {1, 3, 8}) {
        CHECK(iso::isotropic_constant_density(DistributionSpec::gaussian_spec(n)) ==
              Approx(1.0 / std::sqrt(2.0 * num::pi)).epsilon(1e-12));
        CHECK(iso::isotropic_constant_density(
                  DistributionSpec::product_exponential_spec(n, true)) ==
              Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
        // raw and normalized variants agree (linear invariance)
        CHECK(iso::isotropic_constant_density(
                  DistributionSpec::product_exponential_spec(n, false)) ==
              Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }
    num::RngStream rng(77, 0);
    auto spec = DistributionSpec::cube_spec(4, true);
    const double base = iso::isotropic_constant_density(spec);
    for (int trial = 0; trial < 20; ++trial) {
        const num::Mat t = random_conditioned(4, 10.0, rng);
        CHECK(iso::isotropic_constant_density_image(spec, t) ==
              Approx(base).epsilon(1e-8));
    }
}

TEST_CASE("ball bodies of indicators reproduce the body") {
    num::RngStream rng(31, 0);
    const std::vector<DistributionSpec> bodies = {
        DistributionSpec::cube_spec(3, false),
        DistributionSpec::lp_ball_spec(3, 1.0, false),
        DistributionSpec::simplex_spec(3, true),  // shifted: contains 0 inside
    };
    for (const auto& spec : bodies) {
        for (int dir = 0; dir < 25; ++dir) {
            const num::Vec theta = rng.unit_sphere(3);
            const double expect = support_radial_by_bisection(spec, theta);
            for (double p : {1.0, 2.0, 4.0}) {
                const double got = iso::ball_body_radial(spec, p, theta, 1e-10);
                CHECK(got == doctest::Approx(expect).epsilon(1e-6));
            }
        }
    }
    // closed-form spot checks for the cube and the cross-polytope
    const num::Vec e1{1.0, 0.0, 0.0};
    CHECK(iso::ball_body_radial(DistributionSpec::cube_spec(3, false), 2.0, e1) ==
          doctest::Approx(1.0).epsilon(1e-7));
    CHECK(iso::ball_body_radial(DistributionSpec::lp_ball_spec(3, 1.0, false),
                                3.0, e1) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("gaussian ball body radius in one dimension") {
    auto g1 = DistributionSpec::gaussian_spec(1);
    const num::Vec theta{1.0};
    // p = 1: r = integral_0^inf f / f(0) = (1/2) sqrt(2 pi)
    CHECK(iso::ball_body_radial(g1, 1.0, theta) ==
          doctest::Approx(std::sqrt(2.0 * num::pi) / 2.0).epsilon(1e-9));
    CHECK(iso::ball_body_radial(g1, 1.0, theta) ==
          doctest::Approx(1.2533).epsilon(1e-4));
}

TEST_CASE("ball bodies of log-concave densities are midpoint convex") {
    num::RngStream rng(13, 0);
    const std::vector<DistributionSpec> specs = {
        DistributionSpec::gaussian_spec(2),
        DistributionSpec::product_exponential_spec(2, false),
    };
    for (const auto& spec : specs) {
        for (double p : {1.0, 2.0, 3.0}) {
            const double f0 =
                std::exp(dist::log_density(spec, num::Vec(spec.n, 0.0)).value);
            for (int trial = 0; trial < 60; ++trial) {
                const num::Vec t1 = rng.unit_sphere(spec.n);
                const num::Vec t2 = rng.unit_sphere(spec.n);
                const double r1 = iso::ball_body_radial(spec, p, t1);
                const double r2 = iso::ball_body_radial(spec, p, t2);
                num::Vec mid(spec.n);
                for (int i = 0; i < spec.n; ++i)
                    mid[i] = 0.5 * (r1 * (1.0 - 1e-6) * t1[i] +
                                    r2 * (1.0 - 1e-6) * t2[i]);
                const double integral =
                    iso::ball_body_membership_integral(spec, p, mid);
                CHECK(integral >= f0 * (1.0 - 1e-9));
            }
        }
    }
}

TEST_CASE("sconcave ball body integral diverges when p outruns the tail") {
    auto sc = DistributionSpec::sconcave_spec(2, 3.0, Gauge::l2, false);
    const num::Vec theta{1.0, 0.0};
    CHECK_THROWS(iso::ball_body_radial(sc, 6.0, theta));
}

TEST_CASE("central section volumes of normalized bodies") {
    num::RngStream rng(2025, 0);
    // unit-volume cube, axis direction: section volume 1
    const auto cube = vol::make_cube(3, 0.5);
    const auto s1 = iso::section_volume(cube, num::Vec{1.0, 0.0, 0.0}, 40000,
                                        16, rng);
    CHECK(s1.value == doctest::Approx(1.0).epsilon(0.02));

    // unit square, diagonal: sqrt(2)
    const auto square = vol::make_cube(2, 0.5);
    num::RngStream r1 = rng.substream(1);
    const auto s2 = iso::section_volume(
        square, num::Vec{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}, 20000, 8,
        r1);
    CHECK(s2.value == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));

    // unit-volume ball in R^3: pi * rho^2 with rho = (3/(4 pi))^{1/3}
    const double rho = std::pow(3.0 / (4.0 * num::pi), 1.0 / 3.0);
    const auto ball = vol::make_ball(3, rho);
    num::RngStream r2 = rng.substream(2);
    const auto s3 = iso::section_volume(ball, num::Vec{0.0, 0.0, 1.0}, 40000,
                                        16, r2);
    CHECK(s3.value == doctest::Approx(num::pi * rho * rho).epsilon(0.03));
    CHECK(s3.lo <= num::pi * rho * rho);
    CHECK(s3.hi >= num::pi * rho * rho);
}

TEST_SUITE_END();

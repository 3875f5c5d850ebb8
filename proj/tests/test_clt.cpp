#include <algorithm>
#include <cmath>

#include "ccg/cltm.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccg;
using dist::DistributionSpec;

TEST_SUITE_BEGIN("clt");

TEST_CASE("gaussian marginals sit at the KS noise floor") {
    num::RngStream rng(41, 0);
    auto spec = DistributionSpec::gaussian_spec(4);
    num::RngStream dir = rng.substream(9);
    const num::Vec theta = dir.unit_sphere(4);
    const double ks = clt::marginal_ks(spec, theta, 1000000, rng);
    CHECK(ks <= 0.002);
}

TEST_CASE("cube coordinate marginal reproduces the uniform-vs-normal gap") {
    num::RngStream rng(42, 0);
    auto spec = DistributionSpec::cube_spec(8, true);
    num::Vec e1(8, 0.0);
    e1[0] = 1.0;
    const double ks = clt::marginal_ks(spec, e1, 200000, rng);
    // oracle: sup |F_U - Phi| for U uniform on [-sqrt 3, sqrt 3]
    const double s3 = std::sqrt(3.0);
    const double expected = oracle::maximize_on_interval(
        [&](double t) {
            const double fu = std::clamp((t + s3) / (2.0 * s3), 0.0, 1.0);
            return std::fabs(fu - num::normal_cdf(t));
        },
        -3.0, 3.0);
    CHECK(ks == doctest::Approx(expected).epsilon(0.1));
    CHECK(expected == doctest::Approx(0.0571).epsilon(0.01));
}

TEST_CASE("diagonal cube marginal is close to normal") {
    num::RngStream rng(43, 0);
    const int n = 25;
    auto spec = DistributionSpec::cube_spec(n, true);
    num::Vec diag(n, 1.0 / std::sqrt(static_cast<double>(n)));
    const double ks = clt::marginal_ks(spec, diag, 100000, rng);
    CHECK(ks <= 0.02);
}

TEST_CASE("direction validation") {
    num::RngStream rng(44, 0);
    auto spec = DistributionSpec::gaussian_spec(3);
    CHECK_THROWS(clt::marginal_ks(spec, num::Vec{1.0, 1.0, 0.0}, 100, rng));
    CHECK_THROWS(clt::marginal_ks(DistributionSpec::cube_spec(3, false),
                                  num::Vec{1.0, 0.0, 0.0}, 100, rng));
}

TEST_CASE("direction surveys: gaussian noise floor and cube ordering") {
    num::RngStream rng(45, 0);
    auto g = DistributionSpec::gaussian_spec(6);
    const auto sg = clt::direction_survey(g, 100, 20000, {0.03}, rng);
    for (double ks : sg.ks) CHECK(ks <= 0.025);

    // cube: most random directions beat the coordinate direction
    num::RngStream rng2(46, 0);
    auto cube = DistributionSpec::cube_spec(16, true);
    const auto sc = clt::direction_survey(cube, 100, 20000, {0.0571}, rng2);
    std::size_t below = 0;
    for (double ks : sc.ks)
        if (ks < 0.0571) ++below;
    CHECK(below >= 90);

    // survey quantiles are ordered
    CHECK(sc.q10 <= sc.q25);
    CHECK(sc.q25 <= sc.median);
    CHECK(sc.median <= sc.q75);
    CHECK(sc.q75 <= sc.q90);
}

TEST_CASE("l1-ball marginal KS improves with dimension") {
    num::RngStream rng(47, 0);
    auto lo = DistributionSpec::lp_ball_spec(8, 1.0, true);
    auto hi = DistributionSpec::lp_ball_spec(32, 1.0, true);
    num::RngStream r1 = rng.substream(1);
    num::RngStream r2 = rng.substream(2);
    const auto s_lo = clt::direction_survey(lo, 100, 20000, {}, r1);
    const auto s_hi = clt::direction_survey(hi, 100, 20000, {}, r2);
    CHECK(s_hi.median < s_lo.median);
}

TEST_CASE("classical berry-esseen bound values") {
    const int n = 16;
    num::Vec diag(n, 0.25);  // 1/sqrt(16)
    CHECK(clt::classical_be_bound(diag, 2.0) ==
          doctest::Approx(2.0 / 4.0).epsilon(1e-12));
    num::Vec e1(n, 0.0);
    e1[0] = 1.0;
    CHECK(clt::classical_be_bound(e1, 2.0) == doctest::Approx(2.0));
    CHECK(clt::classical_be_bound(e1, 0.0) == doctest::Approx(0.0));

    // permutation invariance and minimality of the diagonal
    num::RngStream rng(48, 0);
    num::Vec theta = rng.unit_sphere(n);
    const double v0 = clt::classical_be_bound(theta, 1.0);
    std::reverse(theta.begin(), theta.end());
    CHECK(clt::classical_be_bound(theta, 1.0) == doctest::Approx(v0));
    const double dmin = clt::classical_be_bound(diag, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const num::Vec z = rng.unit_sphere(n);
        CHECK(clt::classical_be_bound(z, 1.0) >= dmin - 1e-12);
    }
}

TEST_CASE("abp epsilon: injected shell, gaussian fixed point, cube trend") {
    // point mass exactly on the sqrt(n) shell solves at the grid floor
    bool at_floor = false;
    std::vector<double> shell(1000, std::sqrt(9.0));
    const double eps =
        clt::abp_epsilon_from_norms(shell, 9, 0.005, &at_floor);
    CHECK(eps == doctest::Approx(0.005));
    CHECK(at_floor);

    // gaussian n = 100: fixed point of the exact chi distribution
    const double expect = oracle::chi_shell_epsilon(100);
    CHECK(expect == doctest::Approx(0.12).epsilon(0.1));
    num::RngStream rng(49, 0);
    const auto res = clt::abp_epsilon(DistributionSpec::gaussian_spec(100),
                                      50000, 8, 0.005, rng);
    CHECK(res.eps_star == doctest::Approx(expect).epsilon(0.1));
    CHECK_FALSE(res.at_grid_floor);

    // thin-shell trend for the cube
    num::RngStream r1(50, 1), r2(50, 2);
    const auto e16 = clt::abp_epsilon(DistributionSpec::cube_spec(16, true),
                                      50000, 8, 0.005, r1);
    const auto e64 = clt::abp_epsilon(DistributionSpec::cube_spec(64, true),
                                      50000, 8, 0.005, r2);
    CHECK(e64.eps_star < e16.eps_star);
}

TEST_SUITE_END();

#include <algorithm>
#include <cmath>

#include "ccg/volume.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccg;

namespace {

// upper chi-square quantile by bisection on the survival function
double chi_square_quantile_upper(double dof, double alpha) {
    double lo = 0.0, hi = 10.0 * dof + 100.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (num::chi_square_sf(dof, mid) > alpha ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE_BEGIN("volume");

TEST_CASE("hit and run basics on the ball") {
    const auto ball = vol::make_ball(3, 1.0);
    num::RngStream rng(81, 0);
    num::Vec x(3, 0.0);
    // one step from the center stays inside
    x = vol::hit_and_run_step(ball, x, rng);
    CHECK(ball.contains(x));

    // long-run mean near zero
    const auto chain = vol::hit_and_run_chain(ball, num::Vec(3, 0.0), 100, 3,
                                              20000, rng);
    for (int j = 0; j < 3; ++j) {
        double m = 0.0;
        for (const auto& p : chain) m += p[j];
        m /= static_cast<double>(chain.size());
        CHECK(std::fabs(m) <= 0.02);  // sd of coordinate ~ 0.45/sqrt(eff N)
    }

    CHECK_THROWS(vol::hit_and_run_step(ball, num::Vec{2.0, 0.0, 0.0}, rng));
}

TEST_CASE("hit and run occupancy on the square passes a chi-square test") {
    const auto square = vol::make_cube(2, 1.0);
    num::RngStream rng(82, 0);
    const std::size_t N = 16000;
    const auto chain = vol::hit_and_run_chain(square, num::Vec(2, 0.0), 200,
                                              16, N, rng);
    std::vector<long> cells(16, 0);
    for (const auto& p : chain) {
        const int ix = std::min(3, static_cast<int>((p[0] + 1.0) * 2.0));
        const int iy = std::min(3, static_cast<int>((p[1] + 1.0) * 2.0));
        ++cells[4 * iy + ix];
    }
    const double expect = static_cast<double>(N) / 16.0;
    double chi2 = 0.0;
    for (long c : cells) chi2 += (c - expect) * (c - expect) / expect;
    CHECK(chi2 <= chi_square_quantile_upper(15.0, 0.01));
}

TEST_CASE("hit and run two-bin transition counts are symmetric") {
    const auto square = vol::make_cube(2, 1.0);
    num::RngStream rng(83, 0);
    num::Vec x(2, 0.0);
    for (int b = 0; b < 100; ++b) x = vol::hit_and_run_step(square, x, rng);
    long lr = 0, rl = 0;
    bool prev_left = x[0] < 0.0;
    for (int s = 0; s < 40000; ++s) {
        x = vol::hit_and_run_step(square, x, rng);
        const bool left = x[0] < 0.0;
        if (prev_left && !left) ++lr;
        if (!prev_left && left) ++rl;
        prev_left = left;
    }
    CHECK(std::fabs(static_cast<double>(lr - rl)) <=
          3.0 * std::sqrt(static_cast<double>(lr + rl)));
}

TEST_CASE("rounding whitens an eccentric ellipsoid") {
    num::RngStream rng(84, 0);
    const auto ell = vol::make_ellipsoid(num::Vec{1.0, 4.0});
    const auto round = vol::round_body(ell, 20000, 100, rng);
    CHECK(round.d_hat <= 1.3);

    // a ball stays a ball: map proportional to the identity, d_hat near 1
    num::RngStream rng2(85, 0);
    const auto ball = vol::make_ball(3, 1.0);
    const auto rb = vol::round_body(ball, 20000, 100, rng2);
    CHECK(rb.d_hat <= 1.1);
    const double scale = rb.map.linear.at(0, 0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::fabs(rb.map.linear.at(i, j) / scale -
                            (i == j ? 1.0 : 0.0)) <= 0.05);

    // isotropic cube: probed sandwich near sqrt(3)
    num::RngStream rng3(86, 0);
    const auto cube = vol::make_cube(3, 1.0);
    const auto rc = vol::round_body(cube, 30000, 100, rng3);
    CHECK(rc.d_hat == doctest::Approx(std::sqrt(3.0)).epsilon(0.15));
}

TEST_CASE("multiphase volume: cube, ball, simplex") {
    num::RngStream rng(87, 0);
    const auto cube4 = vol::make_cube(4, 1.0);  // side 2, volume 16
    const auto vc = vol::volume_multiphase(cube4, 0.05, 0.05, rng);
    CHECK(vc.value == doctest::Approx(16.0).epsilon(0.10));
    CHECK_FALSE(vc.budget_exhausted);
    // phase bookkeeping invariants
    double prod = vc.base_volume;
    for (std::size_t i = 0; i < vc.phase_ratios.size(); ++i) {
        CHECK(vc.phase_fractions[i] > 0.0);
        CHECK(vc.phase_fractions[i] <= 1.0);
        prod *= vc.phase_ratios[i];
    }
    CHECK(prod == doctest::Approx(vc.value).epsilon(1e-12));
    CHECK(vc.oracle_calls > 0);

    // ball through the rounding path (so the chain is honest)
    num::RngStream rng2(88, 0);
    const auto ball = vol::make_ball(3, 1.0);
    const auto rb = vol::round_body(ball, 20000, 100, rng2);
    num::RngStream rng3(89, 0);
    const auto vb = vol::volume_multiphase(rb.body, 0.05, 0.05, rng3);
    const double jac = std::fabs(num::lu_det(rb.map.linear));
    CHECK(vb.value / jac == doctest::Approx(4.0 * num::pi / 3.0).epsilon(0.10));

    num::RngStream rng4(90, 0);
    const auto simplex = vol::make_simplex(3);
    const auto vs = vol::volume_multiphase(simplex, 0.05, 0.05, rng4);
    CHECK(vs.value == doctest::Approx(1.0 / 6.0).epsilon(0.10));
}

TEST_CASE("multiphase volume is rotation invariant") {
    num::RngStream rng(91, 0);
    const auto cube = vol::make_cube(3, 1.0);
    num::Mat g(3, 3);
    for (auto& v : g.a) v = rng.normal();
    const num::Mat q = num::orthonormalize_columns(g);
    const auto rotated = vol::affine_image(cube, q, num::Vec(3, 0.0));

    num::RngStream r1(92, 1), r2(92, 2);
    const auto v0 = vol::volume_multiphase(cube, 0.05, 0.05, r1);
    const auto v1 = vol::volume_multiphase(rotated, 0.05, 0.05, r2);
    CHECK(v0.lo <= v1.hi);
    CHECK(v1.lo <= v0.hi);
    CHECK(v1.value == doctest::Approx(8.0).epsilon(0.1));
}

TEST_CASE("budget exhaustion is flagged, not hidden") {
    num::RngStream rng(93, 0);
    const auto cube = vol::make_cube(4, 1.0);
    const auto v = vol::volume_multiphase(cube, 0.001, 0.05, rng, 0, 8, 500000);
    CHECK(v.budget_exhausted);
    CHECK(v.value > 0.0);
}

TEST_CASE("hull membership by conditional gradient") {
    const std::vector<num::Vec> simplex_pts = {
        {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    // cross-polytope: l1 ball
    CHECK(vol::hull_membership(simplex_pts, num::Vec{0.2, 0.2, 0.2}) == 1);
    CHECK(vol::hull_membership(simplex_pts, num::Vec{0.4, -0.4, 0.1}) == 1);
    CHECK(vol::hull_membership(simplex_pts, num::Vec{0.5, 0.5, 0.5}) == -1);
    CHECK(vol::hull_membership(simplex_pts, num::Vec{1.01, 0.0, 0.0}) == -1);
}

TEST_CASE("cross-polytope hull ratio matches the closed form") {
    const std::vector<num::Vec> e = {
        {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    num::RngStream rng(94, 0);
    const auto res = vol::hull_volume_ratio_points(e, 25000, 8, rng);
    // exact: ((2^n/n!) / omega_n)^{1/n}
    const double exact =
        std::pow((8.0 / 6.0) / vol::unit_ball_volume(3), 1.0 / 3.0);
    CHECK(exact == doctest::Approx(0.683).epsilon(1e-3));
    CHECK(res.ratio_root == doctest::Approx(exact).epsilon(0.02));
    CHECK(res.ratio_root <= 1.0);
    // reference bound and the implied constant
    CHECK(res.reference_bound ==
          doctest::Approx(std::sqrt(std::log(2.0) / 3.0)).epsilon(1e-12));
    CHECK(res.estimate_over_bound == doctest::Approx(1.42).epsilon(0.03));
}

TEST_CASE("planar random hull matches the shoelace area") {
    num::RngStream rng(95, 0);
    num::RngStream prng = rng.substream(7);
    std::vector<num::Vec> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(prng.unit_sphere(2));
    // polygon vertices: +-u_i on the unit circle, sorted by angle
    std::vector<std::pair<double, num::Vec>> verts;
    for (const auto& u : pts) {
        verts.push_back({std::atan2(u[1], u[0]), u});
        num::Vec m{-u[0], -u[1]};
        verts.push_back({std::atan2(m[1], m[0]), m});
    }
    std::sort(verts.begin(), verts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double area = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const auto& a = verts[i].second;
        const auto& b = verts[(i + 1) % verts.size()].second;
        area += a[0] * b[1] - a[1] * b[0];
    }
    area = 0.5 * std::fabs(area);

    const auto res = vol::hull_volume_ratio_points(pts, 25000, 8, rng);
    const double mc_area = std::pow(res.ratio_root, 2.0) * num::pi;
    CHECK(mc_area == doctest::Approx(area).epsilon(0.02));
}

TEST_CASE("hull ratio grows monotonically on nested point sets") {
    num::RngStream rng(96, 0);
    num::RngStream prng = rng.substream(3);
    std::vector<num::Vec> pts;
    for (int i = 0; i < 12; ++i) pts.push_back(prng.unit_sphere(3));
    double prev = 0.0;
    for (std::size_t k = 4; k <= 12; k += 4) {
        std::vector<num::Vec> subset(pts.begin(), pts.begin() + k);
        num::RngStream eval(97, 0);  // same evaluation points each time
        const auto res = vol::hull_volume_ratio_points(subset, 8000, 4, eval);
        CHECK(res.ratio_root >= prev - 1e-12);
        CHECK(res.ratio_root <= 1.0);
        prev = res.ratio_root;
    }
}

TEST_SUITE_END();

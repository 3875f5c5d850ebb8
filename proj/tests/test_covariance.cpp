#include <cmath>

#include "ccg/covariance.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccg;
using dist::DistributionSpec;

TEST_SUITE_BEGIN("covariance");

TEST_CASE("constructed orthogonal batch has zero deviation") {
    const int n = 6;
    dist::SampleBatch batch;
    batch.n = n;
    batch.count = n;
    batch.data.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        batch.data[static_cast<std::size_t>(i) * n + i] = std::sqrt(n);
    const auto rep = cov::cov_deviation_batch(batch);
    CHECK(rep.eps_hat == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.s_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.s_max == doctest::Approx(1.0).epsilon(1e-12));
    // singular-value framing is consistent by construction
    CHECK(rep.eps_hat ==
          doctest::Approx(std::max(rep.s_max * rep.s_max - 1.0,
                                   1.0 - rep.s_min * rep.s_min))
              .epsilon(1e-10));
}

TEST_CASE("gram kernel: openmp and serial reference agree exactly") {
    auto spec = DistributionSpec::gaussian_spec(8);
    num::RngStream rng(5, 0);
    const auto batch = dist::sample(spec, 20000, rng);
    const auto a = cov::gram_second_moment(batch, par::ExecMode::serial, 1);
    const auto b = cov::gram_second_moment(batch, par::ExecMode::openmp, 2);
    const auto c = cov::gram_second_moment(batch, par::ExecMode::openmp, 8);
    CHECK(a.a == b.a);
    CHECK(a.a == c.a);
}

TEST_CASE("gaussian deviation scales like sqrt(2/N) in one dimension") {
    auto spec = DistributionSpec::gaussian_spec(1);
    num::RngStream rng(11, 0);
    const std::size_t N = 4096;
    auto reps = cov::deviation_replicas(spec, N, 64, rng);
    const double mean_eps = num::mean(reps);
    // E|chi^2_1 mean - 1| for N draws ~ sqrt(2/N) * sqrt(2/pi)
    const double predicted = std::sqrt(2.0 / N) * std::sqrt(2.0 / num::pi);
    CHECK(mean_eps == doctest::Approx(predicted).epsilon(0.15));
}

TEST_CASE("non-isotropic specs are rejected") {
    auto raw = DistributionSpec::cube_spec(3, false);
    num::RngStream rng(1, 0);
    CHECK_THROWS_AS(cov::cov_deviation(raw, 100, rng), dist::SpecError);
}

TEST_CASE("deviation is invariant under orthogonal rotation of the batch") {
    auto spec = DistributionSpec::cube_spec(5, true);
    num::RngStream rng(3, 0);
    auto batch = dist::sample(spec, 5000, rng);
    const double before = cov::cov_deviation_batch(batch).eps_hat;

    num::Mat g(5, 5);
    for (auto& v : g.a) v = rng.normal();
    const num::Mat q = num::orthonormalize_columns(g);
    auto rotated = batch;
    for (std::size_t i = 0; i < batch.count; ++i) {
        const num::Vec y = num::matvec(q, batch.row(i));
        std::copy(y.begin(), y.end(), rotated.row(i).begin());
    }
    const double after = cov::cov_deviation_batch(rotated).eps_hat;
    CHECK(after == doctest::Approx(before).epsilon(1e-9));
}

TEST_CASE("median deviation decreases along the doubling grid and slope is -1/2") {
    auto spec = DistributionSpec::gaussian_spec(16);
    num::RngStream rng(21, 0);
    const auto curve = cov::sample_complexity_curve(
        spec, {0.9, 0.5}, 0.1, 32, 512, 8192, rng);
    REQUIRE(curve.grid.size() == 5);
    for (std::size_t i = 1; i < curve.median_eps.size(); ++i)
        CHECK(curve.median_eps[i] <= curve.median_eps[i - 1]);

    std::vector<double> logN, logE;
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        logN.push_back(std::log(static_cast<double>(curve.grid[i])));
        logE.push_back(std::log(curve.median_eps[i]));
    }
    const double slope = oracle::ols_slope(logN, logE);
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.25));

    // loose target resolves at the smallest grid point
    CHECK(curve.points[0].eps == 0.9);
    CHECK(curve.points[0].n_star == 512);
    CHECK_FALSE(curve.points[0].budget_exhausted);
}

TEST_CASE("unattainable epsilon exhausts the budget and is flagged") {
    auto spec = DistributionSpec::gaussian_spec(16);
    num::RngStream rng(33, 0);
    const auto curve =
        cov::sample_complexity_curve(spec, {0.01}, 0.1, 32, 256, 1024, rng);
    CHECK(curve.points[0].budget_exhausted);
    CHECK(curve.points[0].n_star == 1024);
}

TEST_CASE("eta below replica resolution is flagged unresolved") {
    auto spec = DistributionSpec::gaussian_spec(4);
    num::RngStream rng(7, 0);
    const auto curve =
        cov::sample_complexity_curve(spec, {0.9}, 0.001, 32, 256, 512, rng);
    CHECK(curve.points[0].unresolved_eta);
}

TEST_SUITE_END();

#include <cmath>

#include "ccg/moments.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccg;
using dist::DistributionSpec;
using dist::Gauge;

TEST_SUITE_BEGIN("moments");

TEST_CASE("gaussian shell statistics match chi-square facts") {
    auto spec = DistributionSpec::gaussian_spec(16);
    num::RngStream rng(1, 0);
    const auto s = conc::shell_stats(spec, 50000, 16, {0.1, 0.3, 1.0}, rng);

    // Var |X|^2 = 2n
    CHECK(s.var_norm_sq.mean == doctest::Approx(32.0).epsilon(0.05));
    CHECK(s.var_norm_sq.lo <= 32.0);
    CHECK(s.var_norm_sq.hi >= 32.0);

    // E |X| and Var |X| from the exact chi moments
    const double mean_chi = num::chi_mean(16);
    const double var_chi = 16.0 - mean_chi * mean_chi;
    CHECK(s.mean_norm.mean == doctest::Approx(mean_chi).epsilon(5e-3));
    CHECK(s.var_norm.mean == doctest::Approx(var_chi).epsilon(0.1));

    // tails are non-increasing in t
    for (std::size_t i = 1; i < s.tail.size(); ++i)
        CHECK(s.tail[i].prob <= s.tail[i - 1].prob);
}

TEST_CASE("cube shell variance ratio is 4/5 per coordinate") {
    auto spec = DistributionSpec::cube_spec(16, true);
    num::RngStream rng(2, 0);
    const auto s = conc::shell_stats(spec, 50000, 16, {0.5}, rng);
    // Var |X|^2 = n (E x^4 - 1) = n (9/5 - 1)
    CHECK(s.var_norm_sq.mean / 16.0 == doctest::Approx(0.8).epsilon(0.05));
}

TEST_CASE("variance of |X|^2 computed two ways agrees on the same batch") {
    auto spec = DistributionSpec::cube_spec(8, true);
    num::RngStream rng(3, 0);
    const auto batch = dist::sample(spec, 20000, rng);
    std::vector<double> sq(batch.count), sq2(batch.count);
    for (std::size_t i = 0; i < batch.count; ++i) {
        const double s = num::norm2(batch.row(i));
        sq[i] = s * s;
        sq2[i] = sq[i] * sq[i];
    }
    const double direct = num::variance(sq);
    const double via_moments =
        num::pairwise_sum(sq2) / sq2.size() -
        std::pow(num::pairwise_sum(sq) / sq.size(), 2);
    CHECK(direct == doctest::Approx(via_moments).epsilon(1e-8));
}

TEST_CASE("strong moments match chi closed forms and refuse missing moments") {
    num::RngStream rng(4, 0);
    auto g9 = DistributionSpec::gaussian_spec(9);
    const auto m2 = conc::strong_moment(g9, 2.0, 50000, 16, rng);
    CHECK(m2.value == doctest::Approx(3.0).epsilon(0.01));

    num::RngStream rng2(5, 0);
    const auto m4 = conc::strong_moment(g9, 4.0, 50000, 16, rng2);
    CHECK(m4.value == doctest::Approx(std::pow(9.0 * 11.0, 0.25)).epsilon(0.02));

    auto sc = DistributionSpec::sconcave_spec(4, 5.0, Gauge::l2, true);
    num::RngStream rng3(6, 0);
    CHECK_THROWS_AS(conc::strong_moment(sc, 6.0, 100, 4, rng3),
                    conc::MomentError);
    CHECK_THROWS_AS(conc::strong_moment(sc, 5.0, 100, 4, rng3),
                    conc::MomentError);
}

TEST_CASE("weak moments: isotropy, gaussian rotation invariance, laplace coordinates") {
    num::RngStream rng(7, 0);
    // p = 2 on any isotropic spec is 1
    for (auto spec : {DistributionSpec::gaussian_spec(6),
                      DistributionSpec::cube_spec(6, true),
                      DistributionSpec::product_exponential_spec(6, true)}) {
        num::RngStream sub = rng.substream(static_cast<std::uint64_t>(spec.family));
        const auto w = conc::weak_moment(spec, 2.0, 40000, 8, 64, sub);
        CHECK(w.estimate.value == doctest::Approx(1.0).epsilon(0.03));
    }

    // gaussian p = 4: 3^{1/4} in every direction
    num::RngStream rng2(8, 0);
    const auto w4 =
        conc::weak_moment(DistributionSpec::gaussian_spec(5), 4.0, 50000, 8,
                          64, rng2);
    CHECK(w4.estimate.value == doctest::Approx(std::pow(3.0, 0.25)).epsilon(0.03));

    // product exponential at large p: coordinates beat random directions
    num::RngStream rng3(9, 0);
    const auto wl =
        conc::weak_moment(DistributionSpec::product_exponential_spec(8, true),
                          8.0, 60000, 8, 64, rng3);
    CHECK(wl.provenance.find("coordinate") != std::string::npos);
    // oracle: Laplace(1/sqrt 2) has (E|x|^8)^{1/8} = (8!)^{1/8}/sqrt(2)
    const double laplace8 =
        std::exp(std::lgamma(9.0) / 8.0) / std::sqrt(2.0);
    CHECK(wl.estimate.value == doctest::Approx(laplace8).epsilon(0.1));
}

TEST_CASE("profiles are monotone and weak never exceeds strong") {
    num::RngStream rng(10, 0);
    for (auto spec : {DistributionSpec::gaussian_spec(12),
                      DistributionSpec::lp_ball_spec(12, 1.0, true)}) {
        num::RngStream sub = rng.substream(static_cast<std::uint64_t>(spec.family));
        const auto grid = conc::default_p_grid(12);
        const auto prof = conc::moment_profile(spec, grid, 30000, 8, 32, sub);
        for (std::size_t i = 1; i < grid.size(); ++i)
            CHECK(prof.strong[i].value >= prof.strong[i - 1].value - 1e-12);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(prof.weak[i].estimate.value <=
                  prof.strong[i].value + 3.0 * prof.strong[i].stderr_ + 1e-12);
        // weak(2) = 1 for isotropic specs
        CHECK(prof.weak[1].estimate.value == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("weak-strong ratio: p=1 is below one; gaussian l2 stays below 1.1") {
    num::RngStream rng(11, 0);
    for (auto norm : {conc::NormKind::l2, conc::NormKind::l1,
                      conc::NormKind::linf}) {
        num::RngStream sub = rng.substream(static_cast<std::uint64_t>(norm));
        const auto pts = conc::weak_strong_check(
            DistributionSpec::cube_spec(8, true), {1.0}, norm, 30000, 8, sub);
        CHECK(pts[0].ratio <= 1.0 + 1e-9);
    }
    num::RngStream rng2(12, 0);
    const auto pts = conc::weak_strong_check(DistributionSpec::gaussian_spec(16),
                                             {1.0, 2.0, 4.0, 8.0},
                                             conc::NormKind::l2, 40000, 8, rng2);
    for (const auto& pt : pts) CHECK(pt.ratio <= 1.1);

    // l_inf norm keeps the ratio below 2 (max-of-gaussians scale)
    num::RngStream rng3(13, 0);
    const auto pinf = conc::weak_strong_check(
        DistributionSpec::gaussian_spec(16), {8.0}, conc::NormKind::linf,
        40000, 8, rng3);
    CHECK(pinf[0].ratio <= 2.0);
}

TEST_CASE("borell growth constants") {
    num::RngStream rng(14, 0);
    num::Vec e1{1.0, 0.0, 0.0};
    // isotropic: g(2) = 1/2 exactly in expectation
    const auto gt = conc::borell_growth(DistributionSpec::gaussian_spec(3), e1,
                                        {2.0, 4.0, 8.0}, 50000, 8, rng);
    CHECK(gt.points[0].value == doctest::Approx(0.5).epsilon(0.02));
    // gaussian growth decreases beyond p = 2: oracle chi_1 moments
    for (std::size_t i = 1; i < gt.points.size(); ++i) {
        const double p = gt.points[i].p;
        const double exact = num::chi_moment(1, p) / p;
        CHECK(gt.points[i].value == doctest::Approx(exact).epsilon(0.05));
        CHECK(gt.points[i].value < gt.points[i - 1].value);
    }

    // laplace coordinate: g(p) = Gamma(p+1)^{1/p} / (p sqrt 2) -> 1/(e sqrt 2)
    num::RngStream rng2(15, 0);
    const auto lt = conc::borell_growth(
        DistributionSpec::product_exponential_spec(3, true), e1, {4.0, 8.0},
        200000, 8, rng2);
    for (const auto& pt : lt.points) {
        const double exact =
            std::exp(std::lgamma(pt.p + 1.0) / pt.p) / (pt.p * std::sqrt(2.0));
        CHECK(pt.value == doctest::Approx(exact).epsilon(0.1));
    }
    const double limit = 1.0 / (std::exp(1.0) * std::sqrt(2.0));
    CHECK(lt.points.back().value > limit);  // decreasing towards the limit
    CHECK(lt.points.back().value < lt.points.front().value);
    CHECK(limit == doctest::Approx(0.260).epsilon(1e-2));
}

TEST_CASE("H(p, lambda) ratios for gaussian projections") {
    num::RngStream rng(16, 0);
    // p = 1, m = 1: both moments are the same quantity
    num::Mat row(1, 4);
    row.at(0, 0) = 0.3;
    row.at(0, 1) = -1.0;
    row.at(0, 2) = 0.5;
    row.at(0, 3) = 2.0;
    const auto h1 = conc::h_condition_ratio(DistributionSpec::gaussian_spec(4),
                                            1.0, row, conc::GaugeKind::euclidean,
                                            20000, rng);
    CHECK(h1.lambda_hat == doctest::Approx(1.0).epsilon(1e-12));

    // identity projection, p = 4, m = 4: chi_4 moment ratio
    num::Mat id4 = num::Mat::identity(4);
    num::RngStream rng2(17, 0);
    const auto h4 = conc::h_condition_ratio(DistributionSpec::gaussian_spec(4),
                                            4.0, id4, conc::GaugeKind::euclidean,
                                            400000, rng2);
    const double expect = std::pow(24.0, 0.25) /
                          (std::sqrt(2.0) * std::tgamma(2.5));
    CHECK(expect == doctest::Approx(1.177).epsilon(1e-3));
    CHECK(h4.lambda_hat == doctest::Approx(expect).epsilon(0.02));

    // psi_2 scale: lambda below 1.5 along p in {2, 4}
    for (double p : {2.0, 4.0}) {
        const int m = static_cast<int>(std::ceil(p));
        num::Mat proj(m, 6);
        num::RngStream prng(18 + static_cast<int>(p), 0);
        for (auto& v : proj.a) v = prng.normal();
        const auto h = conc::h_condition_ratio(
            DistributionSpec::gaussian_spec(6), p, proj,
            conc::GaugeKind::euclidean, 100000, prng);
        CHECK(h.lambda_hat >= 1.0);
        CHECK(h.lambda_hat <= 1.5);
    }

    // max-of-forms gauge exists and stays sane for small m
    num::RngStream rng3(19, 0);
    const auto hf = conc::h_condition_ratio(DistributionSpec::gaussian_spec(2),
                                            2.0, num::Mat::identity(2),
                                            conc::GaugeKind::max_forms, 50000,
                                            rng3);
    CHECK(hf.lambda_hat >= 1.0);
    CHECK(hf.lambda_hat <= 1.5);

    // degenerate projection rejected
    num::Mat degenerate(2, 4);
    for (int j = 0; j < 4; ++j) {
        degenerate.at(0, j) = 1.0;
        degenerate.at(1, j) = 1.0;
    }
    num::RngStream rng4(20, 0);
    CHECK_THROWS(conc::h_condition_ratio(DistributionSpec::gaussian_spec(4),
                                         2.0, degenerate,
                                         conc::GaugeKind::euclidean, 1000,
                                         rng4));
}

TEST_CASE("proof chain at small scale") {
    num::RngStream rng(21, 0);
    auto g4 = DistributionSpec::gaussian_spec(4);
    const auto rep = conc::proof_chain_check(g4, 2.0, 40000, 50, rng);
    CHECK(rep.m == 2);
    CHECK(rep.sigma_p == doctest::Approx(1.0).epsilon(0.05));
    CHECK(rep.step1_implied_c <= 3.0);
    CHECK(rep.step2_implied_c <= 3.0);
    CHECK(rep.gauge_step_holds >= 49);  // at least 98 percent of draws
    CHECK(rep.lambda_mean >= 1.0);

    // p = 1 degenerate: the concentration step collapses to Jensen
    num::RngStream rng2(22, 0);
    const auto rep1 = conc::proof_chain_check(g4, 1.0, 20000, 20, rng2);
    CHECK(rep1.step1_implied_c <= 0.05);

    CHECK_THROWS(conc::proof_chain_check(DistributionSpec::gaussian_spec(16),
                                         2.0, 100, 2, rng2));
}

TEST_CASE("tail ledgers against configured functional forms") {
    // paouris form on a small gaussian: t = 0 row is trivially satisfied,
    // deep rows are unobservable and the markov route stays above the truth
    num::RngStream rng(23, 0);
    auto g = DistributionSpec::gaussian_spec(25);
    const auto ledger = conc::tail_form_check(
        g, conc::TailForm::paouris, {0.0, 1.2, 2.0}, 3.0, 1.0, 50000, 8, rng);
    CHECK(ledger.rows[0].empirical == doctest::Approx(1.0));
    CHECK(ledger.rows[0].bound >= 1.0);
    CHECK(ledger.rows[0].satisfied);
    // t = 1.2: P(chi_25 >= 6) = P(chi2_25 >= 36); markov bound must dominate
    const double truth = num::chi_square_sf(25, 36.0);
    const auto& r1 = ledger.rows[1];
    CHECK(r1.markov_feasible);
    CHECK(r1.markov_bound >= truth);
    CHECK(std::fabs(r1.empirical - truth) <= 4.0 * (r1.ci_hi - r1.empirical) + 1e-4);
    // t = 2: event has probability ~3e-10, no observable mass
    CHECK(ledger.rows[2].unobservable);
    CHECK(ledger.rows[2].satisfied);

    // small-ball form
    num::RngStream rng2(24, 0);
    const auto sb = conc::tail_form_check(
        g, conc::TailForm::small_ball, {0.05, 0.5}, 3.0, 1.0, 50000, 8, rng2);
    CHECK(sb.rows[0].unobservable);
    CHECK(sb.rows[0].bound == doctest::Approx(std::pow(0.05, 5.0)));

    // gm form keeps empirical under the bound with default constants
    num::RngStream rng3(25, 0);
    const auto gm = conc::tail_form_check(
        g, conc::TailForm::gm, {0.1, 0.3, 1.0}, 3.0, 1.0, 50000, 8, rng3);
    for (const auto& row : gm.rows) CHECK(row.satisfied);

    // sconcave corollary form dominates every empirical point with c = 3
    num::RngStream rng4(26, 0);
    auto sc = DistributionSpec::sconcave_spec(10, 4.0, Gauge::l2, true);
    const auto scl = conc::tail_form_check(
        sc, conc::TailForm::sconcave, {2.0, 4.0, 8.0}, 3.0, 3.0, 50000, 8, rng4);
    for (const auto& row : scl.rows) CHECK(row.satisfied);
    // form guard
    CHECK_THROWS(conc::tail_form_check(g, conc::TailForm::sconcave, {1.0}, 3.0,
                                       3.0, 100, 4, rng4));
}

TEST_CASE("unconditional families satisfy the fourth-moment budget") {
    num::RngStream rng(27, 0);
    for (auto spec : {DistributionSpec::cube_spec(16, true),
                      DistributionSpec::lp_ball_spec(16, 1.0, true),
                      DistributionSpec::product_exponential_spec(16, true)}) {
        num::RngStream sub = rng.substream(static_cast<std::uint64_t>(spec.family) + 10);
        const auto m4 = conc::strong_moment(spec, 4.0, 30000, 8, sub);
        const auto m2 = conc::strong_moment(spec, 2.0, 30000, 8, sub);
        CHECK(m4.value <= (1.0 + 10.0 / 16.0) * m2.value);
    }
}

TEST_SUITE_END();

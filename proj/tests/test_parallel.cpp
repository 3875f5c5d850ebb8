#include <cmath>

#include "ccg/cltm.hpp"
#include "ccg/covariance.hpp"
#include "ccg/moments.hpp"
#include "ccg/parallel.hpp"
#include "doctest.h"

using namespace ccg;
using dist::DistributionSpec;

TEST_SUITE_BEGIN("parallel");

TEST_CASE("index loop visits every slot once in both modes") {
    for (auto mode : {par::ExecMode::serial, par::ExecMode::openmp}) {
        std::vector<int> hits(257, 0);
        par::for_index(hits.size(), 4, mode,
                       [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) CHECK(h == 1);
    }
    CHECK(par::hardware_workers() >= 1);
}

TEST_CASE("exceptions propagate out of the parallel region") {
    CHECK_THROWS_AS(par::for_index(8, 4, par::ExecMode::openmp,
                                   [&](std::size_t i) {
                                       if (i == 5)
                                           throw std::runtime_error("boom");
                                   }),
                    std::runtime_error);
}

TEST_CASE("replica experiments are bit-identical across worker counts") {
    auto spec = DistributionSpec::cube_spec(8, true);

    // shell statistics
    num::RngStream r1(7, 0), r2(7, 0);
    const auto a = conc::shell_stats(spec, 5000, 8, {0.1, 0.5}, r1, 1);
    const auto b = conc::shell_stats(spec, 5000, 8, {0.1, 0.5}, r2, 4);
    CHECK(a.mean_norm.mean == b.mean_norm.mean);
    CHECK(a.var_norm_sq.mean == b.var_norm_sq.mean);
    for (std::size_t i = 0; i < a.tail.size(); ++i)
        CHECK(a.tail[i].prob == b.tail[i].prob);

    // covariance deviations
    num::RngStream r3(9, 0), r4(9, 0);
    const auto da = cov::deviation_replicas(spec, 2048, 16, r3, 1);
    const auto db = cov::deviation_replicas(spec, 2048, 16, r4, 4);
    CHECK(da == db);

    // direction survey
    num::RngStream r5(11, 0), r6(11, 0);
    const auto sa = clt::direction_survey(spec, 100, 2000, {0.05}, r5, 1);
    const auto sb = clt::direction_survey(spec, 100, 2000, {0.05}, r6, 4);
    CHECK(sa.ks == sb.ks);
}

TEST_SUITE_END();

// Serial reference vs OpenMP timing for the replica-parallel kernels.

#include <chrono>
#include <cstdio>

#include "ccg/cltm.hpp"
#include "ccg/covariance.hpp"
#include "ccg/moments.hpp"
#include "ccg/parallel.hpp"

using namespace ccg;

namespace {

template <typename F>
double time_ms(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.1f ms %10.1f ms   x%.2f\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
    const int workers = par::hardware_workers();
    std::printf("workers available: %d\n", workers);
    std::printf("%-28s %13s %13s   speedup\n", "kernel", "serial", "openmp");

    auto cube = dist::DistributionSpec::cube_spec(32, true);
    auto gauss = dist::DistributionSpec::gaussian_spec(64);

    {
        double serial = 0.0, parallel = 0.0;
        {
            num::RngStream rng(1, 0);
            serial = time_ms([&] {
                conc::shell_stats(gauss, 40000, 16, {0.1, 0.5}, rng, 1);
            });
        }
        {
            num::RngStream rng(1, 0);
            parallel = time_ms([&] {
                conc::shell_stats(gauss, 40000, 16, {0.1, 0.5}, rng, workers);
            });
        }
        row("shell replicas (n=64)", serial, parallel);
    }
    {
        double serial = 0.0, parallel = 0.0;
        {
            num::RngStream rng(2, 0);
            serial = time_ms(
                [&] { cov::deviation_replicas(cube, 16384, 32, rng, 1); });
        }
        {
            num::RngStream rng(2, 0);
            parallel = time_ms(
                [&] { cov::deviation_replicas(cube, 16384, 32, rng, workers); });
        }
        row("covariance replicas (n=32)", serial, parallel);
    }
    {
        dist::SampleBatch batch;
        {
            num::RngStream rng(3, 0);
            batch = dist::sample(gauss, 400000, rng);
        }
        double serial = 0.0, parallel = 0.0;
        serial = time_ms([&] {
            cov::gram_second_moment(batch, par::ExecMode::serial, 1);
        });
        parallel = time_ms([&] {
            cov::gram_second_moment(batch, par::ExecMode::openmp, workers);
        });
        row("gram accumulate (N=4e5)", serial, parallel);
    }
    {
        double serial = 0.0, parallel = 0.0;
        {
            num::RngStream rng(4, 0);
            serial = time_ms([&] {
                clt::direction_survey(cube, 128, 20000, {0.05}, rng, 1);
            });
        }
        {
            num::RngStream rng(4, 0);
            parallel = time_ms([&] {
                clt::direction_survey(cube, 128, 20000, {0.05}, rng, workers);
            });
        }
        row("direction survey (128 dirs)", serial, parallel);
    }
    return 0;
}

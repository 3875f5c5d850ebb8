#pragma once

#include <cstdint>
#include <vector>

#include "ccg/stats.hpp"

namespace ccg::num {

// Counter-based stream: output i of stream s under seed k is a pure function
// of (k, s, i). Replica r of any experiment runs on substream(r), so merges
// are deterministic for every worker count.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream = 0);

    RngStream substream(std::uint64_t index) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64();

    // Uniform on (0,1), never returns an endpoint.
    double uniform();
    double uniform(double a, double b);
    std::uint64_t uniform_index(std::uint64_t bound);  // [0, bound)

    double normal();  // inverse-CDF, one uniform per variate
    double exponential();
    double gamma(double shape);  // Marsaglia-Tsang, any shape > 0

    std::vector<double> normal_vec(int n);
    std::vector<double> unit_sphere(int n);  // normalized Gaussian

  private:
    RngStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t key)
        : seed_(seed), stream_(stream), key_(key) {}

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace ccg::num

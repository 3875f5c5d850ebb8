#include "ccg/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace ccg::num {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
    key_ = mix64(mix64(seed + kGolden) ^ mix64(stream * kGolden + 1));
}

RngStream RngStream::substream(std::uint64_t index) const {
    const std::uint64_t child =
        mix64(key_ ^ mix64((index + 1) * kGolden));
    return RngStream(seed_, index, child);
}

std::uint64_t RngStream::next_u64() {
    counter_ += 1;
    return mix64(key_ + counter_ * kGolden);
}

double RngStream::uniform() {
    // 53-bit mantissa, offset by half an ulp so 0 and 1 are excluded.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) {
    return a + (b - a) * uniform();
}

std::uint64_t RngStream::uniform_index(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_index: bound 0");
    // Rejection to kill modulo bias.
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % bound;
}

double RngStream::normal() { return normal_quantile(uniform()); }

double RngStream::exponential() { return -std::log(uniform()); }

double RngStream::gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
    if (shape < 1.0) {
        const double u = uniform();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::vector<double> RngStream::normal_vec(int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& xi : x) xi = normal();
    return x;
}

std::vector<double> RngStream::unit_sphere(int n) {
    for (;;) {
        std::vector<double> x = normal_vec(n);
        double s = 0.0;
        for (double xi : x) s += xi * xi;
        if (s > 0.0) {
            const double inv = 1.0 / std::sqrt(s);
            for (auto& xi : x) xi *= inv;
            return x;
        }
    }
}

}  // namespace ccg::num

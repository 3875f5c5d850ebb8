#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ccg::par {

// Every randomized experiment fans out over replicas (or directions), each on
// its own RNG substream, and writes into a slot owned by its index. The OpenMP
// path and the serial reference therefore produce identical bytes; the serial
// path is kept for testing and as the baseline of the benchmark target.
enum class ExecMode { serial, openmp };

int hardware_workers();

// Runs fn(0), ..., fn(count-1). `workers` <= 0 means use hardware_workers().
// fn must only write to per-index state.
void for_index(std::size_t count, int workers, ExecMode mode,
               const std::function<void(std::size_t)>& fn);

inline void for_index(std::size_t count, int workers,
                      const std::function<void(std::size_t)>& fn) {
    for_index(count, workers, ExecMode::openmp, fn);
}

template <typename T>
std::vector<T> map_index(std::size_t count, int workers, ExecMode mode,
                         const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(count);
    for_index(count, workers, mode, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

}  // namespace ccg::par

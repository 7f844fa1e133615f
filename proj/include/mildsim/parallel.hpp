#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mildsim {

// Work is dispatched in fixed-size blocks and all reductions combine per-block
// partials in block order, so results are bit-identical for any thread count.

void set_thread_count(int n); // n >= 1; 0 resets to hardware default
int thread_count();

inline constexpr std::int64_t kParallelBlock = 1024;

/// Runs fn(block_index, begin, end) over [0, n) split into kParallelBlock chunks.
void parallel_blocks(std::int64_t n,
                     const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn);

/// Fixed-tree pairwise summation (independent of evaluation order).
double pairwise_sum(std::span<const double> values);

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0; // unbiased sample variance, clamped at 0
    std::int64_t count = 0;
};

/// Deterministic mean/variance of value(i) over i in [0, n).
MeanVar reduce_mean_var(std::int64_t n, const std::function<double(std::int64_t)>& value);

} // namespace mildsim

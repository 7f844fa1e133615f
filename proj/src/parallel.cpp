#include "mildsim/parallel.hpp"

#include <atomic>
#include <algorithm>
#include <cmath>
#include <thread>

namespace mildsim {

namespace {

int g_threads = 0;

int default_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace

void set_thread_count(int n) { g_threads = n < 0 ? 0 : n; }

int thread_count() { return g_threads > 0 ? g_threads : default_threads(); }

void parallel_blocks(std::int64_t n,
                     const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn) {
    if (n <= 0) return;
    const std::int64_t n_blocks = (n + kParallelBlock - 1) / kParallelBlock;
    const int workers = static_cast<int>(std::min<std::int64_t>(thread_count(), n_blocks));
    if (workers <= 1) {
        for (std::int64_t b = 0; b < n_blocks; ++b) {
            fn(b, b * kParallelBlock, std::min(n, (b + 1) * kParallelBlock));
        }
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= n_blocks || failed.load()) return;
            try {
                fn(b, b * kParallelBlock, std::min(n, (b + 1) * kParallelBlock));
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n <= 32) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

MeanVar reduce_mean_var(std::int64_t n, const std::function<double(std::int64_t)>& value) {
    MeanVar out;
    out.count = n;
    if (n <= 0) return out;
    const std::int64_t n_blocks = (n + kParallelBlock - 1) / kParallelBlock;
    std::vector<double> sum1(n_blocks, 0.0);
    std::vector<double> sum2(n_blocks, 0.0);
    parallel_blocks(n, [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
        std::vector<double> v(static_cast<std::size_t>(hi - lo));
        std::vector<double> v2(v.size());
        for (std::int64_t i = lo; i < hi; ++i) {
            const double x = value(i);
            v[static_cast<std::size_t>(i - lo)] = x;
            v2[static_cast<std::size_t>(i - lo)] = x * x;
        }
        sum1[b] = pairwise_sum(v);
        sum2[b] = pairwise_sum(v2);
    });
    const double s1 = pairwise_sum(sum1);
    const double s2 = pairwise_sum(sum2);
    out.mean = s1 / static_cast<double>(n);
    if (n > 1) {
        const double ss = s2 - s1 * s1 / static_cast<double>(n);
        out.variance = std::max(0.0, ss / static_cast<double>(n - 1));
    }
    return out;
}

} // namespace mildsim

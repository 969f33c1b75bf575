#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace polyknot::parallel {

/// Process-wide cap on worker threads. Results never depend on it: work is
/// split into fixed blocks whose partial results are combined in block order,
/// so any thread count produces bit-identical output.
inline std::atomic<int>& thread_limit_storage() {
    static std::atomic<int> limit{0};  // 0 = hardware concurrency
    return limit;
}

inline void set_thread_limit(int n) { thread_limit_storage().store(n); }

inline int effective_threads(std::size_t blocks) {
    int lim = thread_limit_storage().load();
    if (lim <= 0) lim = static_cast<int>(std::thread::hardware_concurrency());
    if (lim <= 0) lim = 1;
    if (static_cast<std::size_t>(lim) > blocks) lim = static_cast<int>(blocks);
    return lim;
}

/// Run fn(block) for every block index in [0, blocks). Blocks may execute on
/// any thread in any order; fn must only write block-local state.
template <typename Fn>
void for_each_block(std::size_t blocks, Fn&& fn) {
    if (blocks == 0) return;
    const int nthreads = effective_threads(blocks);
    if (nthreads <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    std::atomic_flag error_guard = ATOMIC_FLAG_INIT;
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t b = next.fetch_add(1);
                if (b >= blocks || failed.load()) return;
                try {
                    fn(b);
                } catch (...) {
                    if (!error_guard.test_and_set()) error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Neumaier compensated accumulator; deterministic for a fixed add order.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

} // namespace polyknot::parallel

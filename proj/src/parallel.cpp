#include "scrmlmc/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace scrmlmc {

int resolved_thread_count(const ExecPolicy& policy, long work_items) {
    int n = policy.threads;
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (work_items < n) n = static_cast<int>(work_items);
    return n < 1 ? 1 : n;
}

void parallel_for(long n, const ExecPolicy& policy, const std::function<void(long)>& body) {
    if (n <= 0) return;
    const int workers = resolved_thread_count(policy, n);
    if (workers == 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const long chunk = std::max<long>(1, n / (8L * workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const long lo = next.fetch_add(chunk);
                if (lo >= n) break;
                const long hi = std::min(n, lo + chunk);
                try {
                    for (long i = lo; i < hi; ++i) body(i);
                } catch (...) {
                    bool expected = false;
                    if (failed.compare_exchange_strong(expected, true)) error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace scrmlmc

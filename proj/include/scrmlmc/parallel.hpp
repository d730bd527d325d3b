#pragma once

#include <functional>

namespace scrmlmc {

struct ExecPolicy {
    // 0 = use all hardware threads, 1 = serial, n = exactly n workers.
    int threads = 0;
};

int resolved_thread_count(const ExecPolicy& policy, long work_items);

// Runs body(i) for i in [0,n). Each index must write only to its own output
// slot; combined with per-index RNG streams this makes results independent of
// the worker count.
void parallel_for(long n, const ExecPolicy& policy, const std::function<void(long)>& body);

}  // namespace scrmlmc

#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace tdi {

// Worker count: TDI_THREADS if set, else hardware concurrency.
inline int thread_count() {
    if (const char* env = std::getenv("TDI_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Static block partition of [begin, end).  Each index is processed exactly
// once and writes only its own outputs, so results are identical to a
// sequential run regardless of the worker count.
template <class Body>
void parallel_for(int begin, int end, Body&& body) {
    const int total = end - begin;
    if (total <= 0) return;
    const int workers = std::min(thread_count(), total);
    if (workers == 1) {
        for (int i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    const int chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = begin + w * chunk;
        const int hi = std::min(lo + chunk, end);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (int i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace tdi

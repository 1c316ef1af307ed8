#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace umb {

inline int resolveThreads(int requested) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    int n = requested > 0 ? requested : std::min(hw, 8);
    if (const char* env = std::getenv("UMB_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::max(1, n);
}

// Per-index work writes to its own slot, so results are deterministic for
// any thread count; reductions stay serial at the call sites.
template <class Fn>
void parallelFor(int count, int threads, Fn&& fn) {
    int n = std::min(resolveThreads(threads), count);
    if (n <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n);
    int chunk = (count + n - 1) / n;
    for (int t = 0; t < n; ++t) {
        pool.emplace_back([&, t] {
            try {
                int lo = t * chunk, hi = std::min(count, lo + chunk);
                for (int i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace umb

#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace twhm {

namespace detail {
inline std::atomic<int>& thread_cap() {
    static std::atomic<int> cap{0}; // 0 = uninitialized
    return cap;
}
} // namespace detail

// Worker cap: TWHM_THREADS env var if set, else hardware concurrency.
inline int max_threads() {
    int cap = detail::thread_cap().load(std::memory_order_relaxed);
    if (cap > 0) return cap;
    int n = 0;
    if (const char* env = std::getenv("TWHM_THREADS")) {
        n = std::atoi(env);
    }
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    detail::thread_cap().store(n, std::memory_order_relaxed);
    return n;
}

inline void set_max_threads(int n) {
    detail::thread_cap().store(n > 0 ? n : 1, std::memory_order_relaxed);
}

// Runs body(begin, end) over disjoint chunks of [0, count). The caller must
// write to disjoint slots; chunk boundaries are deterministic for a given
// count, but which thread runs a chunk is not.
template <class Body>
void parallel_for(std::int64_t count, Body&& body, std::int64_t min_chunk = 1024) {
    if (count <= 0) return;
    const int threads = max_threads();
    if (threads <= 1 || count < 2 * min_chunk) {
        body(std::int64_t{0}, count);
        return;
    }
    const int workers = static_cast<int>(
        std::min<std::int64_t>(threads, (count + min_chunk - 1) / min_chunk));
    const std::int64_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const std::int64_t begin = w * chunk;
        const std::int64_t end = std::min<std::int64_t>(begin + chunk, count);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& t : pool) t.join();
}

} // namespace twhm

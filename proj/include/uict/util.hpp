#ifndef UICT_UTIL_HPP
#define UICT_UTIL_HPP

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace uict {

/// Worker-pool size: UICT_THREADS env var if set, else hardware concurrency.
inline unsigned default_thread_count() {
    if (const char* env = std::getenv("UICT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
}

/// Runs fn(i) for i in [0, count) on a pool and collects results by index.
/// Output is identical for any thread count: each slot is written exactly
/// once and streams are keyed by index, not by worker.
template <class T, class Fn>
std::vector<T> parallel_map_indexed(std::size_t count, Fn&& fn, unsigned threads = 0) {
    if (threads == 0) threads = default_thread_count();
    std::vector<T> results(count);
    if (count == 0) return results;
    if (threads <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            results[i] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return results;
}

} // namespace uict

#endif

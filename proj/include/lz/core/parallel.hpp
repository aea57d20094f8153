#pragma once

// Chunked parallel loop with a fixed partition, so that reductions done by
// the caller in chunk order are bit-identical for any thread count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace lz {

inline std::atomic<int>& thread_limit_storage() {
    static std::atomic<int> limit{0};
    return limit;
}

// 0 means hardware concurrency.
inline void set_thread_limit(int n) { thread_limit_storage() = std::max(0, n); }

inline int thread_limit() {
    const int n = thread_limit_storage();
    if (n > 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Calls body(chunk, begin, end) for `chunks` equal slices of [0, count).
template <class F>
void parallel_chunks(std::size_t count, std::size_t chunks, F&& body) {
    chunks = std::max<std::size_t>(1, std::min(chunks, count));
    auto slice = [&](std::size_t c) {
        const std::size_t b = count * c / chunks, e = count * (c + 1) / chunks;
        body(c, b, e);
    };
    const int workers = std::min<int>(thread_limit(), static_cast<int>(chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) slice(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t c = next++; c < chunks; c = next++) slice(c);
        });
    for (auto& t : pool) t.join();
}

} // namespace lz

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace lor {

// Thread-count resolution: explicit request wins, then the LOR_THREADS
// environment variable, then hardware concurrency.
inline int resolve_threads(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LOR_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Runs fn(chunk_index, begin, end) over [0, total) split into fixed-size
// chunks. Chunk boundaries depend only on (total, chunk_size), never on
// the thread count, so any reduction that combines per-chunk results in
// chunk order is deterministic.
template <typename Fn>
void parallel_chunks(uint64_t total, uint64_t chunk_size, int threads, Fn&& fn) {
    if (total == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    const uint64_t num_chunks = (total + chunk_size - 1) / chunk_size;
    threads = resolve_threads(threads);
    if (threads <= 1 || num_chunks <= 1) {
        for (uint64_t c = 0; c < num_chunks; ++c) {
            uint64_t lo = c * chunk_size;
            uint64_t hi = std::min(total, lo + chunk_size);
            fn(c, lo, hi);
        }
        return;
    }
    std::atomic<uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= num_chunks) break;
            uint64_t lo = c * chunk_size;
            uint64_t hi = std::min(total, lo + chunk_size);
            fn(c, lo, hi);
        }
    };
    std::vector<std::thread> pool;
    int nworkers = static_cast<int>(std::min<uint64_t>(threads, num_chunks));
    pool.reserve(nworkers);
    for (int t = 0; t < nworkers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace lor

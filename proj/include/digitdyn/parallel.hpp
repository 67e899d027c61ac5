#pragma once

// Deterministic chunked parallelism: a half-open index range is cut into
// fixed-size chunks, workers process chunks, and results come back in chunk
// order. Output is therefore identical for any worker count.

#include <atomic>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace digitdyn {

template <typename Result, typename Fn>
std::vector<Result> run_chunked(std::uint64_t begin, std::uint64_t end,
                                std::uint64_t chunk_size, unsigned workers, Fn fn) {
    if (chunk_size == 0) throw std::invalid_argument("chunk size must be positive");
    if (workers == 0) workers = 1;

    std::vector<std::pair<std::uint64_t, std::uint64_t>> chunks;
    for (std::uint64_t lo = begin; lo < end; lo += chunk_size) {
        std::uint64_t hi = lo + chunk_size < end ? lo + chunk_size : end;
        chunks.emplace_back(lo, hi);
    }

    std::vector<Result> results(chunks.size());
    if (workers == 1 || chunks.size() <= 1) {
        for (std::size_t i = 0; i < chunks.size(); ++i)
            results[i] = fn(chunks[i].first, chunks[i].second);
        return results;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= chunks.size()) break;
            results[i] = fn(chunks[i].first, chunks[i].second);
        }
    };

    std::vector<std::thread> pool;
    unsigned n = workers < chunks.size() ? workers : static_cast<unsigned>(chunks.size());
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace digitdyn

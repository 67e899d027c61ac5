#pragma once

// The Sloane map (base-q digit product), persistence, orbits, record
// sweeps and the base-3 persistence bound.

#include "digitdyn/parallel.hpp"
#include "digitdyn/radix.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace digitdyn {

// S_q(n): product of the base-q digits of n. Strictly decreasing for
// n >= q, so iteration always reaches a single digit.
inline std::uint64_t sloane_map(std::uint64_t n, std::uint32_t base) {
    check_base(base);
    if (n < base) return n;
    std::uint64_t product = 1;
    while (n > 0) {
        std::uint64_t d = n % base;
        if (d == 0) return 0;
        product *= d;  // bounded by the input: the digit product of n is < n
        n /= base;
    }
    return product;
}

// Product of the nonzero digits only; the empty product (n = 0) is 1.
inline std::uint64_t erdos_sloane_map(std::uint64_t n, std::uint32_t base) {
    check_base(base);
    std::uint64_t product = 1;
    while (n > 0) {
        std::uint64_t d = n % base;
        if (d != 0) product *= d;
        n /= base;
    }
    return product;
}

// Least m with S_q^m(n) a single digit; 0 when n is already one.
inline std::uint32_t persistence(std::uint64_t n, std::uint32_t base) {
    check_base(base);
    std::uint32_t steps = 0;
    while (n >= base) {
        n = sloane_map(n, base);
        ++steps;
    }
    return steps;
}

// n, S_q(n), S_q^2(n), ... down to the first single-digit value.
inline std::vector<std::uint64_t> orbit(std::uint64_t n, std::uint32_t base) {
    check_base(base);
    std::vector<std::uint64_t> chain{n};
    while (n >= base) {
        n = sloane_map(n, base);
        chain.push_back(n);
    }
    return chain;
}

struct PersistenceRecord {
    std::uint32_t persistence;
    std::uint64_t witness;  // smallest n in the scanned range with this value
    std::uint32_t base;

    friend bool operator==(const PersistenceRecord&, const PersistenceRecord&) = default;
};

// Smallest witness for each persistence value attained on [1, limit],
// in increasing persistence order. The range is scanned in fixed-size
// chunks whose partial records merge in order, so the result does not
// depend on the worker count.
inline std::vector<PersistenceRecord> scan_records(std::uint32_t base, std::uint64_t limit,
                                                   unsigned workers = 1) {
    check_base(base);
    if (limit < 1) throw std::invalid_argument("scan limit must be at least 1");

    constexpr std::uint64_t kChunk = 1 << 16;
    using ChunkRecords = std::map<std::uint32_t, std::uint64_t>;

    auto scan_chunk = [base](std::uint64_t begin, std::uint64_t end) {
        ChunkRecords local;
        for (std::uint64_t n = begin; n < end; ++n) {
            std::uint32_t p = persistence(n, base);
            auto it = local.find(p);
            if (it == local.end()) local.emplace(p, n);
        }
        return local;
    };

    std::vector<ChunkRecords> chunks =
        run_chunked<ChunkRecords>(1, limit + 1, kChunk, workers, scan_chunk);

    std::map<std::uint32_t, std::uint64_t> merged;
    for (const ChunkRecords& chunk : chunks)
        for (auto [p, witness] : chunk)
            merged.try_emplace(p, witness);

    std::vector<PersistenceRecord> records;
    records.reserve(merged.size());
    for (auto [p, witness] : merged)
        records.push_back(PersistenceRecord{p, witness, base});
    return records;
}

// Upper bound 2*(1 + log_3 log_3 n) on the base-3 persistence of n >= 3,
// rounded up so the returned double never undercuts the exact value.
inline double persistence_bound_base3(std::uint64_t n) {
    if (n < 3) throw std::invalid_argument("bound requires n >= 3");
    const long double log3 = std::log(3.0L);
    long double inner = std::log(static_cast<long double>(n)) / log3;
    long double bound = 2.0L * (1.0L + std::log(inner) / log3);
    double out = static_cast<double>(bound);
    return std::nextafter(std::nextafter(out, INFINITY), INFINITY);
}

}  // namespace digitdyn

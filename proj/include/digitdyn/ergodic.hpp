#pragma once

// Arithmetic facts behind the density results (tail periods, primitive
// roots, rational independence of rotation numbers), exact commutation
// checks for the circle-map action, and the zero-digit density sweeps for
// single primes and for rank-k prime tuples.

#include "digitdyn/circle_map.hpp"
#include "digitdyn/parallel.hpp"
#include "digitdyn/radix.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace digitdyn {

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

inline std::vector<std::pair<std::uint64_t, std::uint32_t>> factorize_u64(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> factors;
    for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d == 0) {
            std::uint32_t e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            factors.emplace_back(d, e);
        }
    }
    if (n > 1) factors.emplace_back(n, 1);
    return factors;
}

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2))
        if (n % d == 0) return false;
    return true;
}

}  // namespace detail

// Minimal period of p^n mod q^k, by exact cycle detection from n = 0.
// Requires gcd(p, q) = 1; the sequence is then purely periodic.
inline std::uint64_t tail_period(std::uint64_t p, std::uint64_t q, std::uint32_t k) {
    if (p < 1 || q < 2 || k < 1) throw std::invalid_argument("need p >= 1, q >= 2, k >= 1");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("tail period requires gcd(p, q) = 1");
    std::uint64_t modulus = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        if (modulus > 1'000'000'000'000ULL / q)
            throw std::invalid_argument("modulus q^k too large");
        modulus *= q;
    }
    std::uint64_t r = 1;
    std::uint64_t period = 0;
    do {
        r = detail::mulmod_u64(r, p % modulus, modulus);
        ++period;
    } while (r != 1);
    return period;
}

// True iff p generates the full group of units mod m (order phi(m)).
// m must be small enough to factor by trial division.
inline bool is_primitive_root(std::uint64_t p, std::uint64_t m) {
    if (m < 2 || m > 1'000'000'000'000ULL)
        throw std::invalid_argument("modulus out of supported range");
    if (std::gcd(p, m) != 1) throw std::invalid_argument("primitive root requires gcd(p, m) = 1");

    std::uint64_t phi = 1;
    for (auto [prime, exp] : detail::factorize_u64(m)) {
        phi *= prime - 1;
        for (std::uint32_t i = 1; i < exp; ++i) phi *= prime;
    }
    if (detail::powmod_u64(p, phi, m) != 1) return false;  // sanity; Euler guarantees it
    for (auto [prime, exp] : detail::factorize_u64(phi)) {
        (void)exp;
        if (detail::powmod_u64(p, phi / prime, m) == 1) return false;
    }
    return true;
}

// Verdict on rational independence of {1, log_q p_1, ..., log_q p_k} for
// distinct primes p_i. By unique factorization a nontrivial relation
// sum n_i log_q p_i = n_0 exists iff every prime divisor of q appears in
// the list; the witness is then prod p_i^{v_{p_i}(q)} = q.
struct IndependenceVerdict {
    bool independent;
    // when dependent: prod primes[i]^exponents[i] = q^q_exponent
    std::vector<std::uint32_t> exponents;
    std::uint32_t q_exponent = 0;
};

inline IndependenceVerdict rational_independence(std::uint64_t q,
                                                 const std::vector<std::uint64_t>& primes) {
    if (q < 2) throw std::invalid_argument("base must be at least 2");
    if (primes.empty()) throw std::invalid_argument("prime list must not be empty");
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (!detail::is_prime_u64(primes[i]))
            throw std::invalid_argument("list entries must be prime");
        for (std::size_t jj = i + 1; jj < primes.size(); ++jj)
            if (primes[i] == primes[jj]) throw std::invalid_argument("primes must be distinct");
    }

    auto q_factors = detail::factorize_u64(q);
    IndependenceVerdict verdict;
    verdict.exponents.assign(primes.size(), 0);
    for (auto [prime, exp] : q_factors) {
        auto it = std::find(primes.begin(), primes.end(), prime);
        if (it == primes.end()) {
            verdict.independent = true;
            verdict.exponents.clear();
            return verdict;
        }
        verdict.exponents[static_cast<std::size_t>(it - primes.begin())] = exp;
    }
    verdict.independent = false;
    verdict.q_exponent = 1;
    return verdict;
}

struct CommutationResult {
    bool commutes;
    std::optional<Rational> counterexample;
};

// Exact check of T_{p1} o T_{p2} = T_{p2} o T_{p1} on `samples` seeded
// random rationals in [1/q, 1] with denominators up to 10^6.
inline CommutationResult commutation_check(std::uint64_t p1, std::uint64_t p2, std::uint32_t q,
                                           std::uint64_t samples, std::uint64_t seed = 12345) {
    if (samples < 1) throw std::invalid_argument("need at least one sample");
    CircleMap t1(p1, q);
    CircleMap t2(p2, q);
    std::mt19937_64 rng(seed);
    constexpr std::uint64_t kMaxDen = 1'000'000;
    for (std::uint64_t s = 0; s < samples; ++s) {
        std::uint64_t den = 1 + rng() % kMaxDen;
        std::uint64_t lo = (den + q - 1) / q;  // ceil(den / q) keeps x >= 1/q
        std::uint64_t num = lo + rng() % (den - lo + 1);
        CirclePoint x(Rational(num, den), q);
        CirclePoint a = t1.apply(t2.apply(x));
        CirclePoint b = t2.apply(t1.apply(x));
        if (!(a == b)) return CommutationResult{false, x.value()};
    }
    return CommutationResult{true, std::nullopt};
}

struct DensityReport {
    std::uint64_t side;      // N
    std::uint64_t hits;      // tuples (or exponents) with a zero digit
    std::uint64_t total;
    double fraction;
};

// Fraction of n in [1, N] with a zero digit in the base-q expansion of
// p^n. The power is advanced by one small multiplication per step; a
// worker ramps to its chunk start the same way, so output is independent
// of the worker count.
inline DensityReport zero_density_rank1(std::uint64_t p, std::uint32_t q, std::uint64_t N,
                                        unsigned workers = 1) {
    check_base(q);
    if (p < 2) throw std::invalid_argument("multiplier p must be at least 2");
    if (N < 1) throw std::invalid_argument("range bound must be at least 1");
    if (p > UINT32_MAX) throw std::invalid_argument("multiplier too large for digit sweep");
    const auto pi = static_cast<std::uint32_t>(p);

    std::uint64_t chunk = workers > 1 ? (N + workers - 1) / workers : N;
    auto scan = [pi, q](std::uint64_t begin, std::uint64_t end) {
        DigitVector v = to_digits(1, q);
        for (std::uint64_t n = 1; n < begin; ++n) v = mul_small(v, pi).product;
        std::uint64_t hits = 0;
        for (std::uint64_t n = begin; n < end; ++n) {
            v = mul_small(v, pi).product;
            if (v.has_zero_digit()) ++hits;
        }
        return hits;
    };

    std::vector<std::uint64_t> parts = run_chunked<std::uint64_t>(1, N + 1, chunk, workers, scan);
    std::uint64_t hits = std::accumulate(parts.begin(), parts.end(), std::uint64_t{0});
    return DensityReport{N, hits, N, double(hits) / double(N)};
}

// Prime tuple action spec: base q, ordered distinct primes, and a divisor
// d of q giving the starting point d/q of the orbit.
struct ActionSpec {
    std::uint32_t base;
    std::vector<std::uint32_t> primes;
    std::uint32_t divisor = 1;

    void validate() const {
        check_base(base);
        if (primes.empty()) throw std::invalid_argument("prime list must not be empty");
        for (std::size_t i = 0; i < primes.size(); ++i) {
            if (!detail::is_prime_u64(primes[i]))
                throw std::invalid_argument("list entries must be prime");
            for (std::size_t j = i + 1; j < primes.size(); ++j)
                if (primes[i] == primes[j]) throw std::invalid_argument("primes must be distinct");
        }
        if (divisor < 1 || base % divisor != 0)
            throw std::invalid_argument("divisor must divide the base");
    }

    // Allowable: some prime divisor of the base is missing from the list,
    // which is exactly the rational-independence condition.
    bool allowable() const {
        std::vector<std::uint64_t> ps(primes.begin(), primes.end());
        return rational_independence(base, ps).independent;
    }
};

inline constexpr std::uint64_t kDefaultTupleBudget = 10'000'000;

// Fraction of exponent tuples n in {0..N}^k with a zero digit in the
// base-q expansion of d * prod p_i^{n_i}. Tuples are enumerated in
// odometer order; a stack of prefix products keeps the work at one small
// multiplication per tuple. Workers split the outermost exponent axis.
inline DensityReport zero_density_rank_k(const ActionSpec& spec, std::uint64_t N,
                                         unsigned workers = 1,
                                         std::uint64_t budget = kDefaultTupleBudget) {
    spec.validate();
    if (N < 1) throw std::invalid_argument("cube side must be at least 1");
    const std::size_t k = spec.primes.size();

    std::uint64_t total = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (total > budget / (N + 1)) throw std::overflow_error("tuple budget exceeded");
        total *= N + 1;
    }

    const std::uint32_t q = spec.base;
    auto scan = [&spec, N, q, k](std::uint64_t first_begin, std::uint64_t first_end) {
        // prefix[i] = digits of d * p_1^{n_1} ... p_i^{n_i}
        std::vector<DigitVector> prefix;
        prefix.reserve(k + 1);
        prefix.push_back(to_digits(spec.divisor, q));
        std::vector<std::uint64_t> exps(k, 0);

        DigitVector start = prefix[0];
        for (std::uint64_t i = 0; i < first_begin; ++i)
            start = mul_small(start, spec.primes[0]).product;
        exps[0] = first_begin;
        prefix.push_back(start);
        for (std::size_t axis = 1; axis < k; ++axis) prefix.push_back(prefix.back());

        std::uint64_t hits = 0;
        for (;;) {
            if (prefix[k].has_zero_digit()) ++hits;
            // odometer increment, innermost axis last
            std::size_t axis = k;
            while (axis > 0) {
                std::size_t a = axis - 1;
                std::uint64_t limit = (a == 0) ? first_end - 1 : N;
                if (exps[a] < limit) {
                    ++exps[a];
                    prefix[a + 1] = mul_small(prefix[a + 1], spec.primes[a]).product;
                    for (std::size_t b = a + 1; b < k; ++b) {
                        exps[b] = 0;
                        prefix[b + 1] = prefix[b];
                    }
                    break;
                }
                --axis;
            }
            if (axis == 0) break;
        }
        return hits;
    };

    std::uint64_t chunk = workers > 1 ? (N + workers) / workers : N + 1;
    std::vector<std::uint64_t> parts = run_chunked<std::uint64_t>(0, N + 1, chunk, workers, scan);
    std::uint64_t hits = std::accumulate(parts.begin(), parts.end(), std::uint64_t{0});
    return DensityReport{N, hits, total, double(hits) / double(total)};
}

}  // namespace digitdyn

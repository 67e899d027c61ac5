#include "digitdyn/ergodic.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

using namespace digitdyn;

TEST_CASE("tail periods of the doubling map") {
    CHECK(tail_period(2, 3, 1) == 2);
    CHECK(tail_period(2, 3, 4) == 54);
    std::uint64_t expect = 2;
    for (std::uint32_t k = 1; k <= 6; ++k) {
        CHECK(tail_period(2, 3, k) == expect);
        expect *= 3;
    }
    CHECK(tail_period(7, 3, 1) == 1);  // 7 = 1 mod 3
    CHECK_THROWS_AS(tail_period(6, 3, 2), std::invalid_argument);
}

TEST_CASE("tail period equals the multiplicative order, oracle-checked") {
    std::mt19937_64 rng(1337);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t q = 2 + rng() % 9;
        std::uint32_t k = 1 + rng() % 3;
        std::uint64_t p = 2 + rng() % 50;
        if (std::gcd(p, q) != 1) continue;
        std::uint64_t qk = 1;
        for (std::uint32_t j = 0; j < k; ++j) qk *= q;
        // brute-force order
        std::uint64_t r = 1, ord = 0;
        do {
            r = r * (p % qk) % qk;
            ++ord;
        } while (r != 1);
        CAPTURE(p, q, k);
        REQUIRE(tail_period(p, q, k) == ord);
    }
}

TEST_CASE("each allowable tail appears once per period") {
    for (std::uint32_t k = 1; k <= 6; ++k) {
        std::uint64_t qk = 1;
        for (std::uint32_t j = 0; j < k; ++j) qk *= 3;
        std::uint64_t period = tail_period(2, 3, k);
        REQUIRE(period == 2 * qk / 3);
        std::vector<int> seen(qk, 0);
        std::uint64_t r = 1;
        for (std::uint64_t n = 0; n < period; ++n) {
            ++seen[r];
            r = r * 2 % qk;
        }
        // tails not ending in 0 occur exactly once, the rest never
        for (std::uint64_t v = 0; v < qk; ++v) {
            CAPTURE(k, v);
            REQUIRE(seen[v] == (v % 3 == 0 ? 0 : 1));
        }
    }
}

TEST_CASE("primitive roots") {
    CHECK(is_primitive_root(2, 9));
    CHECK(is_primitive_root(2, 3));
    CHECK(is_primitive_root(2, 27));
    CHECK_FALSE(is_primitive_root(2, 7));  // order 3, phi = 6
    CHECK_FALSE(is_primitive_root(1, 5));
    CHECK_THROWS_AS(is_primitive_root(3, 9), std::invalid_argument);
}

TEST_CASE("primitive root agrees with a brute-force order computation") {
    for (std::uint64_t m = 3; m <= 200; ++m) {
        std::uint64_t phi = 0;
        for (std::uint64_t a = 1; a < m; ++a)
            if (std::gcd(a, m) == 1) ++phi;
        for (std::uint64_t p = 1; p < m; ++p) {
            if (std::gcd(p, m) != 1) continue;
            std::uint64_t r = 1, ord = 0;
            do {
                r = r * p % m;
                ++ord;
            } while (r != 1);
            CAPTURE(p, m);
            REQUIRE(is_primitive_root(p, m) == (ord == phi));
        }
    }
}

TEST_CASE("rational independence by factorization") {
    auto ten = rational_independence(10, {2, 5});
    CHECK_FALSE(ten.independent);
    CHECK(ten.exponents == std::vector<std::uint32_t>{1, 1});
    CHECK(ten.q_exponent == 1);

    CHECK(rational_independence(3, {2}).independent);

    auto four = rational_independence(4, {2});
    CHECK_FALSE(four.independent);
    CHECK(four.exponents == std::vector<std::uint32_t>{2});

    CHECK(rational_independence(10, {2, 3}).independent);  // 5 missing
    CHECK_THROWS_AS(rational_independence(10, {4}), std::invalid_argument);
    CHECK_THROWS_AS(rational_independence(10, {2, 2}), std::invalid_argument);
}

TEST_CASE("independence agrees with a bounded brute-force search") {
    const std::vector<std::uint64_t> pool{2, 3, 5, 7, 11, 13};
    std::mt19937_64 rng(60601);
    int done = 0;
    while (done < 50) {
        std::uint64_t q = 2 + rng() % 49;
        std::vector<std::uint64_t> primes;
        for (std::uint64_t p : pool)
            if (rng() % 3 == 0) primes.push_back(p);
        if (primes.empty() || primes.size() > 3) continue;
        ++done;

        // brute force: does prod p_i^{n_i} = q^{n0} have a nontrivial
        // solution with |n_i| <= 8, 0 <= n0 <= 8?
        bool dependent = false;
        std::vector<std::int64_t> exps(primes.size(), -8);
        for (;;) {
            for (std::int64_t n0 = 0; n0 <= 8 && !dependent; ++n0) {
                bool trivial = n0 == 0;
                Rational lhs = 1;
                for (std::size_t i = 0; i < primes.size(); ++i) {
                    if (exps[i] != 0) trivial = false;
                    lhs *= rational_pow(Rational(primes[i]), exps[i]);
                }
                if (trivial) continue;
                if (lhs == rational_pow(Rational(q), n0)) dependent = true;
            }
            std::size_t i = 0;
            while (i < exps.size() && exps[i] == 8) exps[i++] = -8;
            if (i == exps.size()) break;
            ++exps[i];
        }
        CAPTURE(q, primes);
        REQUIRE(rational_independence(q, primes).independent == !dependent);
    }
}

TEST_CASE("commuting circle maps") {
    CHECK(commutation_check(2, 5, 3, 1000).commutes);
    CHECK(commutation_check(3, 5, 7, 1000).commutes);
    CHECK(commutation_check(7, 7, 10, 100).commutes);
}

TEST_CASE("commutation holds for all small prime pairs and bases") {
    const std::vector<std::uint64_t> primes{2, 3, 5, 7, 11, 13, 17, 19};
    for (std::uint32_t q = 3; q <= 12; ++q)
        for (std::size_t i = 0; i < primes.size(); ++i)
            for (std::size_t j = i + 1; j < primes.size(); ++j) {
                CAPTURE(q, primes[i], primes[j]);
                REQUIRE(commutation_check(primes[i], primes[j], q, 1000).commutes);
            }
}

TEST_CASE("zero density for powers of two in base three") {
    auto r = zero_density_rank1(2, 3, 15);
    // zero-free exponents up to 15: 1,2,3,4,15 (oracle-frozen)
    CHECK(r.hits == 10);
    CHECK(r.total == 15);
    CHECK(r.fraction == Catch::Approx(10.0 / 15.0));
    for (std::uint64_t n = 1; n <= 15; ++n) {
        bool zero = oracle::has_zero_digit(oracle::pow(2, n), 3);
        bool zero_free = (n <= 4 || n == 15);
        REQUIRE(zero == !zero_free);
    }
}

TEST_CASE("powers of two in base four hit from the second exponent on") {
    // 4 | 2^n for n >= 2, so only n = 1 misses
    for (std::uint64_t N : {2ULL, 5ULL, 40ULL}) {
        auto r = zero_density_rank1(2, 4, N);
        CHECK(r.hits == N - 1);
    }
}

TEST_CASE("rank-1 density sweep is worker-count independent") {
    auto one = zero_density_rank1(2, 3, 500, 1);
    auto three = zero_density_rank1(2, 3, 500, 3);
    CHECK(one.hits == three.hits);
}

TEST_CASE("rank-1 fraction trends upward") {
    std::vector<std::uint64_t> sides{100, 500, 1000, 4000, 8000};
    double prev = 0.0;
    for (std::uint64_t N : sides) {
        auto r = zero_density_rank1(2, 3, N);
        CHECK(r.fraction >= prev);
        prev = r.fraction;
    }
    CHECK(prev >= 0.995);
}

TEST_CASE("action spec validation and allowability") {
    ActionSpec ok{7, {2, 3, 5}, 1};
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.allowable());

    ActionSpec ten{10, {2, 5}, 1};
    CHECK_FALSE(ten.allowable());  // every prime divisor of 10 listed

    ActionSpec bad_div{10, {3}, 4};
    CHECK_THROWS_AS(bad_div.validate(), std::invalid_argument);
    ActionSpec not_prime{10, {9}, 1};
    CHECK_THROWS_AS(not_prime.validate(), std::invalid_argument);
}

TEST_CASE("rank-k density: base divides most products") {
    // q = 10, primes {2, 5}: every tuple with n1, n2 >= 1 hits
    ActionSpec spec{10, {2, 5}, 1};
    for (std::uint64_t N : {1ULL, 3ULL, 6ULL}) {
        auto r = zero_density_rank_k(spec, N);
        CHECK(r.total == (N + 1) * (N + 1));
        CHECK(r.hits >= N * N);
        CHECK(r.fraction >= double(N * N) / double((N + 1) * (N + 1)));
    }
}

TEST_CASE("rank-k density: divisor q forces the last digit to zero") {
    ActionSpec spec{5, {2, 3}, 5};
    auto r = zero_density_rank_k(spec, 50);
    CHECK(r.fraction == 1.0);
    CHECK(r.hits == r.total);
}

TEST_CASE("rank-k density matches an exhaustive oracle on a small cube") {
    ActionSpec spec{7, {2, 3}, 1};
    const std::uint64_t N = 12;
    std::uint64_t expect = 0;
    for (std::uint64_t a = 0; a <= N; ++a)
        for (std::uint64_t b = 0; b <= N; ++b)
            if (oracle::has_zero_digit(oracle::pow(2, a) * oracle::pow(3, b), 7)) ++expect;
    auto r = zero_density_rank_k(spec, N);
    CHECK(r.hits == expect);
    CHECK(r.total == (N + 1) * (N + 1));
}

TEST_CASE("rank-k sweep is worker-count independent and budget-guarded") {
    ActionSpec spec{7, {2, 3, 5}, 1};
    auto one = zero_density_rank_k(spec, 8, 1);
    auto four = zero_density_rank_k(spec, 8, 4);
    CHECK(one.hits == four.hits);
    CHECK_THROWS_AS(zero_density_rank_k(spec, 1000), std::overflow_error);
}

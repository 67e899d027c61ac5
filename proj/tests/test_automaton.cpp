#include "digitdyn/automaton.hpp"

#include "digitdyn/render.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <sstream>

using namespace digitdyn;

namespace {

AutomatonConfig example1() {
    AutomatonConfig c;
    c.base = 3;
    c.primes = {2};
    c.policy = MultiplierPolicy::cyclic;
    c.seed_value = 1;
    return c;
}

}  // namespace

TEST_CASE("powers of two in base three, row by row") {
    auto states = run_collect(example1(), 5);
    std::vector<std::string> rows;
    for (const auto& s : states) rows.push_back(s.row.to_string());
    CHECK(rows == std::vector<std::string>{"1", "2", "11", "22", "121", "1012"});
}

TEST_CASE("base-4 seeds 1 and 2 track 3^n and 2*3^n") {
    AutomatonConfig c;
    c.base = 4;
    c.primes = {3};
    c.seed_value = 1;
    auto states = run_collect(c, 40);
    for (const auto& s : states) {
        oracle::Big expect = oracle::pow(3, s.row_index);
        REQUIRE(std::vector<std::uint8_t>(s.row.digits().begin(), s.row.digits().end()) ==
                oracle::digits(expect, 4));
    }
    c.seed_value = 2;
    states = run_collect(c, 40);
    for (const auto& s : states) {
        oracle::Big expect = 2 * oracle::pow(3, s.row_index);
        REQUIRE(std::vector<std::uint8_t>(s.row.digits().begin(), s.row.digits().end()) ==
                oracle::digits(expect, 4));
    }
}

TEST_CASE("zero steps emits only the seed row") {
    auto states = run_collect(example1(), 0);
    REQUIRE(states.size() == 1);
    CHECK(states[0].row_index == 0);
    CHECK(states[0].row.to_string() == "1");
    CHECK(states[0].last_carries.size() == 0);
}

TEST_CASE("single-digit step without growth") {
    AutomatonConfig c;
    c.base = 10;
    c.primes = {3};
    c.seed_value = 2;
    auto states = run_collect(c, 1);
    CHECK(states[1].row.to_string() == "6");
    CHECK(states[1].last_carries.max_value() == 0);
}

TEST_CASE("cyclic policy over two primes matches the bignum oracle") {
    AutomatonConfig c;
    c.base = 5;
    c.primes = {2, 3};
    c.policy = MultiplierPolicy::cyclic;
    c.seed_value = 1;
    auto states = run_collect(c, 100);
    oracle::Big expect = oracle::pow(2, 50) * oracle::pow(3, 50);
    REQUIRE(std::vector<std::uint8_t>(states[100].row.digits().begin(),
                                      states[100].row.digits().end()) ==
            oracle::digits(expect, 5));
}

TEST_CASE("fixed sequence replays exactly and exhausts") {
    AutomatonConfig c;
    c.base = 10;
    c.primes = {2, 7};
    c.policy = MultiplierPolicy::fixed_sequence;
    c.sequence = {7, 7, 2};
    c.seed_value = 3;
    auto states = run_collect(c, 3);
    CHECK(from_digits(states[3].row) == 3 * 7 * 7 * 2);
    Automaton a(c);
    a.step();
    a.step();
    a.step();
    CHECK_THROWS_AS(a.step(), std::invalid_argument);
}

TEST_CASE("seeded random policy is reproducible and oracle-exact") {
    AutomatonConfig c;
    c.base = 10;
    c.primes = {2, 3, 7};
    c.policy = MultiplierPolicy::seeded_random;
    c.rng_seed = 424242;
    c.seed_value = 9;
    auto first = run_collect(c, 300);
    auto second = run_collect(c, 300);
    for (std::size_t i = 0; i < first.size(); ++i)
        REQUIRE(first[i].row == second[i].row);

    // reconstruct the multiplier at each step from consecutive rows
    oracle::Big value = 9;
    for (std::size_t i = 1; i < first.size(); ++i) {
        oracle::Big row = oracle::value(
            std::vector<std::uint8_t>(first[i].row.digits().begin(), first[i].row.digits().end()),
            10);
        REQUIRE(row % value == 0);
        oracle::Big pi = row / value;
        REQUIRE((pi == 2 || pi == 3 || pi == 7));
        value = row;
    }
}

TEST_CASE("config validation") {
    AutomatonConfig c = example1();
    c.seed_value = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = example1();
    c.primes = {4};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = example1();
    c.primes = {};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = example1();
    c.initial_carries = {3};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = example1();
    CHECK(c.allowable());
    c.base = 4;
    c.primes = {2};
    CHECK_FALSE(c.allowable());
}

TEST_CASE("nonzero initial carry column follows the recurrence") {
    AutomatonConfig c;
    c.base = 3;
    c.primes = {2};
    c.seed_value = 1;
    c.initial_carries = {1, 2, 0, 1};
    auto states = run_collect(c, 4);
    oracle::Big value = 1;
    for (std::size_t i = 1; i < states.size(); ++i) {
        value = value * 2 + c.initial_carries[i - 1];
        REQUIRE(std::vector<std::uint8_t>(states[i].row.digits().begin(),
                                          states[i].row.digits().end()) ==
                oracle::digits(value, 3));
    }
}

TEST_CASE("local rule examples") {
    CHECK(local_rule(0, 0, 0, 2, 3) == 0);
    // inferred carry 0: above-right 1 doubled gives the right digit 2
    CHECK(local_rule(1, 1, 2, 2, 3) == 2);
    CHECK_THROWS_AS(local_rule(1, 1, 1, 4, 3), std::invalid_argument);
}

TEST_CASE("local rule enumeration against direct two-digit multiplication") {
    // every (x_up, x_upright) pair with every incoming carry, base 3
    for (std::uint32_t up = 0; up < 3; ++up)
        for (std::uint32_t upright = 0; upright < 3; ++upright)
            for (std::uint32_t carry = 0; carry <= 1; ++carry) {
                std::uint32_t x_right = (2 * upright + carry) % 3;
                std::uint32_t carry_out = (2 * upright + carry) / 3;
                std::uint32_t expect = (2 * up + carry_out) % 3;
                CAPTURE(up, upright, carry);
                // carry only square with the rule when the incoming carry is
                // recoverable, which holds since 2*upright+carry < 9
                if (carry == 0)
                    REQUIRE(local_rule(up, upright, x_right, 2, 3) == expect);
            }
}

TEST_CASE("local reconstruction reproduces stepping") {
    std::vector<AutomatonConfig> configs;
    {
        AutomatonConfig c;
        c.base = 3; c.primes = {2}; c.seed_value = 1;
        configs.push_back(c);
        c.base = 4; c.primes = {3}; c.seed_value = 1;
        configs.push_back(c);
        c.seed_value = 2;
        configs.push_back(c);
        c.base = 5; c.primes = {2, 3}; c.seed_value = 1;
        configs.push_back(c);
        c.base = 10; c.primes = {7}; c.seed_value = 123;
        configs.push_back(c);
    }
    for (const auto& c : configs) {
        Automaton a(c);
        for (int i = 0; i < 200; ++i) {
            DigitVector prev = a.state().row;
            std::uint32_t pi = a.multiplier_for_next_step();
            a.step(pi);
            CAPTURE(c.base, i);
            REQUIRE(local_reconstruct(prev, pi) == a.state().row);
        }
    }
}

TEST_CASE("tail columns of the doubling automaton are periodic") {
    auto states = run_collect(example1(), 500);
    for (std::uint32_t k = 1; k <= 5; ++k) {
        std::uint64_t qk = 1;
        for (std::uint32_t j = 0; j < k; ++j) qk *= 3;
        std::uint64_t period = 2 * qk / 3;
        auto tail = [&](std::size_t n) {
            std::uint64_t v = 0;
            for (std::size_t i = std::min<std::size_t>(k, states[n].row.size()); i > 0; --i)
                v = v * 3 + states[n].row.digit(i - 1);
            return v;
        };
        for (std::size_t n = 0; n + period <= 500; ++n) {
            CAPTURE(k, n);
            REQUIRE(tail(n) == tail(n + period));
        }
        // the period is minimal: every proper divisor fails somewhere
        for (std::uint64_t t = 1; t < period; ++t) {
            if (period % t != 0) continue;
            bool all_match = true;
            for (std::size_t n = 0; n + t <= 400; ++n)
                if (tail(n) != tail(n + t)) {
                    all_match = false;
                    break;
                }
            REQUIRE_FALSE(all_match);
        }
    }
}

TEST_CASE("block histograms") {
    DigitVector constant(5, {2, 2, 2, 2, 2, 2});
    auto h = block_histogram(constant, 1);
    REQUIRE(h.counts.size() == 1);
    CHECK(h.counts.at(2) == 6);
    CHECK(h.tv_distance_uniform() == Catch::Approx(1.0 - 1.0 / 5.0));

    DigitVector row(3, {1, 0, 2, 1});  // [1201]_3
    auto h2 = block_histogram(row, 2);
    CHECK(h2.windows == 3);
    // windows (positions high..low): [0,1]->01, [1,2]->20, [2,3]->12
    CHECK(h2.counts.at(1) == 1);
    CHECK(h2.counts.at(6) == 1);
    CHECK(h2.counts.at(5) == 1);
    CHECK_THROWS_AS(block_histogram(row, 5), std::invalid_argument);
}

TEST_CASE("digit zero frequency in a long power of two") {
    AutomatonConfig c = example1();
    Automaton a(c);
    for (int i = 0; i < 1000; ++i) a.step();
    auto h = block_histogram(a.state().row, 1);
    double freq0 = h.frequency(0);
    CHECK(freq0 > 0.25);
    CHECK(freq0 < 0.42);
    double dev = k_balance_deviation(a.state().row, 2);
    CHECK(dev >= 0.0);
    CHECK(dev <= 1.0);
}

TEST_CASE("balanced rows contain every block exactly once") {
    for (auto [q, k] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
             {2, 1}, {2, 3}, {3, 2}, {3, 3}, {5, 2}}) {
        DigitVector row = balanced_row(q, k);
        std::uint64_t qk = 1;
        for (std::uint32_t j = 0; j < k; ++j) qk *= q;
        REQUIRE(row.size() == qk + k - 1);
        auto h = block_histogram(row, k);
        REQUIRE(h.windows == qk);
        REQUIRE(h.counts.size() == qk);
        for (const auto& [block, count] : h.counts) REQUIRE(count == 1);
        CHECK(k_balance_deviation(row, k) == 0.0);
        CHECK(h.tv_distance_uniform() == 0.0);
    }
}

TEST_CASE("balance deviation of degenerate rows") {
    DigitVector constant(3, {1, 1, 1, 1, 1});
    CHECK(k_balance_deviation(constant, 1) == Catch::Approx(1.0 - 1.0 / 3.0));
    CHECK_THROWS_AS(k_balance_deviation(DigitVector(3, {1, 2}), 2), std::invalid_argument);
}

TEST_CASE("block values read most significant first") {
    std::vector<std::uint8_t> b{2, 1};
    CHECK(block_value(b, 3) == 7);
    std::vector<std::uint8_t> ones(4, 1);
    CHECK(block_value(ones, 3) == (81 - 1) / 2);
    std::vector<std::uint8_t> zeros(3, 0);
    CHECK(block_value(zeros, 3) == 0);
}

TEST_CASE("digit below a window") {
    std::vector<std::uint8_t> one{1};
    CHECK(digit_below(1, one, 0, 3, 2) == 2);  // 11_3 * 2 = 22_3
    CHECK(digit_below(1, one, 1, 3, 2) == 0);  // carry flips the digit at the all-ones block
    std::vector<std::uint8_t> zz{0, 0};
    CHECK(digit_below(0, zz, 0, 3, 2) == 0);
    CHECK_THROWS_AS(digit_below(1, one, 2, 3, 2), std::invalid_argument);
}

TEST_CASE("window map agrees with actual multiplication on random rows") {
    // generalized (q, pi) cases validated against mul_small
    std::mt19937_64 rng(321);
    for (auto [q, pi] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
             {3, 2}, {5, 3}, {10, 7}}) {
        for (int trial = 0; trial < 200; ++trial) {
            std::uint32_t k = 1 + rng() % 3;
            std::size_t len = k + 2 + rng() % 6;
            std::vector<std::uint8_t> digits(len);
            for (auto& d : digits) d = static_cast<std::uint8_t>(rng() % q);
            digits.back() = static_cast<std::uint8_t>(1 + rng() % (q - 1));
            DigitVector row(q, digits);
            auto stepped = mul_small(row, pi);
            for (std::size_t i = k; i < row.size(); ++i) {
                std::uint64_t v = 0;
                for (std::size_t j = 0; j < k; ++j) v = v * q + row.digit(i - 1 - j);
                std::uint32_t carry_in = i >= k + 1 ? stepped.carries.carry(i - k - 1) : 0;
                CAPTURE(q, pi, k, i);
                REQUIRE(digit_below_value(row.digit(i), v, k, carry_in, q, pi) ==
                        stepped.product.digit(i));
            }
        }
    }
}

TEST_CASE("generalized window map reduces to the literal base-3 doubling formula") {
    // exhaustive over x, block value, carry for orders up to 7
    std::uint64_t qk = 1;
    for (std::uint32_t k = 1; k <= 7; ++k) {
        qk *= 3;
        for (std::uint64_t v = 0; v < qk; ++v)
            for (std::uint32_t x = 0; x < 3; ++x)
                for (std::uint32_t c = 0; c <= 1; ++c) {
                    std::uint32_t literal = (2 * x + (2 * v + c) / qk) % 3;
                    if (digit_below_value(x, v, k, c, 3, 2) != literal) {
                        CAPTURE(k, v, x, c);
                        REQUIRE(digit_below_value(x, v, k, c, 3, 2) == literal);
                    }
                }
    }
    SUCCEED();
}

TEST_CASE("window map audit for small orders") {
    for (std::uint32_t k = 1; k <= 4; ++k) {
        auto audit = verify_digit_below(k);
        CAPTURE(k);
        REQUIRE(audit.passed);
        std::uint64_t qk = 1;
        for (std::uint32_t j = 0; j < k; ++j) qk *= 3;
        CHECK(audit.expected_count == (qk - 1) / 2);
        REQUIRE(audit.carry_sensitive_blocks ==
                std::vector<std::uint64_t>{(qk - 1) / 2});
    }
    CHECK(verify_digit_below(1).expected_count == 1);
}

TEST_CASE("empirical transitions on consecutive rows") {
    auto states = run_collect(example1(), 40);
    auto m = empirical_transition_matrix(states[30].row, states[31].row, 1);
    for (std::uint64_t x = 0; x < 3; ++x) {
        if (!m.present(x)) continue;
        Rational mass = 0;
        std::uint32_t support = 0;
        for (std::uint64_t y = 0; y < 3; ++y) {
            Rational p = m.probability(x, y);
            mass += p;
            if (p > 0) {
                ++support;
                // only the two successor digits of x are reachable
                REQUIRE((y == (2 * x) % 3 || y == (2 * x + 1) % 3));
            }
        }
        REQUIRE(mass == 1);
        REQUIRE(support <= 2);
    }
}

TEST_CASE("single-digit rows give an absent-row matrix at block length two") {
    DigitVector a(3, {2});
    DigitVector b(3, {1, 1});
    auto m = empirical_transition_matrix(a, b, 2);
    CHECK(m.counts.empty());
    CHECK_FALSE(m.present(0));
    CHECK_THROWS_AS(empirical_transition_matrix(b, a, 1), std::invalid_argument);
}

TEST_CASE("balanced rows protect the digit transitions") {
    // order k+1 balanced row: every (digit, k-block) pair occurs exactly
    // once among the windows away from the boundary, so each empirical
    // transition probability sits at exactly 1/2 +- 1/(2*3^k)
    for (std::uint32_t k = 1; k <= 4; ++k) {
        DigitVector row = balanced_row(3, k + 1);
        auto stepped = mul_small(row, 2);
        // drop the k boundary positions (no full block to their right)
        std::vector<std::uint8_t> from(row.digits().begin() + k, row.digits().end());
        std::vector<std::uint8_t> to(stepped.product.digits().begin() + k,
                                     stepped.product.digits().end());
        auto m = empirical_transition_matrix(DigitVector(3, from), DigitVector(3, to), 1);
        std::uint64_t qk = 1;
        for (std::uint32_t j = 0; j < k; ++j) qk *= 3;
        Rational bound(1, 2 * qk);
        for (std::uint64_t x = 0; x < 3; ++x) {
            REQUIRE(m.present(x));
            for (std::uint64_t y : {(2 * x) % 3, (2 * x + 1) % 3}) {
                Rational diff = m.probability(x, y) - Rational(1, 2);
                if (diff < 0) diff = -diff;
                CAPTURE(k, x, y);
                REQUIRE(diff <= bound);
            }
        }
    }
}

TEST_CASE("repunits divide and never equidistribute") {
    auto report = repunit_demo(5);
    REQUIRE(report.steps.size() == 5);
    CHECK(report.all_checks_passed);
    CHECK(report.steps[0].digit_count == 2);    // R_1 = 11
    CHECK(report.steps[1].digit_count == 4);    // R_2 = 1111
    for (const auto& s : report.steps) {
        CHECK(s.divisible_by_previous);
        CHECK(s.split_coprime);
        CHECK(s.ones_fraction == 1.0);
    }
    CHECK_THROWS_AS(repunit_demo(25), std::overflow_error);
}

TEST_CASE("head search locates prefixes") {
    PrecisionPolicy pol = PrecisionPolicy::with_bits(192);
    CHECK(head_search(2, 3, std::vector<std::uint8_t>{1}, 50, pol) == 0);
    // scan oracle: first power of two starting [1,2] in base 3 is 2^4 = [121]_3
    CHECK(head_search(2, 3, std::vector<std::uint8_t>{1, 2}, 200, pol) == 4);
    // 2^6 = [2101]_3
    auto found = head_search(2, 3, std::vector<std::uint8_t>{2, 1, 0, 1}, 500, pol);
    REQUIRE(found);
    CHECK(*found == 6);
    DigitVector sixty_four = to_digits(64, 3);
    REQUIRE(testutil::as_vector(sixty_four.digits()) ==
            std::vector<std::uint8_t>{1, 0, 1, 2});
    CHECK_FALSE(head_search(2, 3, std::vector<std::uint8_t>{1, 1, 1, 1, 1, 1, 1, 1}, 20, pol));
    CHECK_THROWS_AS(head_search(2, 3, std::vector<std::uint8_t>{0, 1}, 10, pol),
                    std::invalid_argument);
}

TEST_CASE("head search cross-checks against a direct scan") {
    PrecisionPolicy pol = PrecisionPolicy::with_bits(192);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::uint8_t> prefix{static_cast<std::uint8_t>(1 + rng() % 2),
                                         static_cast<std::uint8_t>(rng() % 3)};
        auto direct = [&]() -> std::optional<std::uint64_t> {
            for (std::uint64_t n = 0; n <= 300; ++n) {
                auto ds = oracle::digits(oracle::pow(2, n), 3);
                if (ds.size() < 2) continue;
                if (ds[ds.size() - 1] == prefix[0] && ds[ds.size() - 2] == prefix[1]) return n;
            }
            return std::nullopt;
        }();
        CAPTURE(int(prefix[0]), int(prefix[1]));
        REQUIRE(head_search(2, 3, prefix, 300, pol) == direct);
    }
}

TEST_CASE("text rendering right-aligns rows") {
    auto states = run_collect(example1(), 3);
    CHECK(render_text(states) == " 1\n 2\n11\n22\n");
}

TEST_CASE("forty-five rows of doubling render as the triangular grid") {
    auto states = run_collect(example1(), 44);  // seed plus 44 successors
    GridImage img = render_grid(states);
    CHECK(img.height == 45);
    CHECK(img.width == 28);  // 2^44 has 28 digits in base 3
    // right-aligned triangle: blank prefixes never grow downward
    std::uint64_t prev_blanks = img.width;
    for (std::uint64_t r = 0; r < img.height; ++r) {
        std::uint64_t blanks = 0;
        while (blanks < img.width && img.cells[r * img.width + blanks] == kGridBlank) ++blanks;
        CHECK(blanks <= prev_blanks);
        prev_blanks = blanks;
        // occupied cells carry valid digits and match the row
        for (std::uint64_t c = blanks; c < img.width; ++c)
            REQUIRE(img.cells[r * img.width + c] < 3);
        REQUIRE(img.width - blanks == states[r].row.size());
    }
}

TEST_CASE("the two base-4 tripling grids compose side by side") {
    AutomatonConfig c;
    c.base = 4;
    c.primes = {3};
    c.seed_value = 1;
    auto left = run_collect(c, 22);  // 23 rows, as in the paired figure
    c.seed_value = 2;
    auto right = run_collect(c, 22);

    auto lines = [](const std::string& text) {
        std::vector<std::string> out;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) out.push_back(line);
        return out;
    };
    auto ll = lines(render_text(left));
    auto rl = lines(render_text(right));
    REQUIRE(ll.size() == 23);
    REQUIRE(rl.size() == 23);
    std::string joined;
    for (std::size_t i = 0; i < 23; ++i) {
        REQUIRE(ll[i].size() == ll[0].size());  // rectangular grids
        REQUIRE(rl[i].size() == rl[0].size());
        joined += ll[i] + "   " + rl[i] + "\n";
    }
    // seed line: 1 on the left grid, 2 on the right
    CHECK(ll[0].back() == '1');
    CHECK(rl[0].back() == '2');
    CHECK(joined.size() == 23 * (ll[0].size() + rl[0].size() + 4));
}

TEST_CASE("grid image layout") {
    auto states = run_collect(example1(), 5);
    GridImage img = render_grid(states);
    CHECK(img.width == 4);   // 1012 has four digits
    CHECK(img.height == 6);
    CHECK(img.base == 3);
    // top row: blank blank blank 1
    CHECK(img.cells[0] == kGridBlank);
    CHECK(img.cells[3] == 1);
    // bottom row: 1 0 1 2
    CHECK(img.cells[5 * 4 + 0] == 1);
    CHECK(img.cells[5 * 4 + 1] == 0);
    CHECK(img.cells[5 * 4 + 2] == 1);
    CHECK(img.cells[5 * 4 + 3] == 2);

    std::ostringstream out;
    write_grid(out, img);
    std::string data = out.str();
    CHECK(data.substr(0, 13) == "MAGRID 4 6 3\n");
    CHECK(data.size() == 13 + 24);
}

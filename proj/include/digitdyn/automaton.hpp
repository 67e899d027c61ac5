#pragma once

// Multiplication automata: rows are base-q digit strings, each step
// multiplies by a prime from a finite set while recording the carry
// sequence. Includes the three-cell local rule, block statistics,
// synthetic balanced rows (de Bruijn), the digit-below-a-window map with
// its counting properties, empirical transition matrices, the repunit
// counterexample and prefix search through rotation coordinates.

#include "digitdyn/circle_map.hpp"
#include "digitdyn/ergodic.hpp"
#include "digitdyn/precision.hpp"
#include "digitdyn/radix.hpp"
#include "digitdyn/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace digitdyn {

namespace detail {

inline std::uint64_t pow_u64_checked(std::uint64_t base, std::uint32_t exp,
                                     std::uint64_t limit = UINT64_MAX / 2) {
    std::uint64_t acc = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (acc > limit / base) throw std::overflow_error("power exceeds supported range");
        acc *= base;
    }
    return acc;
}

inline std::vector<std::uint8_t> digits_of_bigint(BigInt v, std::uint32_t q) {
    std::vector<std::uint8_t> digits;
    if (v < 0) throw std::invalid_argument("expected a nonnegative value");
    if (v == 0) return {0};
    while (v > 0) {
        digits.push_back(static_cast<std::uint8_t>(v % q));
        v /= q;
    }
    return digits;
}

}  // namespace detail

enum class MultiplierPolicy { fixed_sequence, cyclic, seeded_random };

struct AutomatonConfig {
    std::uint32_t base = 3;
    std::vector<std::uint32_t> primes{2};   // the multiplier set F
    MultiplierPolicy policy = MultiplierPolicy::cyclic;
    std::vector<std::uint32_t> sequence;    // explicit multipliers (fixed policy)
    std::uint64_t seed_value = 1;           // the seed a >= 1
    std::uint64_t rng_seed = 0;             // seeded_random policy
    std::vector<std::uint32_t> initial_carries;  // carry fed into step n (default all zero)

    void validate() const {
        check_base(base);
        if (primes.empty()) throw std::invalid_argument("multiplier set must not be empty");
        for (std::size_t i = 0; i < primes.size(); ++i) {
            if (!detail::is_prime_u64(primes[i]))
                throw std::invalid_argument("multipliers must be prime");
            for (std::size_t j = i + 1; j < primes.size(); ++j)
                if (primes[i] == primes[j])
                    throw std::invalid_argument("multipliers must be distinct");
        }
        if (seed_value < 1) throw std::invalid_argument("seed must be at least 1");
        for (std::uint32_t pi : sequence) {
            bool in_set = false;
            for (std::uint32_t f : primes) in_set |= (f == pi);
            if (!in_set) throw std::invalid_argument("fixed sequence entries must come from the multiplier set");
        }
        for (std::uint32_t c : initial_carries)
            if (c >= base) throw std::invalid_argument("initial carries must be below the base");
    }

    // Some prime divisor of the base is missing from F.
    bool allowable() const {
        std::vector<std::uint64_t> ps(primes.begin(), primes.end());
        return rational_independence(base, ps).independent;
    }
};

struct AutomatonState {
    std::uint64_t row_index;
    DigitVector row;
    CarrySequence last_carries;  // carries of the step that produced this row; empty for the seed

    std::size_t digit_count() const { return row.size(); }
};

class Automaton {
public:
    explicit Automaton(AutomatonConfig config)
        : config_(std::move(config)), state_(make_initial(config_)), rng_(config_.rng_seed) {}

    const AutomatonConfig& config() const { return config_; }
    const AutomatonState& state() const { return state_; }

    std::uint32_t multiplier_for_next_step() {
        switch (config_.policy) {
            case MultiplierPolicy::fixed_sequence:
                if (state_.row_index >= config_.sequence.size())
                    throw std::invalid_argument("fixed multiplier sequence exhausted");
                return config_.sequence[state_.row_index];
            case MultiplierPolicy::cyclic:
                return config_.primes[state_.row_index % config_.primes.size()];
            case MultiplierPolicy::seeded_random:
                return config_.primes[rng_() % config_.primes.size()];
        }
        throw std::logic_error("unknown multiplier policy");
    }

    void step(std::uint32_t multiplier) {
        bool in_set = false;
        for (std::uint32_t f : config_.primes) in_set |= (f == multiplier);
        if (!in_set) throw std::invalid_argument("multiplier not in the configured set");
        std::uint32_t carry = 0;
        if (state_.row_index < config_.initial_carries.size())
            carry = config_.initial_carries[state_.row_index];
        MulResult r = mul_small(state_.row, multiplier, carry);
        state_.row = std::move(r.product);
        state_.last_carries = std::move(r.carries);
        ++state_.row_index;
    }

    void step() { step(multiplier_for_next_step()); }

private:
    static AutomatonState make_initial(const AutomatonConfig& c) {
        c.validate();
        return AutomatonState{0, to_digits(c.seed_value, c.base), CarrySequence(c.base, {})};
    }

    AutomatonConfig config_;
    AutomatonState state_;
    std::mt19937_64 rng_;
};

// Emits the seed row and then `steps` successor rows.
inline void run(const AutomatonConfig& config, std::uint64_t steps,
                const std::function<void(const AutomatonState&)>& emit) {
    Automaton a(config);
    emit(a.state());
    for (std::uint64_t i = 0; i < steps; ++i) {
        a.step();
        emit(a.state());
    }
}

inline std::vector<AutomatonState> run_collect(const AutomatonConfig& config,
                                               std::uint64_t steps) {
    std::vector<AutomatonState> states;
    states.reserve(steps + 1);
    run(config, steps, [&](const AutomatonState& s) { states.push_back(s); });
    return states;
}

// The three-cell local rule: the digit below x_up depends only on x_up,
// the digit above-right, the already-produced digit to the right, and the
// multiplier. Sound for multiplier <= base (carries then stay below the
// base and can be recovered mod q).
inline std::uint32_t local_rule(std::uint32_t x_up, std::uint32_t x_upright,
                                std::uint32_t x_right, std::uint32_t multiplier,
                                std::uint32_t base) {
    check_base(base);
    if (x_up >= base || x_upright >= base || x_right >= base)
        throw std::invalid_argument("digits out of range");
    if (multiplier < 2 || multiplier > base)
        throw std::invalid_argument("local rule requires 2 <= multiplier <= base");
    std::int64_t q = base;
    std::int64_t c_right = ((static_cast<std::int64_t>(x_right) -
                             static_cast<std::int64_t>(multiplier) * x_upright) % q + q) % q;
    std::int64_t carry_in =
        (static_cast<std::int64_t>(multiplier) * x_upright + c_right - x_right) / q;
    return static_cast<std::uint32_t>((multiplier * x_up + carry_in) % q);
}

// Rebuilds the successor row from the local rule alone (zero initial
// carry). Matches step() exactly; this is the locality property.
inline DigitVector local_reconstruct(const DigitVector& prev, std::uint32_t multiplier) {
    const std::uint32_t base = prev.base();
    auto digit_at = [&](std::size_t i) -> std::uint32_t {
        return i < prev.size() ? prev.digit(i) : 0;
    };
    std::vector<std::uint8_t> next(prev.size() + 1, 0);
    for (std::size_t i = 0; i <= prev.size(); ++i) {
        std::uint32_t x_upright = i == 0 ? 0 : digit_at(i - 1);
        std::uint32_t x_right = i == 0 ? 0 : next[i - 1];
        next[i] = static_cast<std::uint8_t>(
            local_rule(digit_at(i), x_upright, x_right, multiplier, base));
    }
    while (next.size() > 1 && next.back() == 0) next.pop_back();
    return DigitVector(base, std::move(next));
}

// ---- block statistics ----------------------------------------------------

// Value of a block read most-significant digit first: sum x_j q^{k-j}.
inline std::uint64_t block_value(std::span<const std::uint8_t> block, std::uint32_t base) {
    check_base(base);
    std::uint64_t v = 0;
    for (std::uint8_t d : block) {
        if (d >= base) throw std::invalid_argument("digit out of range");
        if (v > (UINT64_MAX - d) / base) throw std::overflow_error("block value overflow");
        v = v * base + d;
    }
    return v;
}

struct BlockHistogram {
    std::uint32_t base;
    std::uint32_t block_len;
    std::uint64_t windows;
    std::map<std::uint64_t, std::uint64_t> counts;  // block value (MSB-first) -> occurrences

    double frequency(std::uint64_t block) const {
        auto it = counts.find(block);
        if (it == counts.end()) return 0.0;
        return double(it->second) / double(windows);
    }

    // Total-variation distance to the uniform distribution on all q^len blocks.
    double tv_distance_uniform() const {
        double total_blocks = std::pow(double(base), double(block_len));
        double u = 1.0 / total_blocks;
        double sum = 0.0;
        for (const auto& [block, count] : counts)
            sum += std::abs(double(count) / double(windows) - u);
        sum += (total_blocks - double(counts.size())) * u;
        return 0.5 * sum;
    }
};

// Counts every length-len window of the row. Window at position i covers
// digit positions i..i+len-1, keyed by its value with the most significant
// (highest) position first.
inline BlockHistogram block_histogram(const DigitVector& row, std::uint32_t len) {
    if (len < 1) throw std::invalid_argument("block length must be at least 1");
    if (len > row.size()) throw std::invalid_argument("block length exceeds row length");
    const std::uint32_t q = row.base();
    BlockHistogram h{q, len, row.size() - len + 1, {}};
    std::uint64_t qlen = detail::pow_u64_checked(q, len, UINT64_MAX / 2);
    std::uint64_t value = 0;
    // rolling value over positions high..low as the window slides
    for (std::size_t i = 0; i < len; ++i)
        value = value * q + row.digit(len - 1 - i);
    ++h.counts[value];
    for (std::size_t i = 1; i + len <= row.size(); ++i) {
        value /= q;
        value += std::uint64_t(row.digit(i + len - 1)) * (qlen / q);
        ++h.counts[value];
    }
    return h;
}

// ---- balanced rows ---------------------------------------------------------

inline constexpr std::uint64_t kBalancedRowBudget = 10'000'000;

namespace detail {

// Lexicographically least de Bruijn cycle of order k over {0..q-1}
// (concatenated Lyndon words).
inline std::vector<std::uint8_t> de_bruijn_cycle(std::uint32_t q, std::uint32_t k) {
    std::vector<std::uint8_t> seq;
    std::vector<std::uint8_t> a(k + 1, 0);
    std::function<void(std::uint32_t, std::uint32_t)> db = [&](std::uint32_t t, std::uint32_t p) {
        if (t > k) {
            if (k % p == 0)
                for (std::uint32_t j = 1; j <= p; ++j) seq.push_back(a[j]);
        } else {
            a[t] = a[t - p];
            db(t + 1, p);
            for (std::uint32_t j = a[t - p] + 1; j < q; ++j) {
                a[t] = static_cast<std::uint8_t>(j);
                db(t + 1, t);
            }
        }
    };
    db(1, 1);
    return seq;
}

}  // namespace detail

// A row of length q^k + k - 1 in which every k-block occurs exactly once:
// a de Bruijn cycle, rotated so the most significant stored digit is
// nonzero, linearized with k-1 wraparound digits.
inline DigitVector balanced_row(std::uint32_t q, std::uint32_t k) {
    check_base(q);
    if (k < 1) throw std::invalid_argument("block length must be at least 1");
    std::uint64_t cells = detail::pow_u64_checked(q, k, kBalancedRowBudget);
    if (cells > kBalancedRowBudget) throw std::overflow_error("balanced row exceeds budget");

    std::vector<std::uint8_t> cycle = detail::de_bruijn_cycle(q, k);
    const std::uint64_t L = cycle.size();
    const std::uint64_t total = L + k - 1;

    // the stored MSB is position total-1 = cycle index (rot + k - 2) mod L;
    // pick the rotation that lands it on a nonzero symbol
    std::uint64_t rot = 0;
    for (std::uint64_t m = 0; m < L; ++m) {
        if (cycle[m] != 0) {
            std::uint64_t offset = (k >= 2) ? (k - 2) % L : L - 1;
            rot = (m + L - offset) % L;
            break;
        }
    }
    std::vector<std::uint8_t> digits(total);
    for (std::uint64_t i = 0; i < total; ++i) digits[i] = cycle[(rot + i) % L];
    return DigitVector(q, std::move(digits));
}

// Max over all q^k blocks of |empirical window frequency - q^{-k}|.
// Requires enough windows for every block to occur at least once.
inline double k_balance_deviation(const DigitVector& row, std::uint32_t k) {
    if (k < 1) throw std::invalid_argument("block length must be at least 1");
    const std::uint32_t q = row.base();
    std::uint64_t blocks = detail::pow_u64_checked(q, k, kBalancedRowBudget);
    if (blocks > kBalancedRowBudget) throw std::overflow_error("block space exceeds budget");
    if (row.size() < blocks + k - 1) throw std::invalid_argument("row too short to be k-balanced");

    BlockHistogram h = block_histogram(row, k);
    const double u = 1.0 / double(blocks);
    double dev = 0.0;
    for (const auto& [block, count] : h.counts) {
        double d = std::abs(double(count) / double(h.windows) - u);
        if (d > dev) dev = d;
    }
    if (h.counts.size() < blocks) dev = std::max(dev, u);  // some block absent
    return dev;
}

// ---- the digit below a protected window ------------------------------------

// Digit produced below x when the string x.B (B the k-block right of x,
// most significant first) is multiplied by `multiplier` with carry c
// entering at the right end of B:
//   (multiplier*x + floor((multiplier*v(B) + c) / q^k)) mod q.
inline std::uint32_t digit_below_value(std::uint32_t x, std::uint64_t block_value,
                                       std::uint32_t k, std::uint32_t carry,
                                       std::uint32_t base, std::uint32_t multiplier) {
    check_base(base);
    if (multiplier < 2) throw std::invalid_argument("multiplier must be at least 2");
    if (x >= base) throw std::invalid_argument("digit out of range");
    if (carry > max_carry(base, multiplier))
        throw std::invalid_argument("carry exceeds the maximal carryover");
    std::uint64_t qk = detail::pow_u64_checked(base, k, UINT64_MAX / 4);
    if (block_value >= qk) throw std::invalid_argument("block value out of range");
    unsigned __int128 t = static_cast<unsigned __int128>(multiplier) * block_value + carry;
    std::uint64_t shift = static_cast<std::uint64_t>(t / qk);
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(multiplier) * x + shift) % base);
}

inline std::uint32_t digit_below(std::uint32_t x, std::span<const std::uint8_t> block,
                                 std::uint32_t carry, std::uint32_t base,
                                 std::uint32_t multiplier) {
    return digit_below_value(x, block_value(block, base),
                             static_cast<std::uint32_t>(block.size()), carry, base, multiplier);
}

struct DigitBelowAudit {
    std::uint32_t k;
    bool passed;
    std::vector<std::uint64_t> carry_sensitive_blocks;  // expected: the all-ones block only
    std::uint64_t expected_count;                       // (3^k - 1) / 2
    std::vector<std::vector<std::uint64_t>> counts;     // counts[x][y] over blocks != all-ones
    std::string failure;
};

// Exhaustive audit of the base-3, multiplier-2 window map: the carry can
// influence the digit below x only across the all-ones block, and for
// every x each of its two successor digits is produced by exactly
// (3^k - 1)/2 of the remaining blocks.
inline DigitBelowAudit verify_digit_below(std::uint32_t k) {
    if (k < 1) throw std::invalid_argument("block length must be at least 1");
    constexpr std::uint32_t q = 3;
    constexpr std::uint32_t pi = 2;
    std::uint64_t blocks = detail::pow_u64_checked(q, k, kBalancedRowBudget);
    if (blocks > kBalancedRowBudget) throw std::overflow_error("block space exceeds budget");

    DigitBelowAudit audit{k, true, {}, (blocks - 1) / 2,
                          std::vector<std::vector<std::uint64_t>>(q, std::vector<std::uint64_t>(q, 0)),
                          {}};
    const std::uint64_t ones = (blocks - 1) / 2;  // value of the all-ones block

    for (std::uint64_t v = 0; v < blocks; ++v) {
        bool sensitive = false;
        for (std::uint32_t x = 0; x < q; ++x) {
            std::uint32_t y0 = digit_below_value(x, v, k, 0, q, pi);
            std::uint32_t y1 = digit_below_value(x, v, k, 1, q, pi);
            if (y0 != y1) sensitive = true;
            if (v != ones) ++audit.counts[x][y0];
        }
        if (sensitive) audit.carry_sensitive_blocks.push_back(v);
    }

    if (audit.carry_sensitive_blocks != std::vector<std::uint64_t>{ones}) {
        audit.passed = false;
        audit.failure = "carry sensitivity not confined to the all-ones block";
        return audit;
    }
    for (std::uint32_t x = 0; x < q; ++x) {
        std::uint32_t y0 = (pi * x) % q;
        std::uint32_t y1 = (pi * x + 1) % q;
        for (std::uint32_t y = 0; y < q; ++y) {
            std::uint64_t expect = (y == y0 || y == y1) ? audit.expected_count : 0;
            if (audit.counts[x][y] != expect) {
                audit.passed = false;
                audit.failure = "successor counts are not balanced";
                return audit;
            }
        }
    }
    return audit;
}

// ---- empirical transitions --------------------------------------------------

struct EmpiricalTransitionMatrix {
    std::uint32_t base;
    std::uint32_t block_len;
    std::uint64_t dimension;  // q^len source/target blocks
    std::map<std::uint64_t, std::map<std::uint64_t, std::uint64_t>> counts;
    std::map<std::uint64_t, std::uint64_t> row_totals;

    bool present(std::uint64_t from) const { return row_totals.count(from) > 0; }

    Rational probability(std::uint64_t from, std::uint64_t to) const {
        auto row = counts.find(from);
        if (row == counts.end()) throw std::invalid_argument("source block never observed");
        auto cell = row->second.find(to);
        std::uint64_t c = cell == row->second.end() ? 0 : cell->second;
        return Rational(c, row_totals.at(from));
    }
};

// Frequencies of block transitions X -> Y between aligned windows of two
// consecutive rows. Source blocks with no observations stay absent.
inline EmpiricalTransitionMatrix empirical_transition_matrix(const DigitVector& row,
                                                             const DigitVector& next,
                                                             std::uint32_t len) {
    if (len < 1) throw std::invalid_argument("block length must be at least 1");
    if (row.base() != next.base()) throw std::invalid_argument("rows disagree on base");
    if (next.size() < row.size())
        throw std::invalid_argument("misaligned rows: successor is shorter");
    const std::uint32_t q = row.base();
    std::uint64_t dim = detail::pow_u64_checked(q, len, kBalancedRowBudget);

    EmpiricalTransitionMatrix m{q, len, dim, {}, {}};
    if (row.size() < len) return m;  // no windows
    for (std::size_t i = 0; i + len <= row.size(); ++i) {
        std::uint64_t from = 0, to = 0;
        for (std::size_t j = 0; j < len; ++j) {
            from = from * q + row.digit(i + len - 1 - j);
            to = to * q + next.digit(i + len - 1 - j);
        }
        ++m.counts[from][to];
        ++m.row_totals[from];
    }
    return m;
}

// ---- repunits ---------------------------------------------------------------

struct RepunitStep {
    std::uint32_t n;
    std::uint64_t digit_count;       // 2^n
    bool divisible_by_previous;      // R_{n-1} | R_n (first step: trivially true)
    bool split_coprime;              // gcd(10^{2^n}-1, 10^{2^n}+1) = 1
    double ones_fraction;            // digit histogram: fraction of digit 1
};

struct RepunitReport {
    std::vector<RepunitStep> steps;
    bool all_checks_passed;
};

// R_n = (10^{2^n} - 1) / 9: a multiplier sequence drawn from an infinite
// prime set produces rows that never equidistribute (every digit is 1).
inline RepunitReport repunit_demo(std::uint32_t n_max) {
    if (n_max < 1) throw std::invalid_argument("need n_max >= 1");
    if (n_max > 19) throw std::overflow_error("digit budget exceeded");  // 2^n <= 10^6
    RepunitReport report{{}, true};
    BigInt prev = 0;
    for (std::uint32_t n = 1; n <= n_max; ++n) {
        std::uint64_t len = std::uint64_t(1) << n;
        BigInt power = big_pow(10, len);
        BigInt r = (power - 1) / 9;
        bool divides = (n == 1) ? true : (prev != 0 && r % prev == 0);
        BigInt g = boost::multiprecision::gcd(power - 1, power + 1);
        bool coprime = (g == 1);

        std::string s = r.str();
        std::uint64_t ones = 0;
        for (char ch : s)
            if (ch == '1') ++ones;
        double frac = double(ones) / double(s.size());

        report.steps.push_back(RepunitStep{n, len, divides, coprime, frac});
        report.all_checks_passed =
            report.all_checks_passed && divides && coprime && frac == 1.0;
        prev = r;
    }
    return report;
}

// ---- prefix search ----------------------------------------------------------

// Smallest n <= n_max such that the base-q expansion of p^n begins with
// the given digits. Membership of {n alpha} in the target arc is tested
// with certified intervals; candidates (and inconclusive cases) are
// settled by direct expansion of p^n.
inline std::optional<std::uint64_t> head_search(std::uint64_t p, std::uint32_t q,
                                                std::span<const std::uint8_t> prefix,
                                                std::uint64_t n_max,
                                                const PrecisionPolicy& policy) {
    check_base(q);
    if (p < 2) throw std::invalid_argument("multiplier p must be at least 2");
    if (prefix.empty() || prefix.front() == 0)
        throw std::invalid_argument("prefix must have a nonzero leading digit");
    const auto L = static_cast<std::uint32_t>(prefix.size());
    std::uint64_t v = block_value(prefix, q);
    std::uint64_t qL = detail::pow_u64_checked(q, L, UINT64_MAX / 4);

    const unsigned bits = policy.bits;
    // target arc [log_q v - (L-1), log_q(v+1) - (L-1)) for {n alpha}
    Interval lnq = Interval::log_ui(q, bits);
    Interval arc_lo = (v == qL / q)
                          ? Interval::exact_si(0, bits)
                          : Interval::log_ui(v, bits).div(lnq).add_si(-(static_cast<long>(L) - 1));
    Interval arc_hi = (v + 1 == qL)
                          ? Interval::exact_si(1, bits)
                          : Interval::log_ui(v + 1, bits).div(lnq).add_si(-(static_cast<long>(L) - 1));
    Interval alpha = Interval::log_ratio(p, q, bits);

    auto confirmed = [&](std::uint64_t n) {
        BigInt value = big_pow(p, n);
        BigInt power = 1;
        std::uint64_t k = 0;
        while (power <= value) {
            power *= q;
            ++k;
        }
        if (k < L) return false;
        BigInt top = value / big_pow(q, k - L);
        std::vector<std::uint8_t> digits = detail::digits_of_bigint(top, q);
        if (digits.size() != L) return false;
        for (std::uint32_t j = 0; j < L; ++j)
            if (digits[L - 1 - j] != prefix[j]) return false;
        return true;
    };

    for (std::uint64_t n = 0; n <= n_max; ++n) {
        Interval na = alpha.mul_ui(n);
        auto f = na.frac();
        bool candidate;
        if (!f) {
            candidate = true;  // could not certify; settle by expansion
        } else if (f->certainly_below(arc_lo) || f->certainly_at_or_above(arc_hi)) {
            candidate = false;
        } else {
            candidate = true;
        }
        if (candidate && confirmed(n)) return n;
    }
    return std::nullopt;
}

inline std::optional<std::uint64_t> head_search(std::uint64_t p, std::uint32_t q,
                                                const std::vector<std::uint8_t>& prefix,
                                                std::uint64_t n_max,
                                                const PrecisionPolicy& policy) {
    return head_search(p, q, std::span<const std::uint8_t>(prefix), n_max, policy);
}

}  // namespace digitdyn

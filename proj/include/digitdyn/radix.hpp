#pragma once

// Base-q digit vectors with carry-explicit small-multiplier multiplication.
// This is the substrate for the Sloane map, the density sweeps and the
// multiplication automata: rows are never rebuilt from a fresh bignum, they
// are advanced one multiplier at a time while the emitted carries are kept.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace digitdyn {

inline constexpr std::uint32_t kMaxBase = 256;  // one byte per digit cell

inline void check_base(std::uint32_t base) {
    if (base < 2) throw std::invalid_argument("base must be at least 2");
    if (base > kMaxBase) throw std::invalid_argument("base must be at most 256");
}

// A natural number as its base-q digit sequence, least-significant first.
// Canonical form: no leading (most-significant) zero digit; zero itself is
// the single digit [0].
class DigitVector {
public:
    DigitVector(std::uint32_t base, std::vector<std::uint8_t> digits)
        : base_(base), digits_(std::move(digits)) {
        check_base(base_);
        if (digits_.empty()) throw std::invalid_argument("digit vector must not be empty");
        for (std::uint8_t d : digits_) {
            if (d >= base_) throw std::invalid_argument("digit out of range for base");
        }
        if (digits_.size() > 1 && digits_.back() == 0)
            throw std::invalid_argument("most-significant digit must be nonzero");
    }

    static DigitVector zero(std::uint32_t base) { return DigitVector(base, {0}); }

    std::uint32_t base() const { return base_; }
    std::size_t size() const { return digits_.size(); }
    std::uint8_t digit(std::size_t i) const { return digits_[i]; }
    std::span<const std::uint8_t> digits() const { return digits_; }

    bool is_zero() const { return digits_.size() == 1 && digits_[0] == 0; }

    bool has_zero_digit() const {
        for (std::uint8_t d : digits_)
            if (d == 0) return true;
        return false;
    }

    // Digit j counted from the left (most significant), 1-based.
    std::uint8_t digit_from_left(std::size_t j) const {
        if (j < 1 || j > digits_.size())
            throw std::out_of_range("digit index out of range");
        return digits_[digits_.size() - j];
    }

    // Most-significant-first rendering: 0-9a-z for bases up to 36, dotted
    // decimal cells otherwise ("12.0.7").
    std::string to_string() const {
        static constexpr char alphabet[] = "0123456789abcdefghijklmnopqrstuvwxyz";
        std::string out;
        if (base_ <= 36) {
            out.reserve(digits_.size());
            for (auto it = digits_.rbegin(); it != digits_.rend(); ++it)
                out.push_back(alphabet[*it]);
        } else {
            for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) {
                if (!out.empty()) out.push_back('.');
                out += std::to_string(static_cast<unsigned>(*it));
            }
        }
        return out;
    }

    friend bool operator==(const DigitVector&, const DigitVector&) = default;

private:
    std::uint32_t base_;
    std::vector<std::uint8_t> digits_;
};

// Carries emitted during one small-multiplier multiplication, one entry per
// result position: carries()[i] is the carry out of position i.
class CarrySequence {
public:
    CarrySequence(std::uint32_t base, std::vector<std::uint32_t> carries)
        : base_(base), carries_(std::move(carries)) {
        check_base(base_);
    }

    std::uint32_t base() const { return base_; }
    std::span<const std::uint32_t> carries() const { return carries_; }
    std::size_t size() const { return carries_.size(); }
    std::uint32_t carry(std::size_t i) const { return carries_[i]; }

    std::uint32_t max_value() const {
        std::uint32_t m = 0;
        for (std::uint32_t c : carries_)
            if (c > m) m = c;
        return m;
    }

private:
    std::uint32_t base_;
    std::vector<std::uint32_t> carries_;
};

inline DigitVector to_digits(std::uint64_t n, std::uint32_t base) {
    check_base(base);
    std::vector<std::uint8_t> digits;
    if (n == 0) {
        digits.push_back(0);
    } else {
        while (n > 0) {
            digits.push_back(static_cast<std::uint8_t>(n % base));
            n /= base;
        }
    }
    return DigitVector(base, std::move(digits));
}

inline std::uint64_t from_digits(const DigitVector& v) {
    std::uint64_t value = 0;
    const std::uint64_t base = v.base();
    for (std::size_t i = v.size(); i > 0; --i) {
        std::uint8_t d = v.digit(i - 1);
        if (value > (UINT64_MAX - d) / base)
            throw std::overflow_error("from_digits: value does not fit in 64 bits");
        value = value * base + d;
    }
    return value;
}

// Least carry bound never exceeded when multiplying by `multiplier` in base
// q, computed as the fixed point of c -> floor((multiplier*(q-1) + c) / q).
// The fixed point is multiplier - 1.
inline std::uint32_t max_carry(std::uint32_t base, std::uint32_t multiplier) {
    check_base(base);
    if (multiplier < 2) throw std::invalid_argument("multiplier must be at least 2");
    std::uint64_t c = 0;
    for (;;) {
        std::uint64_t next = (static_cast<std::uint64_t>(multiplier) * (base - 1) + c) / base;
        if (next == c) break;
        c = next;
    }
    return static_cast<std::uint32_t>(c);
}

struct MulResult {
    DigitVector product;
    CarrySequence carries;
};

// product = multiplier * value(v) + initial_carry, with the carry chain
//   t_i = multiplier * x_i + c_{i-1},  x'_i = t_i mod q,  c_i = t_i div q
// exposed position by position. initial_carry is the carry fed into
// position 0 (zero in the elementary setting; automaton configs may supply
// a nonzero initial carry column).
inline MulResult mul_small(const DigitVector& v, std::uint32_t multiplier,
                           std::uint32_t initial_carry = 0) {
    if (multiplier < 2) throw std::invalid_argument("multiplier must be at least 2");
    const std::uint32_t base = v.base();
    if (initial_carry >= base)
        throw std::invalid_argument("initial carry must be below the base");

    std::vector<std::uint8_t> out;
    std::vector<std::uint32_t> carries;
    out.reserve(v.size() + 2);
    carries.reserve(v.size() + 2);

    std::uint64_t carry = initial_carry;
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::uint64_t t = static_cast<std::uint64_t>(multiplier) * v.digit(i) + carry;
        out.push_back(static_cast<std::uint8_t>(t % base));
        carry = t / base;
        carries.push_back(static_cast<std::uint32_t>(carry));
    }
    while (carry > 0) {
        out.push_back(static_cast<std::uint8_t>(carry % base));
        carry /= base;
        carries.push_back(static_cast<std::uint32_t>(carry));
    }
    while (out.size() > 1 && out.back() == 0) out.pop_back();

    return MulResult{DigitVector(base, std::move(out)),
                     CarrySequence(base, std::move(carries))};
}

}  // namespace digitdyn

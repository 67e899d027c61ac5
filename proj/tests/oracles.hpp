#pragma once

// Independent oracles for the test suites. Everything here goes through
// boost::multiprecision integer arithmetic (repeated division, positional
// sums, bignum products) and never touches the digit-vector code paths it
// is used to check.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

namespace oracle {

using Big = boost::multiprecision::cpp_int;

// base-q digits by repeated division, least significant first
inline std::vector<std::uint8_t> digits(Big n, std::uint32_t q) {
    std::vector<std::uint8_t> out;
    if (n == 0) return {0};
    while (n > 0) {
        out.push_back(static_cast<std::uint8_t>(n % q));
        n /= q;
    }
    return out;
}

// positional sum
inline Big value(const std::vector<std::uint8_t>& ds, std::uint32_t q) {
    Big v = 0;
    for (std::size_t i = ds.size(); i > 0; --i) v = v * q + ds[i - 1];
    return v;
}

inline Big pow(Big base, std::uint64_t exp) {
    Big r = 1;
    while (exp > 0) {
        if (exp & 1) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

inline Big digit_product(const Big& n, std::uint32_t q) {
    Big p = 1;
    for (std::uint8_t d : digits(n, q)) p *= d;
    return p;
}

inline bool has_zero_digit(const Big& n, std::uint32_t q) {
    for (std::uint8_t d : digits(n, q))
        if (d == 0) return true;
    return false;
}

inline std::uint32_t persistence(Big n, std::uint32_t q) {
    std::uint32_t steps = 0;
    while (n >= q) {
        n = digit_product(n, q);
        ++steps;
    }
    return steps;
}

inline std::uint64_t digit_count(const Big& n, std::uint32_t q) {
    return digits(n, q).size();
}

}  // namespace oracle

#pragma once

// Exact integer and rational arithmetic used throughout the library.
// Digit-level work lives in radix.hpp; these types carry everything that
// must stay exact but does not need per-digit access (rational circle
// points, stochastic matrix entries, repunits).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace digitdyn {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt big_pow(const BigInt& base, std::uint64_t exp) {
    BigInt result = 1;
    BigInt acc = base;
    while (exp > 0) {
        if (exp & 1) result *= acc;
        exp >>= 1;
        if (exp > 0) acc *= acc;
    }
    return result;
}

inline Rational rational_pow(const Rational& base, std::int64_t exp) {
    if (exp < 0) {
        if (base == 0) throw std::domain_error("rational_pow: zero to negative power");
        Rational r = rational_pow(base, -exp);
        return Rational(boost::multiprecision::denominator(r),
                        boost::multiprecision::numerator(r));
    }
    Rational result = 1;
    Rational acc = base;
    auto e = static_cast<std::uint64_t>(exp);
    while (e > 0) {
        if (e & 1) result *= acc;
        e >>= 1;
        if (e > 0) acc *= acc;
    }
    return result;
}

inline BigInt rational_num(const Rational& r) {
    return boost::multiprecision::numerator(r);
}

inline BigInt rational_den(const Rational& r) {
    return boost::multiprecision::denominator(r);
}

// "num/den" form; integers print without the slash.
inline std::string rational_to_string(const Rational& r) {
    if (rational_den(r) == 1) return rational_num(r).str();
    return rational_num(r).str() + "/" + rational_den(r).str();
}

}  // namespace digitdyn

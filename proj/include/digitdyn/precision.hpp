#pragma once

// Certified evaluation of the transcendental quantities (rotation numbers,
// conjugacy values, the closed-form digit expression) via MPFR interval
// arithmetic with outward rounding. Floors and fractional parts are only
// reported when both interval endpoints agree on them; callers double the
// working precision on failure, up to the policy cap.

#include "digitdyn/rational.hpp"

#include <mpfr.h>

#include <cstdint>
#include <ios>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace digitdyn {

class precision_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline unsigned ceil_log2_u64(std::uint64_t v) {
    unsigned bits = 0;
    std::uint64_t x = 1;
    while (x < v) {
        x <<= 1;
        ++bits;
        if (bits >= 64) break;
    }
    return bits;
}

// Working precision for transcendental quantities. `bits` is the starting
// precision; operations that fail to certify retry with doubled precision
// until `max_bits`, then raise precision_error.
struct PrecisionPolicy {
    unsigned bits = 128;
    unsigned max_bits = 1u << 21;

    static PrecisionPolicy with_bits(unsigned b) {
        PrecisionPolicy p;
        p.bits = b < 16 ? 16 : b;
        if (p.max_bits < p.bits) p.max_bits = p.bits;
        return p;
    }

    // accuracy_bits of answer + 64 guard bits.
    static PrecisionPolicy for_accuracy(unsigned accuracy_bits) {
        return with_bits(accuracy_bits + 64);
    }

    // Enough to resolve the fractional part of n*alpha to accuracy_bits.
    static PrecisionPolicy for_orbit(std::uint64_t n, unsigned accuracy_bits = 64) {
        return with_bits(accuracy_bits + ceil_log2_u64(n + 2) + 64);
    }

    // The closed-form digit expression for digit j of p^n in base q needs
    // roughly (n + j) * log2(q) bits of the rotation number.
    static PrecisionPolicy for_digit_formula(std::uint32_t q, std::uint64_t j,
                                             std::uint64_t n) {
        unsigned lq = ceil_log2_u64(q);
        std::uint64_t need = (n + j + 2) * static_cast<std::uint64_t>(lq) + 64;
        if (need > (1u << 24)) throw std::invalid_argument("digit formula exponent too large");
        return with_bits(static_cast<unsigned>(need));
    }
};

// Closed interval [lo, hi] of MPFR values at a fixed working precision.
class Interval {
public:
    explicit Interval(mpfr_prec_t prec) : prec_(prec) {
        mpfr_init2(lo_, prec_);
        mpfr_init2(hi_, prec_);
        mpfr_set_zero(lo_, 1);
        mpfr_set_zero(hi_, 1);
    }

    Interval(const Interval& other) : prec_(other.prec_) {
        mpfr_init2(lo_, prec_);
        mpfr_init2(hi_, prec_);
        mpfr_set(lo_, other.lo_, MPFR_RNDD);
        mpfr_set(hi_, other.hi_, MPFR_RNDU);
    }

    Interval& operator=(const Interval& other) {
        if (this != &other) {
            mpfr_set_prec(lo_, other.prec_);
            mpfr_set_prec(hi_, other.prec_);
            prec_ = other.prec_;
            mpfr_set(lo_, other.lo_, MPFR_RNDD);
            mpfr_set(hi_, other.hi_, MPFR_RNDU);
        }
        return *this;
    }

    Interval(Interval&& other) noexcept : prec_(other.prec_) {
        mpfr_init2(lo_, 16);
        mpfr_init2(hi_, 16);
        mpfr_swap(lo_, other.lo_);
        mpfr_swap(hi_, other.hi_);
    }

    Interval& operator=(Interval&& other) noexcept {
        mpfr_swap(lo_, other.lo_);
        mpfr_swap(hi_, other.hi_);
        std::swap(prec_, other.prec_);
        return *this;
    }

    ~Interval() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    mpfr_prec_t precision() const { return prec_; }

    static Interval exact_si(long v, mpfr_prec_t prec) {
        Interval r(prec);
        mpfr_set_si(r.lo_, v, MPFR_RNDD);
        mpfr_set_si(r.hi_, v, MPFR_RNDU);
        return r;
    }

    static Interval from_rational(const Rational& x, mpfr_prec_t prec) {
        Interval num = from_bigint(rational_num(x), prec);
        Interval den = from_bigint(rational_den(x), prec);
        return num.div(den);
    }

    static Interval from_bigint(const BigInt& v, mpfr_prec_t prec) {
        Interval r(prec);
        if (v < 0) throw std::invalid_argument("interval conversion expects nonnegative values");
        std::string hex = v.str(0, std::ios_base::hex);
        mpfr_set_str(r.lo_, hex.c_str(), 16, MPFR_RNDD);
        mpfr_set_str(r.hi_, hex.c_str(), 16, MPFR_RNDU);
        return r;
    }

    // ln v for v >= 1.
    static Interval log_ui(std::uint64_t v, mpfr_prec_t prec) {
        if (v < 1) throw std::invalid_argument("log_ui requires v >= 1");
        Interval r(prec);
        mpfr_t t;
        mpfr_init2(t, 64);
        mpfr_set_ui(t, static_cast<unsigned long>(v), MPFR_RNDN);  // exact, 64-bit limb
        mpfr_log(r.lo_, t, MPFR_RNDD);
        mpfr_log(r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
        return r;
    }

    // log_q(p) = ln p / ln q, both >= 2.
    static Interval log_ratio(std::uint64_t p, std::uint64_t q, mpfr_prec_t prec) {
        if (p < 2 || q < 2) throw std::invalid_argument("log_ratio requires p, q >= 2");
        Interval lp = log_ui(p, prec);
        Interval lq = log_ui(q, prec);
        Interval r(prec);
        mpfr_div(r.lo_, lp.lo_, lq.hi_, MPFR_RNDD);
        mpfr_div(r.hi_, lp.hi_, lq.lo_, MPFR_RNDU);
        return r;
    }

    Interval add(const Interval& o) const {
        Interval r(prec_);
        mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
        return r;
    }

    Interval add_si(long v) const {
        Interval r(prec_);
        mpfr_add_si(r.lo_, lo_, v, MPFR_RNDD);
        mpfr_add_si(r.hi_, hi_, v, MPFR_RNDU);
        return r;
    }

    Interval sub(const Interval& o) const {
        Interval r(prec_);
        mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
        return r;
    }

    Interval mul_ui(std::uint64_t v) const {
        Interval r(prec_);
        mpfr_t t;
        mpfr_init2(t, 64);
        mpfr_set_ui(t, static_cast<unsigned long>(v), MPFR_RNDN);
        mpfr_mul(r.lo_, lo_, t, MPFR_RNDD);
        mpfr_mul(r.hi_, hi_, t, MPFR_RNDU);
        mpfr_clear(t);
        return r;
    }

    Interval mul(const Interval& o) const {
        Interval r(prec_);
        mpfr_t a, b;
        mpfr_init2(a, prec_);
        mpfr_init2(b, prec_);
        bool first = true;
        const mpfr_srcptr xs[2] = {lo_, hi_};
        const mpfr_srcptr ys[2] = {o.lo_, o.hi_};
        for (auto x : xs) {
            for (auto y : ys) {
                mpfr_mul(a, x, y, MPFR_RNDD);
                mpfr_mul(b, x, y, MPFR_RNDU);
                if (first || mpfr_less_p(a, r.lo_)) mpfr_set(r.lo_, a, MPFR_RNDD);
                if (first || mpfr_greater_p(b, r.hi_)) mpfr_set(r.hi_, b, MPFR_RNDU);
                first = false;
            }
        }
        mpfr_clear(a);
        mpfr_clear(b);
        return r;
    }

    Interval div(const Interval& o) const {
        if (mpfr_sgn(o.lo_) <= 0)
            throw std::domain_error("interval division requires positive divisor");
        Interval r(prec_);
        mpfr_div(r.lo_, lo_, o.hi_, MPFR_RNDD);
        mpfr_div(r.hi_, hi_, o.lo_, MPFR_RNDU);
        return r;
    }

    Interval exp() const {
        Interval r(prec_);
        mpfr_exp(r.lo_, lo_, MPFR_RNDD);
        mpfr_exp(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    // Fractional part, certified: fails when the interval may straddle an
    // integer. (mpfr_frac at matching precision is exact.)
    std::optional<Interval> frac() const {
        Interval r(prec_);
        mpfr_frac(r.lo_, lo_, MPFR_RNDD);
        mpfr_frac(r.hi_, hi_, MPFR_RNDU);
        mpfr_t d;
        mpfr_init2(d, prec_);
        mpfr_sub(d, hi_, lo_, MPFR_RNDU);
        bool narrow = mpfr_cmp_ui(d, 1) < 0;
        mpfr_clear(d);
        if (!narrow || mpfr_greater_p(r.lo_, r.hi_)) return std::nullopt;
        return r;
    }

    std::optional<long> certified_floor() const {
        if (!mpfr_fits_slong_p(lo_, MPFR_RNDD) || !mpfr_fits_slong_p(hi_, MPFR_RNDD))
            return std::nullopt;
        long a = mpfr_get_si(lo_, MPFR_RNDD);
        long b = mpfr_get_si(hi_, MPFR_RNDD);
        if (a != b) return std::nullopt;
        return a;
    }

    // The unique integer strictly inside the interval, when the interval
    // straddles exactly one (floor(hi) = floor(lo) + 1).
    std::optional<long> straddled_integer() const {
        if (!mpfr_fits_slong_p(lo_, MPFR_RNDD) || !mpfr_fits_slong_p(hi_, MPFR_RNDD))
            return std::nullopt;
        long a = mpfr_get_si(lo_, MPFR_RNDD);
        long b = mpfr_get_si(hi_, MPFR_RNDD);
        if (b != a + 1) return std::nullopt;
        return b;
    }

    // Certifies width * q^T < 1 (T may be negative), i.e. the interval is
    // narrower than the spacing of the grid q^{-T} * Z.
    bool narrower_than_grid(std::uint64_t q, long T) const {
        mpfr_t w, s;
        mpfr_init2(w, prec_);
        mpfr_init2(s, prec_);
        mpfr_sub(w, hi_, lo_, MPFR_RNDU);
        // rounding of the scale keeps the final product an upper bound
        mpfr_ui_pow_ui(s, static_cast<unsigned long>(q),
                       static_cast<unsigned long>(T < 0 ? -T : T),
                       T >= 0 ? MPFR_RNDU : MPFR_RNDD);
        if (T >= 0)
            mpfr_mul(w, w, s, MPFR_RNDU);
        else
            mpfr_div(w, w, s, MPFR_RNDU);
        bool ok = mpfr_cmp_ui(w, 1) < 0;
        mpfr_clear(w);
        mpfr_clear(s);
        return ok;
    }

    bool certainly_contains(const Rational& x) const {
        Interval ix = from_rational(x, prec_);
        return mpfr_lessequal_p(lo_, ix.lo_) && mpfr_lessequal_p(ix.hi_, hi_);
    }

    bool certainly_below(const Interval& o) const { return mpfr_less_p(hi_, o.lo_); }
    bool certainly_at_or_above(const Interval& o) const { return mpfr_greaterequal_p(lo_, o.hi_); }

    // Upper bound on max(|lo - x|, |hi - x|).
    double distance_upper(const Rational& x) const {
        Interval ix = from_rational(x, prec_);
        mpfr_t a, b;
        mpfr_init2(a, prec_);
        mpfr_init2(b, prec_);
        mpfr_sub(a, hi_, ix.lo_, MPFR_RNDU);
        mpfr_abs(a, a, MPFR_RNDU);
        mpfr_sub(b, ix.hi_, lo_, MPFR_RNDU);
        mpfr_abs(b, b, MPFR_RNDU);
        if (mpfr_less_p(a, b)) mpfr_swap(a, b);
        double d = mpfr_get_d(a, MPFR_RNDU);
        mpfr_clear(a);
        mpfr_clear(b);
        return d;
    }

    double width_upper() const {
        mpfr_t d;
        mpfr_init2(d, prec_);
        mpfr_sub(d, hi_, lo_, MPFR_RNDU);
        double w = mpfr_get_d(d, MPFR_RNDU);
        mpfr_clear(d);
        return w;
    }

    double midpoint_double() const {
        mpfr_t m;
        mpfr_init2(m, prec_);
        mpfr_add(m, lo_, hi_, MPFR_RNDN);
        mpfr_div_2ui(m, m, 1, MPFR_RNDN);
        double v = mpfr_get_d(m, MPFR_RNDN);
        mpfr_clear(m);
        return v;
    }

    double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

private:
    mpfr_prec_t prec_;
    mpfr_t lo_;
    mpfr_t hi_;
};

}  // namespace digitdyn

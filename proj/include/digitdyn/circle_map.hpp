#pragma once

// The piecewise-affine circle map that encodes multiplication by p on
// base-q digit strings: exact rational dynamics on [1/q, 1] with endpoints
// identified, the conjugacy to rotation by log_q(p), the invariant measure
// dx/(x ln q), and the closed-form digit expression.

#include "digitdyn/precision.hpp"
#include "digitdyn/radix.hpp"
#include "digitdyn/rational.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace digitdyn {

// Largest a with v = r^a for integer r >= 2; returns {r, a} with r not
// itself a perfect power. For v >= 2.
inline std::pair<std::uint64_t, std::uint32_t> primitive_power_root(std::uint64_t v) {
    if (v < 2) throw std::invalid_argument("power root requires v >= 2");
    for (std::uint32_t a = 63; a >= 2; --a) {
        std::uint64_t r = static_cast<std::uint64_t>(std::llround(std::pow(double(v), 1.0 / a)));
        for (std::uint64_t cand = r > 1 ? r - 1 : 1; cand <= r + 1; ++cand) {
            if (cand < 2) continue;
            // overflow-checked cand^a
            std::uint64_t acc = 1;
            bool overflow = false;
            for (std::uint32_t i = 0; i < a; ++i) {
                if (acc > v / cand) { overflow = true; break; }
                acc *= cand;
            }
            if (!overflow && acc == v) return {cand, a};
        }
    }
    return {v, 1};
}

// log_q(p) is rational iff p and q are powers of a common integer; returns
// the exact value a/b when p = r^a, q = r^b.
inline std::optional<Rational> rational_log_ratio(std::uint64_t p, std::uint64_t q) {
    auto [rp, ap] = primitive_power_root(p);
    auto [rq, aq] = primitive_power_root(q);
    if (rp != rq) return std::nullopt;
    return Rational(ap, aq);
}

// A point of the circle [1/q, 1] (endpoints identified), kept as an exact
// rational in lowest terms. The identified endpoint is represented by 1
// except for the distinguished starting point 1/q itself.
class CirclePoint {
public:
    CirclePoint(Rational value, std::uint32_t base) : value_(std::move(value)), base_(base) {
        check_base(base_);
        if (value_ < Rational(1, base_) || value_ > 1)
            throw std::invalid_argument("circle point must lie in [1/q, 1]");
    }

    const Rational& value() const { return value_; }
    std::uint32_t base() const { return base_; }

    friend bool operator==(const CirclePoint&, const CirclePoint&) = default;

private:
    Rational value_;
    std::uint32_t base_;
};

// T_{p,q}: two affine branches with the break at q^k/p, where k is the
// exact power with q^k <= p < q^{k+1} (k = 0 for p < q). Branch membership
// uses half-open intervals; images equal to 1/q are reported as 1.
class CircleMap {
public:
    CircleMap(std::uint64_t p, std::uint32_t q) : p_(p), q_(q) {
        check_base(q_);
        if (p_ < 2) throw std::invalid_argument("multiplier p must be at least 2");
        k_ = 0;
        std::uint64_t power = 1;
        while (power <= p_ / q_) {
            power *= q_;
            ++k_;
        }
        // now q^k <= p < q^{k+1}, with k = 0 when p < q
        break_point_ = Rational(big_pow(q_, k_), p_);
    }

    std::uint64_t p() const { return p_; }
    std::uint32_t q() const { return q_; }
    std::uint32_t k() const { return k_; }
    const Rational& break_point() const { return break_point_; }

    bool rotation_is_rational() const { return rational_log_ratio(p_, q_).has_value(); }

    CirclePoint apply(const CirclePoint& x) const {
        if (x.base() != q_) throw std::invalid_argument("point base does not match map");
        Rational image;
        if (x.value() < break_point_) {
            image = x.value() * Rational(BigInt(p_), big_pow(q_, k_));
        } else {
            image = x.value() * Rational(BigInt(p_), big_pow(q_, k_ + 1));
        }
        if (image == Rational(1, q_)) image = 1;  // identified endpoint
        return CirclePoint(image, q_);
    }

private:
    std::uint64_t p_;
    std::uint32_t q_;
    std::uint32_t k_;
    Rational break_point_;
};

// Exact digit count of p^n in base q by integer comparison (never by
// floating logarithms: the ceiling formula fails at exact powers).
inline std::uint64_t digit_count_pow(std::uint64_t p, std::uint32_t q, std::uint64_t n) {
    BigInt value = big_pow(p, n);
    BigInt power = 1;
    std::uint64_t k = 0;
    while (power <= value) {
        power *= q;
        ++k;
    }
    return k;  // q^(k-1) <= value < q^k
}

// x_n = p^n / q^{k_n}: the n-th point of the orbit of 1/q.
inline CirclePoint orbit_point(std::uint64_t p, std::uint32_t q, std::uint64_t n) {
    check_base(q);
    if (p < 2) throw std::invalid_argument("multiplier p must be at least 2");
    BigInt num = big_pow(p, n);
    BigInt den = big_pow(q, digit_count_pow(p, q, n));
    return CirclePoint(Rational(num, den), q);
}

// h(t) = q^{t-1}, the conjugacy from rotation coordinates to the circle
// [1/q, 1]. h(0) = 1/q and h(1) = 1 land on exact endpoints.
inline Interval conjugacy_from_angle(const Rational& t, std::uint32_t q,
                                     const PrecisionPolicy& policy) {
    check_base(q);
    if (t < 0 || t > 1) throw std::invalid_argument("angle must lie in [0, 1]");
    if (t == 1) return Interval::exact_si(1, policy.bits);
    Interval tv = Interval::from_rational(t, policy.bits);
    Interval lnq = Interval::log_ui(q, policy.bits);
    return tv.add_si(-1).mul(lnq).exp();
}

inline Interval conjugacy_from_angle(double t, std::uint32_t q, const PrecisionPolicy& policy) {
    // doubles are exact binary rationals
    Rational r(t);
    return conjugacy_from_angle(r, q, policy);
}

struct RotationNumber {
    bool rational;
    Rational exact_value;  // meaningful only when rational
    Interval enclosure;    // always a valid enclosure of the rotation number
};

// Rotation number of T_{p,q}: log_q(p), reduced mod 1 when p > q. Flagged
// (and returned exactly) when p and q are powers of a common integer.
inline RotationNumber rotation_number(std::uint64_t p, std::uint32_t q,
                                      const PrecisionPolicy& policy) {
    check_base(q);
    if (p < 2) throw std::invalid_argument("multiplier p must be at least 2");
    CircleMap map(p, q);  // supplies the exact integer part k
    if (auto exact = rational_log_ratio(p, q)) {
        Rational frac = *exact - BigInt(map.k());
        if (frac < 0 || frac >= 1) throw std::logic_error("integer part mismatch");
        Interval enc = Interval::from_rational(frac, policy.bits);
        return RotationNumber{true, frac, std::move(enc)};
    }
    Interval alpha = Interval::log_ratio(p, q, policy.bits);
    Interval frac = alpha.add_si(-static_cast<long>(map.k()));
    return RotationNumber{false, Rational(0), std::move(frac)};
}

// Certified enclosure of q^({n*alpha} - 1) = T^n(1/q), alpha = log_q(p).
// Doubles the working precision until the fractional part certifies.
inline Interval orbit_angle_image(std::uint64_t p, std::uint32_t q, std::uint64_t n,
                                  const PrecisionPolicy& policy) {
    check_base(q);
    if (p < 2) throw std::invalid_argument("multiplier p must be at least 2");
    for (unsigned bits = policy.bits;; bits *= 2) {
        Interval alpha = Interval::log_ratio(p, q, bits);
        Interval na = alpha.mul_ui(n);
        if (auto f = na.frac()) {
            Interval lnq = Interval::log_ui(q, bits);
            return f->add_si(-1).mul(lnq).exp();
        }
        if (bits >= policy.max_bits)
            throw precision_error("could not certify fractional part of n*alpha");
    }
}

// d_{j,n} = floor(q * {q^{j + {n alpha} - 2}}): the j-th digit from the
// left of p^n in base q, evaluated through the rotation coordinates alone.
// Requires an irrational rotation number for n >= 1.
//
// The inner quantity equals (p^n mod q^{T+1}) / q^T with T = k_n - j, so
// it lives on the grid q^{-T} * Z. When the certified interval straddles
// an integer (the value then IS that integer, e.g. at the last digit),
// the floor is settled by checking the interval against the grid spacing.
inline std::uint32_t digit_formula(std::uint64_t p, std::uint32_t q, std::uint64_t j,
                                   std::uint64_t n, const PrecisionPolicy& policy) {
    check_base(q);
    if (p < 2) throw std::invalid_argument("multiplier p must be at least 2");
    if (j < 1) throw std::invalid_argument("digit index starts at 1");
    if (n == 0) return j == 1 ? 1 : 0;  // p^0 = [1]_q, exact angle 0
    if (rational_log_ratio(p, q))
        throw std::invalid_argument("digit formula needs an irrational rotation number");

    for (unsigned bits = policy.bits;; bits *= 2) {
        do {
            Interval na = Interval::log_ratio(p, q, bits).mul_ui(n);
            auto t = na.frac();
            if (!t) break;
            auto na_floor = na.certified_floor();
            if (!na_floor) break;
            const long k_n = *na_floor + 1;  // digit count of p^n
            const long grid_T = k_n - static_cast<long>(j);

            Interval lnq = Interval::log_ui(q, bits);
            Interval y = t->add_si(static_cast<long>(j) - 2).mul(lnq).exp();
            auto f = y.frac();
            if (!f) {
                // y on grid q^{-(T+1)} * Z; a straddled integer means y is
                // exactly integral, so its fractional part is zero
                if (y.narrower_than_grid(q, grid_T + 1) && y.straddled_integer()) return 0;
                break;
            }
            Interval g = f->mul_ui(q);
            auto d = g.certified_floor();
            if (!d) {
                if (g.narrower_than_grid(q, grid_T)) {
                    if (auto m = g.straddled_integer()) {
                        if (*m >= 0 && *m < static_cast<long>(q))
                            return static_cast<std::uint32_t>(*m);
                    }
                }
                break;
            }
            if (*d < 0 || *d >= static_cast<long>(q))
                throw std::logic_error("digit out of range despite certification");
            return static_cast<std::uint32_t>(*d);
        } while (false);
        if (bits >= policy.max_bits)
            throw precision_error("digit formula: interval arithmetic could not certify the floor");
    }
}

// mu([a, b]) = (ln b - ln a) / ln q for [a, b] inside [1/q, 1].
inline double invariant_measure(const Rational& a, const Rational& b, std::uint32_t q) {
    check_base(q);
    if (a < Rational(1, q) || b > 1 || a > b)
        throw std::invalid_argument("interval must satisfy 1/q <= a <= b <= 1");
    Rational ratio = b / a;  // >= 1, so the log argument is safe
    double r = Interval::from_rational(ratio, 128).midpoint_double();
    return std::log(r) / std::log(double(q));
}

inline constexpr std::uint32_t kZeroPrefixMaxDepth = 12;
inline constexpr std::uint64_t kZeroPrefixBudget = 10'000'000;

struct ZeroPrefixMeasure {
    double lebesgue;           // closed form |Delta_q| * (1 - (1-1/q)^(j-1))
    double invariant;          // sum of mu over prefix cells containing a zero
    Rational lebesgue_exact;   // the closed form as an exact rational
};

// Measure of B_j, the set of circle points with a zero among their first j
// digits: Lebesgue by closed form, invariant measure by enumerating the
// j-digit prefix cells that contain a zero digit.
inline ZeroPrefixMeasure measure_zero_prefix(std::uint32_t q, std::uint32_t j) {
    check_base(q);
    if (j < 1 || j > kZeroPrefixMaxDepth)
        throw std::invalid_argument("prefix depth out of supported range");

    double qj = std::pow(double(q), double(j));
    if (qj > double(kZeroPrefixBudget))
        throw std::overflow_error("prefix enumeration exceeds budget");

    Rational width(BigInt(q) - 1, BigInt(q));  // |Delta_q| = 1 - 1/q
    Rational lebesgue = width * (Rational(1) - rational_pow(width, static_cast<std::int64_t>(j) - 1));

    // prefix cells [v, v+1) / q^j for q^(j-1) <= v < q^j; mu of a cell is
    // log_q((v+1)/v)
    double mu = 0.0;
    std::uint64_t lo = 1;
    for (std::uint32_t i = 1; i < j; ++i) lo *= q;
    std::uint64_t hi = lo * q;
    const double lnq = std::log(double(q));
    for (std::uint64_t v = lo; v < hi; ++v) {
        std::uint64_t x = v;
        bool has_zero = false;
        for (std::uint32_t i = 0; i < j; ++i) {
            if (x % q == 0) { has_zero = true; break; }
            x /= q;
        }
        if (has_zero) mu += std::log1p(1.0 / double(v)) / lnq;
    }
    return ZeroPrefixMeasure{static_cast<double>(lebesgue), mu, lebesgue};
}

// Exact Lebesgue measure of B_j by direct cell enumeration; cross-checks
// the closed form.
inline Rational zero_prefix_lebesgue_enumerated(std::uint32_t q, std::uint32_t j) {
    check_base(q);
    if (j < 1 || j > kZeroPrefixMaxDepth)
        throw std::invalid_argument("prefix depth out of supported range");
    if (std::pow(double(q), double(j)) > double(kZeroPrefixBudget))
        throw std::overflow_error("prefix enumeration exceeds budget");
    std::uint64_t lo = 1;
    for (std::uint32_t i = 1; i < j; ++i) lo *= q;
    std::uint64_t hi = lo * q;
    std::uint64_t count = 0;
    for (std::uint64_t v = lo; v < hi; ++v) {
        std::uint64_t x = v;
        for (std::uint32_t i = 0; i < j; ++i) {
            if (x % q == 0) { ++count; break; }
            x /= q;
        }
    }
    return Rational(BigInt(count), big_pow(q, j));
}

}  // namespace digitdyn

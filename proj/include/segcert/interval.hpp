#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace segcert {

/// Closed interval with binary64 endpoints and outward rounding.
///
/// Every arithmetic operation returns an enclosure of the exact set image:
/// for any x in X and y in Y the real value x op y lies in X op Y. Outward
/// rounding is done without touching the FP environment: each endpoint is
/// computed in round-to-nearest, the rounding error is recovered exactly
/// (TwoSum for sums, fma residual for products/quotients/roots) and the
/// endpoint is stepped one ulp outward only when the error points the
/// wrong way. Exact operations therefore stay exact.
///
/// Endpoints are never NaN. Infinities appear only as saturation results,
/// never in accepted inputs.
struct Interval {
    double lo;
    double hi;

    Interval() : lo(0.0), hi(0.0) {}

    explicit Interval(double v) : lo(v), hi(v) {
        if (std::isnan(v)) throw std::invalid_argument("interval: NaN endpoint");
    }

    Interval(double l, double h) : lo(l), hi(h) {
        if (std::isnan(l) || std::isnan(h))
            throw std::invalid_argument("interval: NaN endpoint");
        if (l > h) throw std::invalid_argument("interval: lo > hi");
    }
};

namespace detail {

inline double next_up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}

inline double next_down(double x) {
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

constexpr double kMinNormal = std::numeric_limits<double>::min();

// Knuth TwoSum: s + err == a + b exactly (valid for all finite inputs,
// including subnormals).
inline double two_sum_err(double a, double b, double s) {
    const double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

inline double sum_down(double a, double b) {
    const double s = a + b;
    if (std::isinf(s))
        return s > 0 ? std::numeric_limits<double>::max() : s;
    const double err = two_sum_err(a, b, s);
    return err < 0 ? next_down(s) : s;
}

inline double sum_up(double a, double b) {
    const double s = a + b;
    if (std::isinf(s))
        return s < 0 ? std::numeric_limits<double>::lowest() : s;
    const double err = two_sum_err(a, b, s);
    return err > 0 ? next_up(s) : s;
}

// a*b - fl(a*b) is exactly representable unless the product underflows;
// in the subnormal zone we widen unconditionally.
inline double prod_down(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    const double p = a * b;
    if (std::isinf(p))
        return p > 0 ? std::numeric_limits<double>::max() : p;
    if (std::fabs(p) < kMinNormal) return next_down(p);
    const double e = std::fma(a, b, -p);
    return e < 0 ? next_down(p) : p;
}

inline double prod_up(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    const double p = a * b;
    if (std::isinf(p))
        return p < 0 ? std::numeric_limits<double>::lowest() : p;
    if (std::fabs(p) < kMinNormal) return next_up(p);
    const double e = std::fma(a, b, -p);
    return e > 0 ? next_up(p) : p;
}

// For q = fl(a/b), a - q*b is exactly representable outside underflow.
// True quotient = q - e/b with e = fma(q, b, -a).
inline double quot_down(double a, double b) {
    if (a == 0.0) return 0.0;
    if (std::isinf(b)) return next_down(a / b);
    const double q = a / b;
    if (std::isinf(q))
        return q > 0 ? std::numeric_limits<double>::max() : q;
    if (std::fabs(q) < kMinNormal || std::fabs(a) < kMinNormal)
        return next_down(q);
    const double e = std::fma(q, b, -a);
    if (e == 0.0) return q;
    const bool true_below = (e > 0) == (b > 0);
    return true_below ? next_down(q) : q;
}

inline double quot_up(double a, double b) {
    if (a == 0.0) return 0.0;
    if (std::isinf(b)) return next_up(a / b);
    const double q = a / b;
    if (std::isinf(q))
        return q < 0 ? std::numeric_limits<double>::lowest() : q;
    if (std::fabs(q) < kMinNormal || std::fabs(a) < kMinNormal)
        return next_up(q);
    const double e = std::fma(q, b, -a);
    if (e == 0.0) return q;
    const bool true_above = (e > 0) != (b > 0);
    return true_above ? next_up(q) : q;
}

// s*s - x is exact for s = fl(sqrt(x)) outside underflow.
inline double sqrt_down(double x) {
    const double s = std::sqrt(x);
    if (x < kMinNormal) return std::max(0.0, next_down(s));
    const double e = std::fma(s, s, -x);
    return e > 0 ? next_down(s) : s;
}

inline double sqrt_up(double x) {
    const double s = std::sqrt(x);
    if (x > 0.0 && x < kMinNormal) return next_up(s);
    const double e = std::fma(s, s, -x);
    return e < 0 ? next_up(s) : s;
}

}  // namespace detail

inline Interval add(const Interval& x, const Interval& y) {
    return {detail::sum_down(x.lo, y.lo), detail::sum_up(x.hi, y.hi)};
}

inline Interval neg(const Interval& x) { return {-x.hi, -x.lo}; }

inline Interval sub(const Interval& x, const Interval& y) {
    return {detail::sum_down(x.lo, -y.hi), detail::sum_up(x.hi, -y.lo)};
}

inline Interval mul(const Interval& x, const Interval& y) {
    const double cl[4] = {detail::prod_down(x.lo, y.lo), detail::prod_down(x.lo, y.hi),
                          detail::prod_down(x.hi, y.lo), detail::prod_down(x.hi, y.hi)};
    const double cu[4] = {detail::prod_up(x.lo, y.lo), detail::prod_up(x.lo, y.hi),
                          detail::prod_up(x.hi, y.lo), detail::prod_up(x.hi, y.hi)};
    return {std::min({cl[0], cl[1], cl[2], cl[3]}), std::max({cu[0], cu[1], cu[2], cu[3]})};
}

inline bool contains(const Interval& x, double v) { return x.lo <= v && v <= x.hi; }

inline Interval div(const Interval& x, const Interval& y) {
    if (contains(y, 0.0))
        throw std::domain_error("interval div: divisor contains zero");
    const double cl[4] = {detail::quot_down(x.lo, y.lo), detail::quot_down(x.lo, y.hi),
                          detail::quot_down(x.hi, y.lo), detail::quot_down(x.hi, y.hi)};
    const double cu[4] = {detail::quot_up(x.lo, y.lo), detail::quot_up(x.lo, y.hi),
                          detail::quot_up(x.hi, y.lo), detail::quot_up(x.hi, y.hi)};
    return {std::min({cl[0], cl[1], cl[2], cl[3]}), std::max({cu[0], cu[1], cu[2], cu[3]})};
}

inline Interval sqrt(const Interval& x) {
    if (x.lo < 0.0)
        throw std::domain_error("interval sqrt: negative lower endpoint");
    return {detail::sqrt_down(x.lo), detail::sqrt_up(x.hi)};
}

/// Enclosure of {t^2 : t in X}. Tighter than mul(X, X): the dependency is
/// honored, so the result is [0, ...] whenever 0 lies in X.
inline Interval square(const Interval& x) {
    const double a = std::fabs(x.lo), b = std::fabs(x.hi);
    const double big = std::max(a, b);
    if (x.lo <= 0.0 && 0.0 <= x.hi)
        return {0.0, detail::prod_up(big, big)};
    const double small = std::min(a, b);
    return {detail::prod_down(small, small), detail::prod_up(big, big)};
}

inline Interval pow_int(const Interval& x, int p) {
    if (p < 0) throw std::domain_error("pow_int: negative exponent");
    Interval result(1.0);
    Interval base = x;
    unsigned e = static_cast<unsigned>(p);
    while (e != 0) {
        if (e & 1u) result = mul(result, base);
        e >>= 1u;
        if (e != 0) base = square(base);
    }
    return result;
}

/// max(|lo|, |hi|); exact.
inline double mag(const Interval& x) { return std::max(std::fabs(x.lo), std::fabs(x.hi)); }

inline double width(const Interval& x) { return x.hi - x.lo; }

inline double midpoint(const Interval& x) { return 0.5 * (x.lo + x.hi); }

inline Interval hull(const Interval& x, const Interval& y) {
    return {std::min(x.lo, y.lo), std::max(x.hi, y.hi)};
}

inline std::optional<Interval> intersect(const Interval& x, const Interval& y) {
    const double l = std::max(x.lo, y.lo);
    const double h = std::min(x.hi, y.hi);
    if (l > h) return std::nullopt;
    return Interval{l, h};
}

inline bool is_subset(const Interval& x, const Interval& y) {
    return y.lo <= x.lo && x.hi <= y.hi;
}

/// The only comparison used to certify strict inequalities: true iff every
/// point of X is below every point of Y.
inline bool strictly_less(const Interval& x, const Interval& y) { return x.hi < y.lo; }

inline Interval imax(const Interval& x, const Interval& y) {
    return {std::max(x.lo, y.lo), std::max(x.hi, y.hi)};
}

inline Interval imin(const Interval& x, const Interval& y) {
    return {std::min(x.lo, y.lo), std::min(x.hi, y.hi)};
}

inline Interval operator+(const Interval& x, const Interval& y) { return add(x, y); }
inline Interval operator-(const Interval& x, const Interval& y) { return sub(x, y); }
inline Interval operator*(const Interval& x, const Interval& y) { return mul(x, y); }
inline Interval operator/(const Interval& x, const Interval& y) { return div(x, y); }
inline Interval operator-(const Interval& x) { return neg(x); }
inline bool operator==(const Interval& x, const Interval& y) {
    return x.lo == y.lo && x.hi == y.hi;
}

inline std::ostream& operator<<(std::ostream& os, const Interval& x) {
    return os << '[' << x.lo << ", " << x.hi << ']';
}

/// Enclosure of 2*pi, 1 ulp wide.
inline Interval two_pi() {
    return {0x1.921fb54442d18p+2, 0x1.921fb54442d19p+2};
}

namespace detail {

// Little-endian multiprecision unsigned integer, just big enough to compare
// a decimal mantissa*10^e against a binary mantissa*2^e exactly.
struct BigUint {
    std::vector<std::uint64_t> limb;  // little-endian, no trailing zero limbs

    void trim() {
        while (!limb.empty() && limb.back() == 0) limb.pop_back();
    }

    void mul_small(std::uint64_t m) {
        unsigned __int128 carry = 0;
        for (auto& l : limb) {
            unsigned __int128 cur = static_cast<unsigned __int128>(l) * m + carry;
            l = static_cast<std::uint64_t>(cur);
            carry = cur >> 64;
        }
        while (carry) {
            limb.push_back(static_cast<std::uint64_t>(carry));
            carry >>= 64;
        }
        trim();
    }

    void add_small(std::uint64_t v) {
        if (v == 0) return;
        std::uint64_t carry = v;
        for (std::size_t i = 0; carry && i < limb.size(); ++i) {
            const unsigned __int128 cur = static_cast<unsigned __int128>(limb[i]) + carry;
            limb[i] = static_cast<std::uint64_t>(cur);
            carry = static_cast<std::uint64_t>(cur >> 64);
        }
        if (carry) limb.push_back(carry);
    }

    void mul_pow5(long e) {
        constexpr std::uint64_t p5_27 = 7450580596923828125ull;  // 5^27
        while (e >= 27) { mul_small(p5_27); e -= 27; }
        if (e > 0) {
            std::uint64_t m = 1;
            for (long i = 0; i < e; ++i) m *= 5;
            mul_small(m);
        }
    }

    void shl(long bits) {
        if (limb.empty() || bits == 0) return;
        const long words = bits / 64, rem = bits % 64;
        if (rem == 0) {
            limb.insert(limb.begin(), static_cast<std::size_t>(words), 0);
            return;
        }
        std::uint64_t carry = 0;
        for (auto& l : limb) {
            const std::uint64_t nl = (l << rem) | carry;
            carry = l >> (64 - rem);
            l = nl;
        }
        if (carry) limb.push_back(carry);
        limb.insert(limb.begin(), static_cast<std::size_t>(words), 0);
    }

    static int cmp(const BigUint& a, const BigUint& b) {
        if (a.limb.size() != b.limb.size())
            return a.limb.size() < b.limb.size() ? -1 : 1;
        for (std::size_t i = a.limb.size(); i-- > 0;) {
            if (a.limb[i] != b.limb[i]) return a.limb[i] < b.limb[i] ? -1 : 1;
        }
        return 0;
    }
};

struct DecimalLiteral {
    bool negative = false;
    std::string digits;  // mantissa digits, value = digits * 10^exp10
    long exp10 = 0;
    bool zero = false;
};

inline DecimalLiteral parse_decimal(std::string_view text) {
    DecimalLiteral d;
    std::size_t i = 0;
    const auto fail = [&]() -> DecimalLiteral& {
        throw std::invalid_argument("malformed decimal literal: '" + std::string(text) + "'");
    };
    if (text.empty()) fail();
    if (text[i] == '+' || text[i] == '-') {
        d.negative = (text[i] == '-');
        ++i;
    }
    std::string intpart, fracpart;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
        intpart.push_back(text[i++]);
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
            fracpart.push_back(text[i++]);
    }
    if (intpart.empty() && fracpart.empty()) fail();
    long exp = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            eneg = (text[i] == '-');
            ++i;
        }
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) fail();
        long ev = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            if (ev < 100000) ev = ev * 10 + (text[i] - '0');
            ++i;
        }
        exp = eneg ? -ev : ev;
    }
    if (i != text.size()) fail();

    d.digits = intpart + fracpart;
    d.exp10 = exp - static_cast<long>(fracpart.size());
    const std::size_t nz = d.digits.find_first_not_of('0');
    if (nz == std::string::npos) {
        d.zero = true;
        d.digits = "0";
        d.exp10 = 0;
        return d;
    }
    d.digits.erase(0, nz);
    while (d.digits.size() > 1 && d.digits.back() == '0') {
        d.digits.pop_back();
        ++d.exp10;
    }
    return d;
}

// Compares |digits * 10^exp10| with |d| exactly. d must be finite, nonzero.
inline int cmp_decimal_abs(const DecimalLiteral& lit, double d) {
    int bexp = 0;
    const double frac = std::frexp(std::fabs(d), &bexp);
    const double scaled = std::ldexp(frac, 53);  // integer in [2^52, 2^53)
    BigUint bin;
    bin.limb.push_back(static_cast<std::uint64_t>(scaled));
    const long f2 = bexp - 53;

    BigUint dec;
    for (char c : lit.digits) {
        dec.mul_small(10);
        dec.add_small(static_cast<std::uint64_t>(c - '0'));
    }

    // dec * 10^e10 vs bin * 2^f2  ==  dec * 5^e10 * 2^e10 vs bin * 2^f2
    if (lit.exp10 >= 0)
        dec.mul_pow5(lit.exp10);
    else
        bin.mul_pow5(-lit.exp10);
    const long t = lit.exp10 - f2;
    if (t >= 0)
        dec.shl(t);
    else
        bin.shl(-t);
    return BigUint::cmp(dec, bin);
}

}  // namespace detail

/// Smallest representable interval containing the exact value of a finite
/// decimal literal. Exactly representable literals give point intervals.
inline Interval from_decimal(std::string_view text) {
    const detail::DecimalLiteral lit = detail::parse_decimal(text);
    if (lit.zero) return Interval(0.0);
    const double d = std::strtod(std::string(text).c_str(), nullptr);
    if (std::isinf(d) || d == 0.0)
        throw std::invalid_argument("decimal literal out of binary64 range: '" +
                                    std::string(text) + "'");
    int c = detail::cmp_decimal_abs(lit, d);
    if (lit.negative) c = -c;  // now: sign of (value - d)
    if (c == 0) return Interval(d);
    double lo = d, hi = d;
    if (c < 0) {
        lo = detail::next_down(lo);
        while ((lit.negative ? -detail::cmp_decimal_abs(lit, lo) : detail::cmp_decimal_abs(lit, lo)) < 0)
            lo = detail::next_down(lo);
    } else {
        hi = detail::next_up(hi);
        while ((lit.negative ? -detail::cmp_decimal_abs(lit, hi) : detail::cmp_decimal_abs(lit, hi)) > 0)
            hi = detail::next_up(hi);
    }
    return {lo, hi};
}

}  // namespace segcert

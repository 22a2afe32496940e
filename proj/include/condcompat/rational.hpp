#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace condcompat {

/** Exact arbitrary-precision rational scalar. GMP keeps every value in
 *  canonical form (positive denominator, gcd(num, den) = 1), so equality is
 *  decidable exactly and no epsilon appears anywhere in the library. */
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/** Base class for every error thrown by this library. */
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline BigInt numerator_of(const Rational& q) {
    return boost::multiprecision::numerator(q);
}

inline BigInt denominator_of(const Rational& q) {
    return boost::multiprecision::denominator(q);
}

/** Bit length of |numerator| + denominator; the pivot-selection score used by
 *  the elimination routines to curb coefficient growth. */
inline std::size_t bit_length_score(const Rational& q) {
    BigInt s = boost::multiprecision::abs(numerator_of(q)) + denominator_of(q);
    return boost::multiprecision::msb(s) + 1;
}

namespace rational_detail {

/** Base-10 digit-string to integer; digits only, leading zeros allowed (the
 *  BigInt string constructor would read them as an octal prefix). */
inline bool parse_digits(std::string_view digits, BigInt& out) {
    if (digits.empty()) return false;
    for (char c : digits)
        if (c < '0' || c > '9') return false;
    std::size_t first = digits.find_first_not_of('0');
    out = first == std::string_view::npos ? BigInt(0) : BigInt(std::string(digits.substr(first)));
    return true;
}

inline bool parse_signed(std::string_view text, BigInt& out) {
    bool negative = false;
    if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
        negative = text[0] == '-';
        text.remove_prefix(1);
    }
    if (!parse_digits(text, out)) return false;
    if (negative) out = -out;
    return true;
}

}  // namespace rational_detail

/** Parses "p/q", a decimal string ("0.25", "-3.5"), or an integer string into
 *  an exact Rational. Decimals convert exactly as fractions over powers of
 *  ten. Throws Error on malformed input or a zero denominator. */
inline Rational parse_rational(std::string_view text) {
    auto fail = [&]() -> Rational {
        throw Error("cannot parse '" + std::string(text) + "' as a rational number");
    };
    if (text.empty()) return fail();

    const std::string s(text);
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt n, d;
        if (!rational_detail::parse_signed(s.substr(0, slash), n) ||
            !rational_detail::parse_signed(s.substr(slash + 1), d))
            return fail();
        if (d == 0) throw Error("zero denominator in '" + s + "'");
        return Rational(n, d);
    }

    auto dot = s.find('.');
    if (dot == std::string::npos) {
        BigInt n;
        if (!rational_detail::parse_signed(s, n)) return fail();
        return Rational(n);
    }

    std::string digits = s;
    bool negative = false;
    if (digits[0] == '+' || digits[0] == '-') {
        negative = digits[0] == '-';
        digits = digits.substr(1);
        dot -= 1;
    }
    const std::string intpart = digits.substr(0, dot);
    const std::string fracpart = digits.substr(dot + 1);
    if (intpart.empty() && fracpart.empty()) return fail();

    BigInt whole = 0, frac = 0;
    if (!intpart.empty() && !rational_detail::parse_digits(intpart, whole)) return fail();
    if (!fracpart.empty() && !rational_detail::parse_digits(fracpart, frac)) return fail();
    BigInt scale = 1;
    for (std::size_t k = 0; k < fracpart.size(); ++k) scale *= 10;
    Rational r(whole * scale + frac, scale);
    return negative ? Rational(-r) : r;
}

/** Canonical "p/q" rendering ("p" alone when the value is an integer). */
inline std::string to_fraction_string(const Rational& q) {
    return q.str();
}

/** Fixed-point decimal rendering with the given number of places, rounding
 *  half to even. Matches the paper's 7-decimal print convention. */
inline std::string to_decimal_string(const Rational& q, unsigned places = 7) {
    BigInt n = numerator_of(q);
    BigInt d = denominator_of(q);
    bool negative = n < 0;
    if (negative) n = -n;

    BigInt scale = 1;
    for (unsigned k = 0; k < places; ++k) scale *= 10;
    BigInt scaled = n * scale;
    BigInt quot = scaled / d;
    BigInt rem = scaled % d;
    BigInt twice = rem * 2;
    if (twice > d || (twice == d && (quot % 2) != 0)) quot += 1;

    std::string digits = quot.str();
    if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
    std::string intpart = digits.substr(0, digits.size() - places);
    std::string fracpart = digits.substr(digits.size() - places);
    std::string out;
    if (negative && quot != 0) out += '-';
    out += intpart;
    if (places > 0) {
        out += '.';
        out += fracpart;
    }
    return out;
}

}  // namespace condcompat

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace coarsevote {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number. All probabilities and utilities on the exact
/// path are Rationals; floating point appears only in Monte Carlo output.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

/// gcd of two nonnegative rationals: the largest rational that divides both
/// with an integer quotient. gcd(0, x) = x.
inline Rational rational_gcd(const Rational& a, const Rational& b) {
    if (a == 0) return b;
    if (b == 0) return a;
    BigInt an = numerator(a), ad = denominator(a);
    BigInt bn = numerator(b), bd = denominator(b);
    // gcd(an/ad, bn/bd) = gcd(an*bd, bn*ad) / (ad*bd)
    BigInt g = boost::multiprecision::gcd(an * bd, bn * ad);
    return Rational(g, ad * bd);
}

/// Parses "p/q", a decimal like "0.25", or a plain integer (optionally
/// signed). Throws std::invalid_argument on junk.
inline Rational parse_rational(const std::string& s) {
    try {
        if (auto slash = s.find('/'); slash != std::string::npos) {
            BigInt num(s.substr(0, slash));
            BigInt den(s.substr(slash + 1));
            if (den == 0) throw std::invalid_argument("zero denominator");
            return Rational(num, den);
        }
        if (auto dot = s.find('.'); dot != std::string::npos) {
            const std::string frac = s.substr(dot + 1);
            if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
                throw std::invalid_argument("bad decimal");
            std::string head = s.substr(0, dot);
            const bool negative = !head.empty() && head[0] == '-';
            if (negative || (!head.empty() && head[0] == '+')) head.erase(0, 1);
            BigInt scale = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
            BigInt num = BigInt(head.empty() ? "0" : head) * scale + BigInt(frac);
            return Rational(negative ? -num : num, scale);
        }
        return Rational(BigInt(s));
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + s + "'");
    }
}

/// Canonical "p/q" form (always includes the denominator, e.g. "1/1").
inline std::string rational_to_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return static_cast<double>(r); }

/// Exact rational value of a finite double (every finite double is p/2^k).
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite double");
    Rational r(x);
    return r;
}

}  // namespace coarsevote

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include "damg/errors.hpp"

namespace damg {

/// Arbitrary-precision exact rational. Always kept in canonical reduced
/// form with positive denominator (maintained by the backend). Expression
/// templates are off so arithmetic results are plain Rational values.
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<
        boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(long long num, long long den = 1) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(BigInt(num), BigInt(den));
}

/// Parses "p", "-p" or "p/q" with arbitrary-precision digits.
inline Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty rational literal");
    auto slash = s.find('/');
    auto check_int = [&](const std::string& part) {
        if (part.empty()) throw ParseError("bad rational literal: " + text);
        std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (i == part.size()) throw ParseError("bad rational literal: " + text);
        for (; i < part.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(part[i])))
                throw ParseError("bad rational literal: " + text);
    };
    if (slash == std::string::npos) {
        check_int(s);
        return Rational(BigInt(s));
    }
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    check_int(num);
    check_int(den);
    BigInt n(num), d(den);
    if (d == 0) throw ParseError("zero denominator: " + text);
    if (d < 0) {
        n = -n;
        d = -d;
    }
    return Rational(n, d);
}

/// Canonical rendering: integer when the denominator is 1, else "p/q".
inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << '/' << denominator(r);
    return os.str();
}

/// Decimal rendering with the given number of significant digits.
inline std::string to_decimal_string(const Rational& r, int sig_digits = 12) {
    std::ostringstream os;
    os.precision(sig_digits);
    os << r.convert_to<double>();
    return os.str();
}

/// Doubles are binary fractions, so this conversion is exact.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw Error("cannot convert non-finite double to rational");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
    // 53 mantissa bits make mant * 2^53 integral.
    auto m = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r(m);
    if (exp >= 0)
        r *= Rational(BigInt(1) << exp);
    else
        r /= Rational(BigInt(1) << -exp);
    return r;
}

}  // namespace damg

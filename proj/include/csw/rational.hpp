#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace csw {

// GMP keeps mpq_class canonical through arithmetic; values built from raw
// numerator/denominator pairs must go through make_rational.
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);

// Accepts "p", "-p", "p/q"; the result is reduced. Throws Error(Parse).
Rational parse_rational(std::string_view text);

// "p" for integers, "p/q" otherwise.
std::string format_rational(const Rational& q);

inline Rational abs_value(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// K^{-e}
Rational inverse_power(const Rational& base, int exponent);

}  // namespace csw

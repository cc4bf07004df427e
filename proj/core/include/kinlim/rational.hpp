#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

namespace kinlim {

// Arbitrary precision rational. GMP keeps mpq values canonical (lowest terms,
// positive denominator) after every arithmetic operation; values built from a
// raw numerator/denominator pair must go through make_rational.
using Rational = mpq_class;

Rational make_rational(long numerator, long denominator = 1);

// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

// Parses "p", "p/q" or a plain decimal such as "0.25" exactly.
Rational parse_rational(std::string_view text);

}  // namespace kinlim

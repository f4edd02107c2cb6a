#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace purity {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

Integer ipow(const Integer& base, unsigned exponent);
Rational rpow(const Rational& base, unsigned exponent);

double to_double(const Rational& value);

/// Exact binary value of a finite double.
Rational from_double(double value);

/// "num/den", or just "num" when the denominator is 1.
std::string to_string(const Rational& value);

/// Fifteen significant digits.
std::string to_decimal(double value);
std::string to_decimal(const Rational& value);

/// Parses "3", "-3/10", "0.3" or "1e-3" into an exact rational.
/// Decimal input is read as the exact decimal fraction it denotes.
Rational parse_rational(std::string_view text);

}  // namespace purity

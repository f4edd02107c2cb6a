#include "purity/rational.hpp"

#include <cctype>
#include <cstdint>
#include <cmath>
#include <cstdio>
#include <limits>

#include "purity/errors.hpp"

namespace purity {

Integer ipow(const Integer& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

Rational rpow(const Rational& base, unsigned exponent) {
  Rational out = 1;
  for (unsigned i = 0; i < exponent; ++i) out *= base;
  return out;
}

double to_double(const Rational& value) {
  // Scale so both parts are representable before dividing.
  const Integer& num = boost::multiprecision::numerator(value);
  const Integer& den = boost::multiprecision::denominator(value);
  const auto bits_num = num == 0 ? 0u : boost::multiprecision::msb(boost::multiprecision::abs(num));
  const auto bits_den = boost::multiprecision::msb(den);
  if (bits_num < 900 && bits_den < 900) {
    return num.convert_to<double>() / den.convert_to<double>();
  }
  const unsigned shift = std::max(bits_num, bits_den) - 900;
  const Integer n2 = num >> shift;
  const Integer d2 = den >> shift;
  if (d2 == 0) return num > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  return n2.convert_to<double>() / d2.convert_to<double>();
}

Rational from_double(double value) {
  if (!std::isfinite(value)) throw ValidationError("cannot convert a non-finite double to a rational");
  if (value == 0.0) return 0;
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  // 53 significant bits fit exactly in an int64.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  Rational out = Integer(scaled);
  const int shift = exponent - 53;
  if (shift > 0) out *= ipow(2, static_cast<unsigned>(shift));
  if (shift < 0) out /= ipow(2, static_cast<unsigned>(-shift));
  return out;
}

std::string to_string(const Rational& value) {
  const Integer& den = boost::multiprecision::denominator(value);
  if (den == 1) return boost::multiprecision::numerator(value).str();
  return boost::multiprecision::numerator(value).str() + "/" + den.str();
}

std::string to_decimal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", value);
  return buf;
}

std::string to_decimal(const Rational& value) { return to_decimal(to_double(value)); }

namespace {

Rational parse_decimal(std::string_view text, std::string_view original) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  Integer mantissa = 0;
  int scale = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_point) ++scale;
      any_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw ValidationError("not a number: '" + std::string(original) + "'");
  long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    bool any_exp = false;
    for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
      exponent = exponent * 10 + (text[pos] - '0');
      any_exp = true;
      if (exponent > 4000) throw ValidationError("exponent out of range: '" + std::string(original) + "'");
    }
    if (!any_exp) throw ValidationError("not a number: '" + std::string(original) + "'");
    if (exp_negative) exponent = -exponent;
  }
  if (pos != text.size()) throw ValidationError("not a number: '" + std::string(original) + "'");
  const long net = exponent - scale;
  Rational value = mantissa;
  if (net > 0) value *= ipow(10, static_cast<unsigned>(net));
  if (net < 0) value /= ipow(10, static_cast<unsigned>(-net));
  return negative ? Rational(-value) : value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view body = trim(text);
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_decimal(trim(body.substr(0, slash)), text);
    const Rational den = parse_decimal(trim(body.substr(slash + 1)), text);
    if (den == 0) throw ValidationError("zero denominator: '" + std::string(text) + "'");
    return num / den;
  }
  return parse_decimal(body, text);
}

}  // namespace purity

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace multlab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Exact "p/q" rendering; integers render without a denominator.
inline std::string to_fraction_string(const Rational& q) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(q);
  if (boost::multiprecision::denominator(q) != 1) {
    os << '/' << boost::multiprecision::denominator(q);
  }
  return os.str();
}

/// Decimal rendering with 12 significant digits.
inline std::string to_decimal_string(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Parses "p", "p/q", or a terminating decimal such as "1.5".
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt p(text.substr(0, slash));
      BigInt q(text.substr(slash + 1));
      if (q == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
      return Rational(p, q);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (neg) whole.erase(0, 1);
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt num(whole.empty() ? std::string("0") : whole);
    num = num * scale + (frac.empty() ? BigInt(0) : BigInt(frac));
    Rational r(num, scale);
    return neg ? Rational(-r) : r;
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational literal '" + text + "'");
  }
}

inline BigInt floor_of(const Rational& q) {
  BigInt p = boost::multiprecision::numerator(q);
  BigInt d = boost::multiprecision::denominator(q);
  BigInt f = p / d;
  if (p % d != 0 && p < 0) f -= 1;
  return f;
}

inline BigInt ceil_of(const Rational& q) {
  BigInt p = boost::multiprecision::numerator(q);
  BigInt d = boost::multiprecision::denominator(q);
  BigInt c = p / d;
  if (p % d != 0 && p > 0) c += 1;
  return c;
}

inline std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("integer does not fit in 64 bits");
  }
  return v.convert_to<std::int64_t>();
}

}  // namespace multlab

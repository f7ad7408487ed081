#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "gossamer/errors.hpp"

namespace gossamer {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return den(q) == 1; }

inline int sign_of(const Rational& q) { return q.sign(); }

inline std::string to_string(const Rational& q) {
  if (is_integer(q)) return num(q).str();
  return num(q).str() + "/" + den(q).str();
}

// q^k for integer k (k may be negative; q must be nonzero then).
inline Rational pow_rational(const Rational& q, long k) {
  if (k == 0) return Rational(1);
  bool invert = k < 0;
  unsigned long n = invert ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  Int p = boost::multiprecision::pow(num(q), static_cast<unsigned>(n));
  Int d = boost::multiprecision::pow(den(q), static_cast<unsigned>(n));
  if (invert) {
    if (p == 0) throw DivisionByExactZero("0 raised to a negative power");
    return Rational(d, p);
  }
  return Rational(p, d);
}

// Floor of the integer square root of a nonnegative integer.
inline Int isqrt(const Int& n) {
  if (n < 0) throw Error("isqrt of a negative number");
  return boost::multiprecision::sqrt(n);
}

// First `digits` decimal digits of q > 0 rendered as "i.ffff...".
inline std::string decimal_digits(const Rational& q, unsigned digits) {
  if (q < 0) return "-" + decimal_digits(-q, digits);
  Int scale = boost::multiprecision::pow(Int(10), digits);
  Int scaled = (num(q) * scale) / den(q);
  std::string s = scaled.str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  return s;
}

}  // namespace gossamer

#pragma once

// Evaluation points.  Everything is eventually evaluated at main-variable ->
// +infinity; finite and zero-sided points shift there through the
// substitutions x -> a +/- 1/t and x -> +/- 1/t.

#include <optional>
#include <string>

#include "gossamer/expr.hpp"

namespace gossamer {

enum class Side : std::uint8_t { Plus, Minus, Both };

struct Point {
  enum class Kind : std::uint8_t { Infinity, ZeroPlus, ZeroMinus, Finite } kind;
  Rational location;  // Finite only
  Side side = Side::Both;

  static Point infinity() { return {Kind::Infinity, Rational(0), Side::Plus}; }
  static Point zero_plus() { return {Kind::ZeroPlus, Rational(0), Side::Plus}; }
  static Point zero_minus() { return {Kind::ZeroMinus, Rational(0), Side::Minus}; }
  static Point finite(Rational a, Side s = Side::Both) { return {Kind::Finite, std::move(a), s}; }

  bool is_infinity() const { return kind == Kind::Infinity; }
  bool two_sided() const { return kind == Kind::Finite && side == Side::Both; }

  friend bool operator==(const Point& a, const Point& b) {
    return a.kind == b.kind && a.location == b.location && a.side == b.side;
  }

  std::string str() const {
    switch (kind) {
      case Kind::Infinity: return "inf";
      case Kind::ZeroPlus: return "0+";
      case Kind::ZeroMinus: return "0-";
      case Kind::Finite: {
        std::string s = to_string(location);
        if (side == Side::Plus) s += "+";
        if (side == Side::Minus) s += "-";
        return s;
      }
    }
    return "?";
  }
};

// Parses the value part of "--at var=VALUE": inf, 0+, 0-, a, a+, a-.
inline Point parse_point_value(const std::string& text) {
  std::string t = text;
  if (t == "inf" || t == "+inf" || t == "infinity" || t == "oo") return Point::infinity();
  if (t == "0+") return Point::zero_plus();
  if (t == "0-") return Point::zero_minus();
  Side side = Side::Both;
  if (!t.empty() && (t.back() == '+' || t.back() == '-')) {
    side = t.back() == '+' ? Side::Plus : Side::Minus;
    t.pop_back();
  }
  bool negate = false;
  std::size_t i = 0;
  if (i < t.size() && (t[i] == '-' || t[i] == '+')) {
    negate = t[i] == '-';
    ++i;
  }
  std::size_t slash = t.find('/', i);
  auto digits = [&](std::size_t from, std::size_t to) {
    if (from >= to) throw ParseError("bad point value '" + text + "'", from);
    for (std::size_t k = from; k < to; ++k)
      if (!std::isdigit(static_cast<unsigned char>(t[k])))
        throw ParseError("bad point value '" + text + "'", k);
    return Int(t.substr(from, to - from));
  };
  Rational a;
  if (slash == std::string::npos) {
    a = Rational(digits(i, t.size()));
  } else {
    Int nn = digits(i, slash);
    Int dd = digits(slash + 1, t.size());
    if (dd == 0) throw ParseError("zero denominator in point", slash + 1);
    a = Rational(nn, dd);
  }
  if (negate) a = -a;
  if (a == 0) {
    if (side == Side::Plus) return Point::zero_plus();
    if (side == Side::Minus) return Point::zero_minus();
    return Point::finite(Rational(0), Side::Both);
  }
  return Point::finite(a, side);
}

// One-sided shift to infinity (Point with the side resolved).  Returns the
// substituted expression whose behaviour at t = +infinity matches e at p.
inline ExprPtr shift_to_infinity(const ExprPtr& e, const Point& p, Side resolved_side) {
  if (p.is_infinity()) return e;
  if (contains_fact(e))
    throw FactorialDomainError("factorial nodes cannot be shifted away from infinity");
  ExprPtr inv_t = make_div(make_rational(Rational(1)), make_var());
  switch (p.kind) {
    case Point::Kind::ZeroPlus:
      return substitute(e, inv_t);
    case Point::Kind::ZeroMinus:
      return substitute(e, make_neg(inv_t));
    case Point::Kind::Finite: {
      ExprPtr shift = resolved_side == Side::Minus ? make_neg(inv_t) : inv_t;
      return substitute(e, make_add({shift, make_rational(p.location)}));
    }
    default:
      return e;
  }
}

// Public shift operation: (expression, whether a shift happened).  Two-sided
// finite points resolve to the plus side; limit evaluation handles the minus
// side separately.
inline std::pair<ExprPtr, bool> shift_point(const ExprPtr& e, const Point& p) {
  if (p.is_infinity()) return {e, false};
  Side s = p.side == Side::Both ? Side::Plus : p.side;
  return {shift_to_infinity(e, p, s), true};
}

}  // namespace gossamer

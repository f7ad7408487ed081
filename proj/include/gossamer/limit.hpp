#pragma once

// Limits by expansion plus the standard-part transfer, two-sided handling at
// finite points, a comparison-form L'Hopital loop, and the exact-rational
// Newton iteration for sqrt(2).

#include <memory>
#include <optional>
#include <string>

#include "gossamer/engine.hpp"
#include "gossamer/point.hpp"

namespace gossamer {

struct LimitResult {
  enum class Kind : std::uint8_t {
    Value,
    PlusInfinity,
    MinusInfinity,
    TwoSidedMismatch,
    Undetermined,
  } kind;
  Coeff value;  // Value
  std::shared_ptr<LimitResult> left, right;  // TwoSidedMismatch
  std::string reason;                        // Undetermined

  static LimitResult finite(Coeff c) { return {Kind::Value, std::move(c), nullptr, nullptr, ""}; }
  static LimitResult plus_infinity() { return {Kind::PlusInfinity, Coeff(), nullptr, nullptr, ""}; }
  static LimitResult minus_infinity() {
    return {Kind::MinusInfinity, Coeff(), nullptr, nullptr, ""};
  }
  static LimitResult mismatch(LimitResult l, LimitResult r) {
    return {Kind::TwoSidedMismatch, Coeff(), std::make_shared<LimitResult>(std::move(l)),
            std::make_shared<LimitResult>(std::move(r)), ""};
  }
  static LimitResult undetermined(std::string why) {
    return {Kind::Undetermined, Coeff(), nullptr, nullptr, std::move(why)};
  }

  bool is_value() const { return kind == Kind::Value; }
  bool same_as(const LimitResult& o) const {
    if (kind != o.kind) return false;
    if (kind == Kind::Value) return value == o.value;
    return kind != Kind::TwoSidedMismatch;
  }

  std::string str() const {
    switch (kind) {
      case Kind::Value: return value.str();
      case Kind::PlusInfinity: return "+inf";
      case Kind::MinusInfinity: return "-inf";
      case Kind::TwoSidedMismatch:
        return "two-sided mismatch (left " + left->str() + ", right " + right->str() + ")";
      case Kind::Undetermined: return "undetermined: " + reason;
    }
    return "?";
  }
};

namespace detail {

inline LimitResult limit_one_side(const ExprPtr& e, const Point& p, Side side,
                                  const Assumptions& a, ExpandOptions opts,
                                  const std::string& var_name) {
  try {
    Engine eng(a, p, side, opts);
    eng.set_var_name(var_name);
    ExtendedReal r = eng.st(eng.expand(e));
    switch (r.kind) {
      case ExtendedReal::Kind::Finite: return LimitResult::finite(r.value);
      case ExtendedReal::Kind::PlusInfinity: return LimitResult::plus_infinity();
      case ExtendedReal::Kind::MinusInfinity: return LimitResult::minus_infinity();
    }
    return LimitResult::undetermined("unreachable");
  } catch (const ParseError&) {
    throw;
  } catch (const Error& err) {
    return LimitResult::undetermined(err.what());
  }
}

}  // namespace detail

inline LimitResult limit(const ExprPtr& e, const Point& p, const Assumptions& a,
                         ExpandOptions opts = {}, const std::string& var_name = "x") {
  if (p.two_sided()) {
    LimitResult right = detail::limit_one_side(e, p, Side::Plus, a, opts, var_name);
    LimitResult left = detail::limit_one_side(e, p, Side::Minus, a, opts, var_name);
    if (left.kind == LimitResult::Kind::Undetermined) return left;
    if (right.kind == LimitResult::Kind::Undetermined) return right;
    if (!left.same_as(right)) return LimitResult::mismatch(std::move(left), std::move(right));
    return right;
  }
  Side s = p.side == Side::Both ? Side::Plus : p.side;
  return detail::limit_one_side(e, p, s, a, opts, var_name);
}

// Comparison-form L'Hopital: differentiate numerator and denominator while
// the pair stays in an indeterminate form, then combine the side limits.
inline LimitResult limit_lhopital(const ExprPtr& f0, const ExprPtr& g0, const Point& p,
                                  const Assumptions& a, int max_rounds = 12,
                                  ExpandOptions opts = {}, const std::string& var_name = "x") {
  ExprPtr f = f0, g = g0;
  if (contains_fact(f0) || contains_fact(g0))
    throw FactorialDomainError("L'Hopital rounds require factorial-free expressions");
  auto is_zero_value = [&](const LimitResult& r) {
    return r.is_value() && (r.value.is_zero() || a.sign(r.value) == Sign::Zero);
  };
  auto is_inf = [](const LimitResult& r) {
    return r.kind == LimitResult::Kind::PlusInfinity || r.kind == LimitResult::Kind::MinusInfinity;
  };
  for (int round = 0; round <= max_rounds; ++round) {
    LimitResult lf = limit(f, p, a, opts, var_name);
    LimitResult lg = limit(g, p, a, opts, var_name);
    if (lf.kind == LimitResult::Kind::Undetermined) return lf;
    if (lg.kind == LimitResult::Kind::Undetermined) return lg;
    if (lf.kind == LimitResult::Kind::TwoSidedMismatch ||
        lg.kind == LimitResult::Kind::TwoSidedMismatch)
      return LimitResult::undetermined("side limits disagree under L'Hopital");
    bool indeterminate = (is_zero_value(lf) && is_zero_value(lg)) || (is_inf(lf) && is_inf(lg));
    if (!indeterminate) {
      if (is_inf(lg) && lf.is_value()) return LimitResult::finite(Coeff());
      if (is_zero_value(lg)) {
        // c/0 diverges with the sign governed by how g approaches zero.
        auto side_sign = [&](Side side) {
          Engine eng(a, p, side, opts);
          eng.set_var_name(var_name);
          return eng.sign_leading(eng.expand(g));
        };
        auto side_verdict = [&](Side side) -> LimitResult {
          Sign sg = side_sign(side);
          if (sg == Sign::Unknown)
            throw NotIndeterminate("denominator vanishes with unresolved approach sign");
          if (sg == Sign::Zero)
            throw NotIndeterminate("denominator is exactly zero near the point");
          Sign sf = is_inf(lf) ? (lf.kind == LimitResult::Kind::PlusInfinity ? Sign::Positive
                                                                             : Sign::Negative)
                               : a.sign(lf.value);
          if (sf == Sign::Unknown)
            throw NotIndeterminate("numerator sign over a vanishing denominator is unresolved");
          bool plus = (sf == Sign::Positive) == (sg == Sign::Positive);
          return plus ? LimitResult::plus_infinity() : LimitResult::minus_infinity();
        };
        if (p.two_sided()) {
          LimitResult right = side_verdict(Side::Plus);
          LimitResult left = side_verdict(Side::Minus);
          if (!left.same_as(right)) return LimitResult::mismatch(std::move(left), std::move(right));
          return right;
        }
        return side_verdict(p.side == Side::Both ? Side::Plus : p.side);
      }
      if (is_inf(lf) && lg.is_value()) {
        Sign s = a.sign(lg.value);
        if (s == Sign::Unknown)
          return LimitResult::undetermined("sign of the denominator limit is unknown");
        bool plus = (lf.kind == LimitResult::Kind::PlusInfinity) == (s == Sign::Positive);
        return plus ? LimitResult::plus_infinity() : LimitResult::minus_infinity();
      }
      return LimitResult::finite(lf.value / lg.value);
    }
    f = differentiate(f);
    g = differentiate(g);
    if (expr_size(f) + expr_size(g) > 1500)
      return LimitResult::undetermined(
          "RoundsExhausted: derivative expressions grew beyond the round budget");
  }
  return LimitResult::undetermined("RoundsExhausted: still indeterminate after " +
                                   std::to_string(max_rounds) + " rounds");
}

// ---------------------------------------------------------------------------
// Newton iteration for sqrt(2) in exact rational arithmetic:
//   delta_n = 1/x_n - x_n/2,  x_{n+1} = x_n + delta_n,  x_0 = 3/2.

inline Rational newton_sqrt2_demo(int iterations) {
  Rational x(3, 2);
  for (int i = 0; i < iterations; ++i) {
    Rational delta = Rational(1) / x - x / Rational(2);
    x += delta;
  }
  return x;
}

// Number of correct decimal places of x against sqrt(2), judged by the exact
// integer square root of 2 * 10^(2*digits).
inline int sqrt2_digits_correct(const Rational& x, unsigned digits = 100) {
  Int scale = boost::multiprecision::pow(Int(10), digits);
  Int truth = isqrt(Int(2) * scale * scale);  // floor(sqrt(2) * 10^digits)
  Int approx = (num(x) * scale) / den(x);
  std::string a = truth.str(), b = approx.str();
  if (a.size() != b.size()) return 0;
  int match = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) break;
    ++match;
  }
  return match > 0 ? match - 1 : 0;  // drop the integer digit: places after the point
}

}  // namespace gossamer

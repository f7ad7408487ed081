#pragma once

// Floating-point log-domain evaluation, used only as a numeric cross-check
// of symbolic verdicts (never inside the kernel).  Values are carried as
// sign * exp(logmag) so that quantities like e^(x^2) at x = 1e9 stay
// representable.

#include <cmath>
#include <limits>

#include "gossamer/expr.hpp"

namespace gossamer {

struct NumVal {
  int sign = 0;       // -1, 0, +1
  double logmag = -std::numeric_limits<double>::infinity();

  double value() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(logmag);
  }
  static NumVal from(double v) {
    if (v == 0.0) return {};
    return {v > 0 ? 1 : -1, std::log(std::abs(v))};
  }
};

namespace detail {

inline NumVal num_add(const NumVal& a, const NumVal& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  double hi = std::max(a.logmag, b.logmag);
  double lo = std::min(a.logmag, b.logmag);
  if (a.sign == b.sign) return {a.sign, hi + std::log1p(std::exp(lo - hi))};
  if (a.logmag == b.logmag) return {};
  int sign = a.logmag > b.logmag ? a.sign : b.sign;
  double mag = hi + std::log1p(-std::exp(lo - hi));
  return {sign, mag};
}

inline NumVal num_mul(const NumVal& a, const NumVal& b) {
  if (a.sign == 0 || b.sign == 0) return {};
  return {a.sign * b.sign, a.logmag + b.logmag};
}

inline NumVal num_div(const NumVal& a, const NumVal& b) {
  if (b.sign == 0) throw Error("numeric evaluation divides by zero");
  if (a.sign == 0) return {};
  return {a.sign * b.sign, a.logmag - b.logmag};
}

}  // namespace detail

// Evaluate at a concrete positive abscissa. Parameters must be bound first.
inline NumVal numeric_eval(const ExprPtr& e, double x) {
  switch (e->kind) {
    case ExprKind::Rational:
      return NumVal::from(static_cast<double>(e->value));
    case ExprKind::Param:
      throw Error("numeric evaluation requires parameter-free input (bind '" + e->name + "')");
    case ExprKind::Var:
      return NumVal::from(x);
    case ExprKind::Add: {
      NumVal acc;
      for (const auto& k : e->kids) acc = detail::num_add(acc, numeric_eval(k, x));
      return acc;
    }
    case ExprKind::Mul: {
      NumVal acc = NumVal::from(1.0);
      for (const auto& k : e->kids) acc = detail::num_mul(acc, numeric_eval(k, x));
      return acc;
    }
    case ExprKind::Div:
      return detail::num_div(numeric_eval(e->kids[0], x), numeric_eval(e->kids[1], x));
    case ExprKind::Ln: {
      NumVal u = numeric_eval(e->kids[0], x);
      if (u.sign <= 0) throw Error("numeric evaluation: ln of a non-positive value");
      return NumVal::from(u.logmag);  // ln(e^logmag) == logmag
    }
    case ExprKind::Exp: {
      NumVal u = numeric_eval(e->kids[0], x);
      double v = u.value();
      if (std::isinf(v))  // saturate far beyond double range
        v = u.sign > 0 ? std::numeric_limits<double>::max()
                       : -std::numeric_limits<double>::max();
      return {1, v};
    }
    case ExprKind::Fact: {
      NumVal u = numeric_eval(e->kids[0], x);
      double v = u.value();
      if (v < 0) throw Error("numeric evaluation: factorial of a negative value");
      return {1, std::lgamma(v + 1.0)};
    }
  }
  throw Error("unreachable");
}

// ln|f(x)| - ln|g(x)|: the trend of this quantity across sample points is
// the numeric oracle for magnitude verdicts.
inline double numeric_log_ratio(const ExprPtr& f, const ExprPtr& g, double x) {
  NumVal a = numeric_eval(f, x);
  NumVal b = numeric_eval(g, x);
  if (a.sign == 0 || b.sign == 0) throw Error("numeric oracle hit an exact zero");
  return a.logmag - b.logmag;
}

// Plain double evaluation for the finite-difference derivative oracle.
inline double numeric_value(const ExprPtr& e, double x) { return numeric_eval(e, x).value(); }

}  // namespace gossamer

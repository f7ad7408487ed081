#pragma once

// Truncated multiseries values: finite sums of (coefficient, monomial) terms
// over a growth-ordered basis of comparison classes, sorted by strictly
// descending growth at the evaluation point.  These are the computational
// realization of numbers with infinitesimal, real and infinitary components.

#include <optional>
#include <string>
#include <vector>

#include "gossamer/coeff.hpp"
#include "gossamer/expr.hpp"
#include "gossamer/point.hpp"

namespace gossamer {

// A comparison class.  VarItself is the main variable, IterLog(k) the
// k-times-nested logarithm of it, IterExp an exponential class created on
// demand whose tower (the exponent) is itself a multiseries.
struct BasisElement {
  enum class Kind : std::uint8_t { IterLog, VarItself, IterExp } kind;
  int log_depth = 0;  // IterLog only, k >= 1
  int id = -1;        // creation id, stable across basis growth
  int nest_depth = 1; // tower nesting, for the depth limit
  // IterExp: tower such that element == exp(tower); set by the engine.
  std::shared_ptr<const struct GNum> tower;
};

using BasisElementPtr = std::shared_ptr<const BasisElement>;

// Growth monomial: finite map element-id -> exponent (a Coeff, so parameter
// exponents like x^a are first class).  Sorted by element id.
struct GMonomial {
  std::vector<std::pair<int, Coeff>> powers;

  bool is_unit() const { return powers.empty(); }

  friend bool operator==(const GMonomial& a, const GMonomial& b) {
    if (a.powers.size() != b.powers.size()) return false;
    for (std::size_t i = 0; i < a.powers.size(); ++i) {
      if (a.powers[i].first != b.powers[i].first) return false;
      if (!(a.powers[i].second == b.powers[i].second)) return false;
    }
    return true;
  }
};

struct GTerm {
  Coeff coeff;
  GMonomial mono;
};

// Truncation bookkeeping: exact when not exhausted; when exhausted, `bound`
// (if known) dominates every dropped term.
struct Tail {
  bool exhausted = false;
  std::optional<GMonomial> bound;

  static Tail exact() { return {}; }
};

struct GNum {
  std::vector<GTerm> terms;  // strictly descending growth
  Tail tail;
  Point point = Point::infinity();

  bool is_exact_zero() const { return terms.empty() && !tail.exhausted; }
  bool exhausted() const { return tail.exhausted; }
  const GTerm& leading() const { return terms.front(); }
};

// Component decomposition: all-infinitesimal part, the exponent-zero
// coefficient, all-infinitary part.
struct Components {
  GNum phi;
  Coeff real;
  GNum inf;
};

// The seven forms, plus exact zero (which is not an infinitesimal).
enum class Form : std::uint8_t {
  ExactZero,
  Phi,
  PhiReal,
  PhiInf,
  PhiRealInf,
  Real,
  RealInf,
  Inf,
};

inline std::string form_name(Form f) {
  switch (f) {
    case Form::ExactZero: return "0";
    case Form::Phi: return "Phi";
    case Form::PhiReal: return "Phi+R";
    case Form::PhiInf: return "Phi+Inf";
    case Form::PhiRealInf: return "Phi+R+Inf";
    case Form::Real: return "R";
    case Form::RealInf: return "R+Inf";
    case Form::Inf: return "Inf";
  }
  return "?";
}

struct ExtendedReal {
  enum class Kind : std::uint8_t { Finite, PlusInfinity, MinusInfinity } kind;
  Coeff value;  // Finite only

  static ExtendedReal finite(Coeff c) { return {Kind::Finite, std::move(c)}; }
  static ExtendedReal plus_infinity() { return {Kind::PlusInfinity, Coeff()}; }
  static ExtendedReal minus_infinity() { return {Kind::MinusInfinity, Coeff()}; }

  bool is_finite() const { return kind == Kind::Finite; }
  std::string str() const {
    switch (kind) {
      case Kind::Finite: return value.str();
      case Kind::PlusInfinity: return "+inf";
      case Kind::MinusInfinity: return "-inf";
    }
    return "?";
  }
};

}  // namespace gossamer

#pragma once

// Sign/order constraints on parameter combinations, and the sign oracle for
// coefficients.  Every bare parameter is implicitly finite and positive.
// The oracle is deliberately conservative: a combination it cannot resolve
// surfaces as Sign::Unknown, which callers turn into AssumptionNeeded.

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "gossamer/coeff.hpp"
#include "gossamer/errors.hpp"
#include "gossamer/interval.hpp"

namespace gossamer {

enum class Sign { Negative = -1, Zero = 0, Positive = 1, Unknown = 2 };

inline Sign sign_negate(Sign s) {
  switch (s) {
    case Sign::Negative: return Sign::Positive;
    case Sign::Positive: return Sign::Negative;
    default: return s;
  }
}

enum class ConstraintRel { Gt, Lt, Eq, Ge, Le };  // combo REL 0, rhs folded in

struct Constraint {
  Poly combo;  // canonical linear form, constraint is "combo REL 0"
  ConstraintRel rel;
  std::string source;  // original text, for diagnostics
};

class Assumptions {
 public:
  Assumptions() = default;

  // Parses "a>0, mu+v<1" style constraint lists.
  static Assumptions parse(const std::string& text);

  void add(Poly combo, ConstraintRel rel, std::string source) {
    constraints_.push_back({std::move(combo), rel, std::move(source)});
    check_consistency();
  }

  const std::vector<Constraint>& constraints() const { return constraints_; }

  const std::vector<std::string>& declared_params() const { return params_; }
  bool is_declared(const std::string& name) const {
    for (const auto& p : params_)
      if (p == name) return true;
    return false;
  }
  void declare(const std::string& name) {
    if (!is_declared(name)) params_.push_back(name);
  }

  Sign sign(const Coeff& c) const {
    Sign n = poly_sign(c.num(), 1);
    if (n == Sign::Zero) return Sign::Zero;
    Sign d = poly_sign(c.den(), 1);
    if (n == Sign::Unknown || d == Sign::Unknown) return fallback_sign(c);
    if (d == Sign::Zero) return Sign::Unknown;  // malformed; not reachable
    return d == Sign::Positive ? n : sign_negate(n);
  }

  Sign require_known(const Coeff& c, const char* what) const {
    Sign s = sign(c);
    if (s == Sign::Unknown)
      throw AssumptionNeeded(std::string("cannot resolve the sign of ") + what, c.str());
    return s;
  }

  // Tri-state "is this symbol's value > 1", used for signs of ln(symbol).
  std::optional<bool> symbol_greater_one(const Symbol& s) const {
    switch (s->kind) {
      case SymKind::Param: {
        Poly combo = Poly::term(SymMonomial::single(s, Rational(1)), Rational(1)) - Poly(Rational(1));
        Sign sg = poly_sign(combo, 0);
        if (sg == Sign::Positive) return true;
        if (sg == Sign::Negative || sg == Sign::Zero) return false;
        return std::nullopt;
      }
      case SymKind::EulerE:
      case SymKind::TwoPi:
        return true;
      case SymKind::Prime:
        return s->prime_value > 1;
      default: {
        Coeff v = Coeff::from_symbol(s) - Coeff(Rational(1));
        Sign sg = sign(v);
        if (sg == Sign::Positive) return true;
        if (sg == Sign::Negative || sg == Sign::Zero) return false;
        return std::nullopt;
      }
    }
  }

  // Sign of a single symbol's value.
  Sign symbol_sign(const Symbol& s) const {
    switch (s->kind) {
      case SymKind::Param:
      case SymKind::EulerE:
      case SymKind::TwoPi:
        return Sign::Positive;
      case SymKind::Prime:
        return Sign::Positive;
      case SymKind::ExpPoly:
        return Sign::Positive;  // exp of a real value
      case SymKind::LnSym: {
        auto gt1 = symbol_greater_one(s->inner);
        if (!gt1) return Sign::Unknown;
        if (*gt1) return Sign::Positive;
        // value in (0,1] -> ln <= 0; distinguish == 1
        if (s->inner->kind == SymKind::Param) {
          Poly combo = Poly::term(SymMonomial::single(s->inner, Rational(1)), Rational(1)) -
                       Poly(Rational(1));
          if (poly_sign(combo, 0) == Sign::Zero) return Sign::Zero;
        }
        return Sign::Negative;
      }
      case SymKind::LnPoly: {
        Sign arg_vs_1 = sign(*s->arg - Coeff(Rational(1)));
        if (arg_vs_1 == Sign::Positive) return Sign::Positive;
        if (arg_vs_1 == Sign::Negative) return Sign::Negative;
        if (arg_vs_1 == Sign::Zero) return Sign::Zero;
        return Sign::Unknown;
      }
    }
    return Sign::Unknown;
  }

 private:
  // Sign of one monomial value: product of symbol-power signs.
  Sign monomial_sign(const SymMonomial& m) const {
    int sgn = 1;
    bool nonneg_only = false;
    for (const auto& [s, e] : m.factors()) {
      Sign ss = symbol_sign(s);
      if (ss == Sign::Positive) continue;
      if (ss == Sign::Zero) return Sign::Zero;
      bool even_power = is_integer(e) && num(e) % 2 == 0;
      if (ss == Sign::Negative) {
        if (is_integer(e)) {
          if (!even_power) sgn = -sgn;
          continue;
        }
        return Sign::Unknown;  // fractional power of a negative value
      }
      // Unknown symbol sign.
      if (even_power) {
        nonneg_only = true;  // x^even >= 0, possibly zero
        continue;
      }
      return Sign::Unknown;
    }
    if (nonneg_only) return Sign::Unknown;  // cannot certify strictness
    return sgn > 0 ? Sign::Positive : Sign::Negative;
  }

  // All terms of one strict sign (zero-valued monomials tolerated).
  Sign structural_sign(const Poly& p) const {
    int seen = 0;
    for (const auto& [m, q] : p.terms()) {
      Sign ms = monomial_sign(m);
      if (ms == Sign::Unknown) return Sign::Unknown;
      if (ms == Sign::Zero) continue;
      int ts = (ms == Sign::Positive ? 1 : -1) * sign_of(q);
      if (seen == 0)
        seen = ts;
      else if (seen != ts)
        return Sign::Unknown;
    }
    if (seen == 0) return Sign::Unknown;  // every monomial vanished; stay cautious
    return seen > 0 ? Sign::Positive : Sign::Negative;
  }

  // Exact match against a constraint, up to a rational scale.
  Sign constraint_sign(const Poly& p) const {
    for (const auto& con : constraints_) {
      auto lambda = match_scale(p, con.combo);
      if (!lambda) continue;
      Sign base;
      switch (con.rel) {
        case ConstraintRel::Gt: base = Sign::Positive; break;
        case ConstraintRel::Lt: base = Sign::Negative; break;
        case ConstraintRel::Eq: base = Sign::Zero; break;
        default: continue;  // >=/<= do not give a strict sign
      }
      return *lambda > 0 ? base : sign_negate(base);
    }
    return Sign::Unknown;
  }

  // Decomposition p = lambda * combo + rest.  Strict constraints need the
  // rest to agree in sign; equalities contribute nothing and any pivot
  // monomial of the combo may be eliminated.
  Sign decomposed_sign(const Poly& p, int depth) const {
    for (const auto& con : constraints_) {
      bool is_eq = con.rel == ConstraintRel::Eq;
      if (!is_eq && con.rel != ConstraintRel::Gt && con.rel != ConstraintRel::Lt) continue;
      Sign combo_sign = con.rel == ConstraintRel::Gt ? Sign::Positive : Sign::Negative;
      for (const auto& [m, q] : con.combo.terms()) {
        auto it = find_term(p, m);
        if (!it) continue;
        Rational lambda = *it / q;
        if (lambda == 0) continue;
        Poly rest = p - con.combo.scaled(lambda);
        if (is_eq) {
          Sign rest_sign = poly_sign(rest, depth - 1);
          if (rest_sign != Sign::Unknown) return rest_sign;
          continue;
        }
        Sign part = lambda > 0 ? combo_sign : sign_negate(combo_sign);
        if (rest.is_zero()) return part;
        Sign rest_sign = poly_sign(rest, depth - 1);
        if (rest_sign == part || rest_sign == Sign::Zero) return part;
      }
    }
    return Sign::Unknown;
  }

  // depth: how many levels of constraint decomposition remain.
  Sign poly_sign(const Poly& p, int depth) const {
    if (p.is_zero()) return Sign::Zero;
    if (p.is_constant()) return static_cast<Sign>(sign_of(p.constant_value()));
    Sign s = structural_sign(p);
    if (s != Sign::Unknown) return s;
    s = constraint_sign(p);
    if (s != Sign::Unknown) return s;
    Poly r = reduce_by_equalities(p);
    bool reduced = !(r == p);
    if (reduced) {
      if (r.is_zero()) return Sign::Zero;
      if (r.is_constant()) return static_cast<Sign>(sign_of(r.constant_value()));
      s = structural_sign(r);
      if (s != Sign::Unknown) return s;
      s = constraint_sign(r);
      if (s != Sign::Unknown) return s;
    }
    if (depth > 0) {
      s = decomposed_sign(p, depth);
      if (s != Sign::Unknown) return s;
      if (reduced) {
        s = decomposed_sign(r, depth);
        if (s != Sign::Unknown) return s;
      }
    }
    // Parameter-free: certified interval arithmetic.
    Coeff as_coeff(r, Poly(Rational(1)));
    if (as_coeff.parameter_free()) {
      auto cs = certified_constant_sign(as_coeff);
      if (cs) return static_cast<Sign>(*cs);
    }
    return Sign::Unknown;
  }

  Sign fallback_sign(const Coeff& c) const {
    if (c.parameter_free()) {
      auto s = certified_constant_sign(c);
      if (s) return static_cast<Sign>(*s);
    }
    return Sign::Unknown;
  }

  Poly reduce_by_equalities(const Poly& p) const {
    Poly r = p;
    for (int pass = 0; pass < 4; ++pass) {
      bool changed = false;
      for (const auto& con : constraints_) {
        if (con.rel != ConstraintRel::Eq) continue;
        const auto& pivot = con.combo.leading();
        auto coeff = find_term(r, pivot.first);
        if (!coeff || *coeff == 0) continue;
        r = r - con.combo.scaled(*coeff / pivot.second);
        changed = true;
      }
      if (!changed) break;
    }
    return r;
  }

  static std::optional<Rational> find_term(const Poly& p, const SymMonomial& m) {
    for (const auto& t : p.terms())
      if (t.first == m) return t.second;
    return std::nullopt;
  }

  // If p == lambda * q for a single rational lambda, return it.
  static std::optional<Rational> match_scale(const Poly& p, const Poly& q) {
    if (p.size() != q.size() || p.is_zero()) return std::nullopt;
    const auto& pt = p.terms();
    const auto& qt = q.terms();
    Rational lambda = pt[0].second / qt[0].second;
    for (std::size_t i = 0; i < pt.size(); ++i) {
      if (!(pt[i].first == qt[i].first)) return std::nullopt;
      if (pt[i].second != lambda * qt[i].second) return std::nullopt;
    }
    return lambda;
  }

  void check_consistency() const {
    for (std::size_t i = 0; i < constraints_.size(); ++i)
      for (std::size_t j = i + 1; j < constraints_.size(); ++j) {
        auto lambda = match_scale(constraints_[i].combo, constraints_[j].combo);
        if (!lambda) continue;
        ConstraintRel a = constraints_[i].rel;
        ConstraintRel b = constraints_[j].rel;
        if (*lambda < 0) b = flip(b);
        if (contradicts(a, b))
          throw Error("contradictory assumptions: '" + constraints_[i].source + "' vs '" +
                      constraints_[j].source + "'");
      }
  }

  static ConstraintRel flip(ConstraintRel r) {
    switch (r) {
      case ConstraintRel::Gt: return ConstraintRel::Lt;
      case ConstraintRel::Lt: return ConstraintRel::Gt;
      case ConstraintRel::Ge: return ConstraintRel::Le;
      case ConstraintRel::Le: return ConstraintRel::Ge;
      case ConstraintRel::Eq: return ConstraintRel::Eq;
    }
    return r;
  }

  static bool contradicts(ConstraintRel a, ConstraintRel b) {
    auto incompatible = [](ConstraintRel x, ConstraintRel y) {
      return (x == ConstraintRel::Gt &&
              (y == ConstraintRel::Lt || y == ConstraintRel::Eq || y == ConstraintRel::Le)) ||
             (x == ConstraintRel::Lt &&
              (y == ConstraintRel::Gt || y == ConstraintRel::Eq || y == ConstraintRel::Ge)) ||
             (x == ConstraintRel::Eq && (y == ConstraintRel::Gt || y == ConstraintRel::Lt)) ||
             (x == ConstraintRel::Ge && y == ConstraintRel::Lt) ||
             (x == ConstraintRel::Le && y == ConstraintRel::Gt);
    };
    return incompatible(a, b) || incompatible(b, a);
  }

  std::vector<Constraint> constraints_;
  std::vector<std::string> params_;
};

// ---------------------------------------------------------------------------
// Assumption-string parsing: comma-separated "combo REL c".

namespace detail {

class AssumeLexer {
 public:
  explicit AssumeLexer(const std::string& s) : s_(s) {}

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eof() {
    skip_ws();
    return i_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  bool consume(char c) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  std::size_t pos() const { return i_; }

  std::optional<Rational> number() {
    skip_ws();
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ == start) return std::nullopt;
    Int n(s_.substr(start, i_ - start));
    if (i_ < s_.size() && s_[i_] == '/') {
      std::size_t save = i_;
      ++i_;
      std::size_t dstart = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (i_ == dstart) {
        i_ = save;
        return Rational(n);
      }
      Int d(s_.substr(dstart, i_ - dstart));
      if (d == 0) throw ParseError("zero denominator in assumption", dstart);
      return Rational(n, d);
    }
    return Rational(n);
  }

  std::optional<std::string> ident() {
    skip_ws();
    if (i_ >= s_.size() || !(std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
      return std::nullopt;
    std::size_t start = i_;
    while (i_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
      ++i_;
    return s_.substr(start, i_ - start);
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline Assumptions Assumptions::parse(const std::string& text) {
  Assumptions out;
  detail::AssumeLexer lex(text);
  auto parse_combo = [&](Assumptions& a) -> Poly {
    Poly combo;
    bool first = true;
    while (true) {
      int sgn = 1;
      if (lex.consume('+')) {
      } else if (lex.consume('-')) {
        sgn = -1;
      } else if (!first) {
        break;
      }
      first = false;
      Rational scale(1);
      bool have_num = false;
      if (auto q = lex.number()) {
        scale = *q;
        have_num = true;
      }
      if (have_num && lex.consume('*')) have_num = false;  // "2*a" form
      if (auto name = lex.ident()) {
        if (*name == "e" || *name == "ln" || *name == "exp" || *name == "fact")
          throw ParseError("reserved name '" + *name + "' in assumption", lex.pos());
        a.declare(*name);
        combo = combo + Poly::term(SymMonomial::single(SymbolNode::param(*name), Rational(1)),
                                   sgn * scale);
      } else {
        combo = combo + Poly(sgn * scale);
      }
      if (lex.peek() != '+' && lex.peek() != '-') break;
    }
    return combo;
  };

  while (!lex.eof()) {
    Poly lhs = parse_combo(out);
    ConstraintRel rel;
    std::size_t relpos = lex.pos();
    if (lex.consume('>')) {
      rel = lex.consume('=') ? ConstraintRel::Ge : ConstraintRel::Gt;
    } else if (lex.consume('<')) {
      rel = lex.consume('=') ? ConstraintRel::Le : ConstraintRel::Lt;
    } else if (lex.consume('=')) {
      lex.consume('=');
      rel = ConstraintRel::Eq;
    } else {
      throw ParseError("expected relation in assumption", relpos, {">", "<", "=", ">=", "<="});
    }
    Poly rhs = parse_combo(out);
    std::string src = text;  // keep the whole list; positions disambiguate
    out.constraints_.push_back({lhs - rhs, rel, src});
    if (!lex.eof() && !lex.consume(','))
      throw ParseError("expected ',' between assumptions", lex.pos(), {","});
  }
  out.check_consistency();
  return out;
}

}  // namespace gossamer

#pragma once

// Exact symbolic coefficients: rational-linear combinations of parameter
// monomials, closed under multiplication and (monomial) division, with a
// vocabulary of inert positive constants (e, 2*pi, primes under ln, logs of
// parameters).  Zero-equivalence on the canonical form is exact; nonlinear
// identities between opaque constants are deliberately not recognized.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gossamer/errors.hpp"
#include "gossamer/rational.hpp"

namespace gossamer {

class Coeff;
using CoeffPtr = std::shared_ptr<const Coeff>;

// ---------------------------------------------------------------------------
// Symbols

enum class SymKind : std::uint8_t {
  Param,    // a declared positive finite parameter
  EulerE,   // e = exp(1)
  TwoPi,    // the constant 2*pi
  Prime,    // a prime (or opaque cofactor) appearing under ln
  LnSym,    // ln of another symbol
  LnPoly,   // ln of a multi-term coefficient, inert
  ExpPoly,  // exp of a coefficient with no extractable rational/log part
};

struct SymbolNode;
using Symbol = std::shared_ptr<const SymbolNode>;

struct SymbolNode {
  SymKind kind;
  std::string name;  // Param
  Int prime_value;   // Prime
  Symbol inner;      // LnSym
  CoeffPtr arg;      // LnPoly, ExpPoly

  static Symbol param(std::string n) {
    auto s = std::make_shared<SymbolNode>();
    s->kind = SymKind::Param;
    s->name = std::move(n);
    return s;
  }
  static Symbol euler_e() {
    auto s = std::make_shared<SymbolNode>();
    s->kind = SymKind::EulerE;
    return s;
  }
  static Symbol two_pi() {
    auto s = std::make_shared<SymbolNode>();
    s->kind = SymKind::TwoPi;
    return s;
  }
  static Symbol prime(Int p) {
    auto s = std::make_shared<SymbolNode>();
    s->kind = SymKind::Prime;
    s->prime_value = std::move(p);
    return s;
  }
  static Symbol ln_sym(Symbol in) {
    auto s = std::make_shared<SymbolNode>();
    s->kind = SymKind::LnSym;
    s->inner = std::move(in);
    return s;
  }
  static Symbol ln_poly(CoeffPtr c) {
    auto s = std::make_shared<SymbolNode>();
    s->kind = SymKind::LnPoly;
    s->arg = std::move(c);
    return s;
  }
  static Symbol exp_poly(CoeffPtr c) {
    auto s = std::make_shared<SymbolNode>();
    s->kind = SymKind::ExpPoly;
    s->arg = std::move(c);
    return s;
  }
};

int coeff_cmp(const Coeff& a, const Coeff& b);  // total order, defined below

inline int symbol_cmp(const Symbol& a, const Symbol& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case SymKind::Param:
      return a->name.compare(b->name) < 0 ? -1 : (a->name == b->name ? 0 : 1);
    case SymKind::EulerE:
    case SymKind::TwoPi:
      return 0;
    case SymKind::Prime:
      return a->prime_value < b->prime_value ? -1 : (a->prime_value == b->prime_value ? 0 : 1);
    case SymKind::LnSym:
      return symbol_cmp(a->inner, b->inner);
    case SymKind::LnPoly:
    case SymKind::ExpPoly:
      return coeff_cmp(*a->arg, *b->arg);
  }
  return 0;
}

inline bool symbol_eq(const Symbol& a, const Symbol& b) { return symbol_cmp(a, b) == 0; }

std::string coeff_to_string(const Coeff& c);

inline std::string symbol_to_string(const Symbol& s) {
  switch (s->kind) {
    case SymKind::Param: return s->name;
    case SymKind::EulerE: return "e";
    case SymKind::TwoPi: return "2pi";
    case SymKind::Prime: return s->prime_value.str();
    case SymKind::LnSym: return "ln(" + symbol_to_string(s->inner) + ")";
    case SymKind::LnPoly: return "ln(" + coeff_to_string(*s->arg) + ")";
    case SymKind::ExpPoly: return "exp(" + coeff_to_string(*s->arg) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Monomials over symbols, with exact rational exponents (Laurent style).

class SymMonomial {
 public:
  using Factor = std::pair<Symbol, Rational>;

  SymMonomial() = default;

  static SymMonomial unit() { return SymMonomial(); }

  static SymMonomial single(Symbol s, Rational e) {
    SymMonomial m;
    if (e != 0) m.factors_.emplace_back(std::move(s), std::move(e));
    return m;
  }

  bool is_unit() const { return factors_.empty(); }
  const std::vector<Factor>& factors() const { return factors_; }

  friend int monomial_cmp(const SymMonomial& a, const SymMonomial& b) {
    std::size_t n = std::min(a.factors_.size(), b.factors_.size());
    for (std::size_t i = 0; i < n; ++i) {
      int c = symbol_cmp(a.factors_[i].first, b.factors_[i].first);
      if (c != 0) return c;
      if (a.factors_[i].second != b.factors_[i].second)
        return a.factors_[i].second < b.factors_[i].second ? -1 : 1;
    }
    if (a.factors_.size() != b.factors_.size())
      return a.factors_.size() < b.factors_.size() ? -1 : 1;
    return 0;
  }

  friend bool operator==(const SymMonomial& a, const SymMonomial& b) {
    return monomial_cmp(a, b) == 0;
  }
  friend bool operator<(const SymMonomial& a, const SymMonomial& b) {
    return monomial_cmp(a, b) < 0;
  }

  // Product; merges exponents of equal symbols and combines any ExpPoly
  // factors into one (exp(u)^p * exp(v)^q = exp(p*u + q*v)).
  friend SymMonomial operator*(const SymMonomial& a, const SymMonomial& b);

  SymMonomial pow(const Rational& e) const;

  std::string str() const {
    if (factors_.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) out += "*";
      out += symbol_to_string(factors_[i].first);
      if (factors_[i].second != 1) out += "^" + to_string(factors_[i].second);
    }
    return out;
  }

 private:
  friend class Coeff;
  std::vector<Factor> factors_;  // sorted by symbol, exponents nonzero
};

// ---------------------------------------------------------------------------
// Laurent polynomials: sorted (monomial, rational) term lists.

class Poly {
 public:
  using Term = std::pair<SymMonomial, Rational>;

  Poly() = default;
  explicit Poly(const Rational& q) {
    if (q != 0) terms_.emplace_back(SymMonomial::unit(), q);
  }
  static Poly term(SymMonomial m, Rational q) {
    Poly p;
    if (q != 0) p.terms_.emplace_back(std::move(m), std::move(q));
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_unit());
  }
  Rational constant_value() const {
    return terms_.empty() ? Rational(0) : terms_[0].second;
  }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  const Term& leading() const { return terms_.back(); }  // largest monomial

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r;
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size()) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size()) {
        r.terms_.push_back(b.terms_[j++]);
      } else {
        int c = monomial_cmp(a.terms_[i].first, b.terms_[j].first);
        if (c < 0) {
          r.terms_.push_back(a.terms_[i++]);
        } else if (c > 0) {
          r.terms_.push_back(b.terms_[j++]);
        } else {
          Rational s = a.terms_[i].second + b.terms_[j].second;
          if (s != 0) r.terms_.emplace_back(a.terms_[i].first, std::move(s));
          ++i, ++j;
        }
      }
    }
    return r;
  }

  friend Poly operator-(const Poly& a) {
    Poly r = a;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    std::map<SymMonomial, Rational> acc;
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_) {
        SymMonomial m = ta.first * tb.first;
        auto [it, fresh] = acc.emplace(std::move(m), ta.second * tb.second);
        if (!fresh) it->second += ta.second * tb.second;
      }
    Poly r;
    for (auto& [m, q] : acc)
      if (q != 0) r.terms_.emplace_back(m, std::move(q));
    return r;
  }

  Poly scaled(const Rational& q) const {
    if (q == 0) return Poly();
    Poly r = *this;
    for (auto& t : r.terms_) t.second *= q;
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i].second != b.terms_[i].second) return false;
      if (!(a.terms_[i].first == b.terms_[i].first)) return false;
    }
    return true;
  }

  friend int poly_cmp(const Poly& a, const Poly& b) {
    std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
      int c = monomial_cmp(a.terms_[i].first, b.terms_[i].first);
      if (c != 0) return c;
      if (a.terms_[i].second != b.terms_[i].second)
        return a.terms_[i].second < b.terms_[i].second ? -1 : 1;
    }
    if (a.terms_.size() != b.terms_.size())
      return a.terms_.size() < b.terms_.size() ? -1 : 1;
    return 0;
  }

 private:
  std::vector<Term> terms_;  // sorted ascending by monomial
};

// ---------------------------------------------------------------------------
// Coeff: fraction of Laurent polynomials.  Denominator nearly always 1; it
// appears when dividing by a multi-term coefficient.

class Coeff {
 public:
  Coeff() : num_(), den_(Rational(1)) {}
  /*implicit*/ Coeff(const Rational& q) : num_(q), den_(Rational(1)) {}
  /*implicit*/ Coeff(long v) : num_(Rational(v)), den_(Rational(1)) {}
  Coeff(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

  static Coeff from_symbol(Symbol s, Rational e = Rational(1)) {
    return Coeff(Poly::term(SymMonomial::single(std::move(s), std::move(e)), Rational(1)),
                 Poly(Rational(1)));
  }
  static Coeff from_monomial(SymMonomial m, Rational q = Rational(1)) {
    return Coeff(Poly::term(std::move(m), std::move(q)), Poly(Rational(1)));
  }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
  Rational rational_value() const {
    return den_.is_zero() ? Rational(0) : num_.constant_value() / den_.constant_value();
  }
  bool is_one() const { return is_rational() && rational_value() == 1; }

  // True when the coefficient mentions no Param (directly or inside opaque
  // log/exp constants): such a value is a concrete real constant.
  bool parameter_free() const { return poly_param_free(num_) && poly_param_free(den_); }

  friend Coeff operator+(const Coeff& a, const Coeff& b) {
    if (a.den_ == b.den_) return Coeff(a.num_ + b.num_, a.den_);
    return Coeff(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Coeff operator-(const Coeff& a) { return Coeff(-a.num_, a.den_); }
  friend Coeff operator-(const Coeff& a, const Coeff& b) { return a + (-b); }
  friend Coeff operator*(const Coeff& a, const Coeff& b) {
    return Coeff(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Coeff operator/(const Coeff& a, const Coeff& b) {
    if (b.is_zero()) throw DivisionByExactZero("coefficient division by exact zero");
    return Coeff(a.num_ * b.den_, a.den_ * b.num_);
  }

  friend bool operator==(const Coeff& a, const Coeff& b) {
    if (a.den_ == b.den_) return a.num_ == b.num_;
    return a.num_ * b.den_ == b.num_ * a.den_;
  }
  friend bool operator!=(const Coeff& a, const Coeff& b) { return !(a == b); }

  std::string str() const;

 private:
  static bool monomial_param_free(const SymMonomial& m) {
    for (const auto& [s, e] : m.factors()) {
      const SymbolNode* n = s.get();
      while (n->kind == SymKind::LnSym) n = n->inner.get();
      switch (n->kind) {
        case SymKind::Param: return false;
        case SymKind::LnPoly:
        case SymKind::ExpPoly:
          if (!n->arg->parameter_free()) return false;
          break;
        default: break;
      }
    }
    return true;
  }
  static bool poly_param_free(const Poly& p) {
    for (const auto& t : p.terms())
      if (!monomial_param_free(t.first)) return false;
    return true;
  }

  void normalize() {
    if (den_.is_zero()) throw DivisionByExactZero("zero denominator in coefficient");
    if (num_.is_zero()) {
      den_ = Poly(Rational(1));
      return;
    }
    if (num_ == den_) {
      num_ = Poly(Rational(1));
      den_ = Poly(Rational(1));
      return;
    }
    // Divide through by the denominator's leading term so that plain
    // (den == constant) fractions collapse to den == 1.
    const auto& lead = den_.leading();
    if (den_.size() == 1) {
      SymMonomial inv = lead.first.pow(Rational(-1));
      Rational scale = Rational(1) / lead.second;
      num_ = Poly::term(inv, scale) * num_;
      den_ = Poly(Rational(1));
      return;
    }
    if (!lead.first.is_unit() || lead.second != 1) {
      SymMonomial inv = lead.first.pow(Rational(-1));
      Rational scale = Rational(1) / lead.second;
      Poly factor = Poly::term(inv, scale);
      num_ = factor * num_;
      den_ = factor * den_;
    }
  }

  Poly num_, den_;
};

inline int coeff_cmp(const Coeff& a, const Coeff& b) {
  int c = poly_cmp(a.num(), b.num());
  if (c != 0) return c;
  return poly_cmp(a.den(), b.den());
}

inline SymMonomial operator*(const SymMonomial& a, const SymMonomial& b) {
  SymMonomial r;
  std::size_t i = 0, j = 0;
  const auto& fa = a.factors_;
  const auto& fb = b.factors_;
  // Merge; ExpPoly factors are collected separately and recombined.
  Coeff exp_arg;
  bool has_exp = false;
  auto push = [&](const SymMonomial::Factor& f) {
    if (f.first->kind == SymKind::ExpPoly) {
      exp_arg = exp_arg + Coeff(f.second) * (*f.first->arg);
      has_exp = true;
    } else {
      r.factors_.push_back(f);
    }
  };
  while (i < fa.size() || j < fb.size()) {
    if (j == fb.size()) {
      push(fa[i++]);
    } else if (i == fa.size()) {
      push(fb[j++]);
    } else {
      int c = symbol_cmp(fa[i].first, fb[j].first);
      if (c < 0) {
        push(fa[i++]);
      } else if (c > 0) {
        push(fb[j++]);
      } else {
        Rational e = fa[i].second + fb[j].second;
        if (e != 0) push({fa[i].first, e});
        ++i, ++j;
      }
    }
  }
  if (has_exp && !exp_arg.is_zero()) {
    Symbol s = SymbolNode::exp_poly(std::make_shared<const Coeff>(std::move(exp_arg)));
    auto pos = std::lower_bound(
        r.factors_.begin(), r.factors_.end(), s,
        [](const SymMonomial::Factor& f, const Symbol& sym) { return symbol_cmp(f.first, sym) < 0; });
    r.factors_.insert(pos, {std::move(s), Rational(1)});
  }
  return r;
}

inline SymMonomial SymMonomial::pow(const Rational& e) const {
  if (e == 0) return SymMonomial();
  SymMonomial r;
  for (const auto& f : factors_) {
    if (f.first->kind == SymKind::ExpPoly) {
      Coeff scaled = Coeff(f.second * e) * (*f.first->arg);
      r.factors_.push_back(
          {SymbolNode::exp_poly(std::make_shared<const Coeff>(std::move(scaled))), Rational(1)});
    } else {
      r.factors_.push_back({f.first, f.second * e});
    }
  }
  std::sort(r.factors_.begin(), r.factors_.end(),
            [](const Factor& x, const Factor& y) { return symbol_cmp(x.first, y.first) < 0; });
  return r;
}

inline std::string Coeff::str() const {
  auto poly_str = [](const Poly& p) {
    if (p.is_zero()) return std::string("0");
    std::string out;
    bool first = true;
    // Render descending so constants come last.
    const auto& ts = p.terms();
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
      Rational q = it->second;
      if (first) {
        if (q < 0) out += "-", q = -q;
      } else {
        out += q < 0 ? " - " : " + ";
        if (q < 0) q = -q;
      }
      first = false;
      if (it->first.is_unit()) {
        out += to_string(q);
      } else {
        if (q != 1) out += to_string(q) + "*";
        out += it->first.str();
      }
    }
    return out;
  };
  if (den_.is_constant()) return poly_str(num_);
  std::string n = poly_str(num_);
  if (num_.size() > 1) n = "(" + n + ")";
  return n + "/(" + poly_str(den_) + ")";
}

inline std::string coeff_to_string(const Coeff& c) { return c.str(); }

// ---------------------------------------------------------------------------
// ln / exp of coefficients.

// Trial-division factorization; cofactors beyond the bound stay opaque.
inline std::vector<std::pair<Int, long>> factor_integer(Int n) {
  std::vector<std::pair<Int, long>> out;
  for (Int p = 2; p * p <= n && p < 65536; p += (p == 2 ? 1 : 2)) {
    long e = 0;
    while (n % p == 0) n /= p, ++e;
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

// ln of a positive rational as a linear combination of ln(prime) symbols.
inline Coeff ln_of_rational(const Rational& q) {
  if (q <= 0) throw UndefinedAtPoint("ln of a non-positive constant " + to_string(q));
  Coeff out;
  for (auto& [p, e] : factor_integer(num(q)))
    out = out + Coeff(Rational(e)) * Coeff::from_symbol(SymbolNode::ln_sym(SymbolNode::prime(p)));
  for (auto& [p, e] : factor_integer(den(q)))
    out = out - Coeff(Rational(e)) * Coeff::from_symbol(SymbolNode::ln_sym(SymbolNode::prime(p)));
  return out;
}

inline Coeff ln_of_symbol(const Symbol& s) {
  switch (s->kind) {
    case SymKind::EulerE: return Coeff(Rational(1));
    default: return Coeff::from_symbol(SymbolNode::ln_sym(s));
  }
}

// Structural ln of a coefficient.  The caller must have established that the
// value is positive.  Monomials decompose exactly; a residual multi-term part
// becomes an inert LnPoly symbol.
inline Coeff ln_of_coeff(const Coeff& c) {
  if (c.is_zero()) throw UndefinedAtPoint("ln of exact zero");
  if (c.is_rational()) return ln_of_rational(c.rational_value());
  auto ln_poly_part = [](const Poly& p) -> Coeff {
    if (p.is_constant()) return ln_of_rational(p.constant_value());
    if (p.size() == 1) {
      const auto& [m, q] = p.terms()[0];
      Coeff out = ln_of_rational(q);  // positivity of q checked by caller
      for (const auto& [s, e] : m.factors()) {
        if (s->kind == SymKind::ExpPoly)
          out = out + Coeff(e) * (*s->arg);
        else
          out = out + Coeff(e) * ln_of_symbol(s);
      }
      return out;
    }
    // Multi-term: extract a positive rational content so ln(2x+2y) and
    // ln(x+y) differ by ln 2.
    Int g = 0, l = 1;
    for (const auto& t : p.terms()) {
      g = boost::multiprecision::gcd(g, num(t.second));
      l = boost::multiprecision::lcm(l, den(t.second));
    }
    Rational content(boost::multiprecision::abs(g), l);
    Poly reduced = p.scaled(Rational(1) / content);
    Coeff out = ln_of_rational(content);
    return out + Coeff::from_symbol(SymbolNode::ln_poly(std::make_shared<const Coeff>(Coeff(reduced, Poly(Rational(1))))));
  };
  return ln_poly_part(c.num()) - ln_poly_part(c.den());
}

// Structural exp of a coefficient: extracts exp(q) = e^q for the rational
// part and exp(q*ln s) = s^q for rational multiples of log symbols; the rest
// becomes a single ExpPoly factor.
inline Coeff exp_of_coeff(const Coeff& c) {
  if (c.is_zero()) return Coeff(Rational(1));
  SymMonomial result = SymMonomial::unit();
  Rational rational_factor = 1;
  Coeff residue;
  Coeff out_extra(Rational(1));
  if (c.den().is_constant()) {
    for (const auto& [m, q] : c.num().terms()) {
      Rational coeff = q / c.den().constant_value();
      if (m.is_unit()) {
        // exp(rational) = e^rational
        result = result * SymMonomial::single(SymbolNode::euler_e(), coeff);
        continue;
      }
      if (m.factors().size() == 1 && m.factors()[0].second == 1) {
        const Symbol& s = m.factors()[0].first;
        if (s->kind == SymKind::LnSym) {
          const Symbol& base = s->inner;
          if (base->kind == SymKind::Prime && is_integer(coeff)) {
            rational_factor *= pow_rational(Rational(base->prime_value), static_cast<long>(num(coeff)));
            continue;
          }
          result = result * SymMonomial::single(base, coeff);
          continue;
        }
        if (s->kind == SymKind::LnPoly && is_integer(coeff)) {
          // exp(k * ln(P)) == P^k exactly for integer k.
          long k = static_cast<long>(num(coeff));
          Coeff base = *s->arg;
          Coeff powed(Rational(1));
          for (long i = 0; i < (k < 0 ? -k : k); ++i) powed = powed * base;
          if (k < 0) powed = Coeff(Rational(1)) / powed;
          out_extra = out_extra * powed;
          continue;
        }
      }
      residue = residue + Coeff(Poly::term(m, coeff), Poly(Rational(1)));
    }
  } else {
    residue = c;
  }
  Coeff out = Coeff::from_monomial(result, rational_factor) * out_extra;
  if (!residue.is_zero()) {
    out = out * Coeff::from_symbol(
                    SymbolNode::exp_poly(std::make_shared<const Coeff>(residue)));
  }
  return out;
}

}  // namespace gossamer

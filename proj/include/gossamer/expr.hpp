#pragma once

// Expression trees over one main variable, positive symbolic parameters and
// exact rational constants, kept in a canonical normal form:
//   - Add has >= 2 terms, none an Add, like terms collected, constant last;
//   - Mul has >= 2 factors, none a Mul or Add (products distribute), at most
//     one leading rational coefficient, no Div factors (quotients pull up);
//   - Div never has a constant denominator, never nests a Div;
//   - integer powers appear as repeated Mul factors, every other power is
//     rewritten through Exp/Ln;
//   - Ln(Exp(u)) and Exp(Ln(u)) collapse.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gossamer/errors.hpp"
#include "gossamer/rational.hpp"

namespace gossamer {

enum class ExprKind : std::uint8_t { Rational, Param, Var, Ln, Exp, Fact, Mul, Div, Add };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind;
  Rational value;               // Rational
  std::string name;             // Param
  std::vector<ExprPtr> kids;    // Ln/Exp/Fact: 1, Div: 2, Add/Mul: >= 2
  std::size_t hash = 0;
};

namespace detail {

inline std::size_t hash_mix(std::size_t a, std::size_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

inline ExprPtr make_node(ExprKind k, Rational v, std::string n, std::vector<ExprPtr> kids) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->value = std::move(v);
  e->name = std::move(n);
  e->kids = std::move(kids);
  std::size_t h = static_cast<std::size_t>(k) * 0x9e3779b97f4a7c15ULL;
  h = hash_mix(h, std::hash<std::string>{}(e->name));
  if (e->kind == ExprKind::Rational)
    h = hash_mix(h, std::hash<std::string>{}(to_string(e->value)));
  for (const auto& c : e->kids) h = hash_mix(h, c->hash);
  e->hash = h;
  return e;
}

}  // namespace detail

// Total structural order; also the canonical sort order for terms/factors.
inline int expr_cmp(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case ExprKind::Rational:
      if (a->value != b->value) return a->value < b->value ? -1 : 1;
      return 0;
    case ExprKind::Param: {
      int c = a->name.compare(b->name);
      return c < 0 ? -1 : (c == 0 ? 0 : 1);
    }
    case ExprKind::Var:
      return 0;
    default: {
      std::size_t n = std::min(a->kids.size(), b->kids.size());
      for (std::size_t i = 0; i < n; ++i) {
        int c = expr_cmp(a->kids[i], b->kids[i]);
        if (c != 0) return c;
      }
      if (a->kids.size() != b->kids.size()) return a->kids.size() < b->kids.size() ? -1 : 1;
      return 0;
    }
  }
}

inline bool expr_eq(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->hash != b->hash) return false;
  return expr_cmp(a, b) == 0;
}

// ---------------------------------------------------------------------------
// Builders (each returns a normalized node).

ExprPtr make_add(std::vector<ExprPtr> terms);
ExprPtr make_mul(std::vector<ExprPtr> factors);
ExprPtr make_div(ExprPtr num, ExprPtr den);

inline ExprPtr make_rational(Rational q) {
  return detail::make_node(ExprKind::Rational, std::move(q), "", {});
}
inline ExprPtr make_param(std::string name) {
  return detail::make_node(ExprKind::Param, Rational(0), std::move(name), {});
}
inline ExprPtr make_var() { return detail::make_node(ExprKind::Var, Rational(0), "", {}); }

inline bool is_rational_const(const ExprPtr& e) { return e->kind == ExprKind::Rational; }
inline bool is_const_value(const ExprPtr& e, long v) {
  return e->kind == ExprKind::Rational && e->value == v;
}

// (coefficient, skeleton) decomposition of an Add term; skeleton null for a
// pure constant.
inline std::pair<Rational, ExprPtr> term_parts(const ExprPtr& e) {
  if (e->kind == ExprKind::Rational) return {e->value, nullptr};
  if (e->kind == ExprKind::Mul && e->kids[0]->kind == ExprKind::Rational) {
    if (e->kids.size() == 2) return {e->kids[0]->value, e->kids[1]};
    std::vector<ExprPtr> rest(e->kids.begin() + 1, e->kids.end());
    return {e->kids[0]->value, detail::make_node(ExprKind::Mul, Rational(0), "", std::move(rest))};
  }
  if (e->kind == ExprKind::Div) {
    auto [q, sk] = term_parts(e->kids[0]);
    if (q == 1) return {Rational(1), e};
    if (sk == nullptr) sk = make_rational(Rational(1));
    return {q, make_div(sk, e->kids[1])};
  }
  return {Rational(1), e};
}

// q * e with q rational, preserving normal form.
inline ExprPtr mul_const(const Rational& q, const ExprPtr& e) {
  if (q == 0) return make_rational(Rational(0));
  if (q == 1) return e;
  switch (e->kind) {
    case ExprKind::Rational:
      return make_rational(q * e->value);
    case ExprKind::Add: {
      std::vector<ExprPtr> terms;
      terms.reserve(e->kids.size());
      for (const auto& t : e->kids) terms.push_back(mul_const(q, t));
      return make_add(std::move(terms));
    }
    case ExprKind::Mul: {
      std::vector<ExprPtr> kids = e->kids;
      if (kids[0]->kind == ExprKind::Rational) {
        Rational c = q * kids[0]->value;
        kids.erase(kids.begin());
        if (c != 1) kids.insert(kids.begin(), make_rational(c));
        if (kids.size() == 1) return kids[0];
        return detail::make_node(ExprKind::Mul, Rational(0), "", std::move(kids));
      }
      kids.insert(kids.begin(), make_rational(q));
      return detail::make_node(ExprKind::Mul, Rational(0), "", std::move(kids));
    }
    case ExprKind::Div:
      return make_div(mul_const(q, e->kids[0]), e->kids[1]);
    default: {
      std::vector<ExprPtr> kids{make_rational(q), e};
      return detail::make_node(ExprKind::Mul, Rational(0), "", std::move(kids));
    }
  }
}

inline ExprPtr make_neg(const ExprPtr& e) { return mul_const(Rational(-1), e); }

inline ExprPtr make_add(std::vector<ExprPtr> terms) {
  // Flatten, decompose, merge like terms.
  std::vector<std::pair<Rational, ExprPtr>> parts;  // skeleton != null
  Rational constant(0);
  std::function<void(const ExprPtr&)> take = [&](const ExprPtr& t) {
    if (t->kind == ExprKind::Add) {
      for (const auto& k : t->kids) take(k);
      return;
    }
    auto [q, sk] = term_parts(t);
    if (sk == nullptr || sk->kind == ExprKind::Rational) {
      constant += sk ? q * sk->value : q;
      return;
    }
    for (auto& p : parts)
      if (expr_eq(p.second, sk)) {
        p.first += q;
        return;
      }
    parts.emplace_back(q, sk);
  };
  for (const auto& t : terms) take(t);

  std::vector<ExprPtr> out;
  std::sort(parts.begin(), parts.end(),
            [](const auto& a, const auto& b) { return expr_cmp(a.second, b.second) < 0; });
  for (auto& [q, sk] : parts) {
    if (q == 0) continue;
    out.push_back(mul_const(q, sk));
  }
  if (constant != 0 || out.empty()) out.push_back(make_rational(constant));
  if (out.size() == 1) return out[0];
  return detail::make_node(ExprKind::Add, Rational(0), "", std::move(out));
}

inline ExprPtr make_mul(std::vector<ExprPtr> factors) {
  Rational coeff(1);
  std::vector<ExprPtr> nums, dens;
  std::function<void(const ExprPtr&)> take = [&](const ExprPtr& f) {
    switch (f->kind) {
      case ExprKind::Rational:
        coeff *= f->value;
        return;
      case ExprKind::Mul:
        for (const auto& k : f->kids) take(k);
        return;
      case ExprKind::Div:
        take(f->kids[0]);
        dens.push_back(f->kids[1]);
        return;
      default:
        nums.push_back(f);
        return;
    }
  };
  for (const auto& f : factors) take(f);
  if (coeff == 0) return make_rational(Rational(0));

  if (!dens.empty()) {
    ExprPtr den = dens.size() == 1 ? dens[0] : make_mul(std::move(dens));
    std::vector<ExprPtr> numf = std::move(nums);
    numf.push_back(make_rational(coeff));
    return make_div(make_mul(std::move(numf)), den);
  }

  // Distribute over any Add factor.
  for (std::size_t i = 0; i < nums.size(); ++i) {
    if (nums[i]->kind != ExprKind::Add) continue;
    std::vector<ExprPtr> others;
    for (std::size_t j = 0; j < nums.size(); ++j)
      if (j != i) others.push_back(nums[j]);
    others.push_back(make_rational(coeff));
    std::vector<ExprPtr> sum;
    for (const auto& term : nums[i]->kids) {
      std::vector<ExprPtr> prod = others;
      prod.push_back(term);
      sum.push_back(make_mul(std::move(prod)));
    }
    return make_add(std::move(sum));
  }

  std::sort(nums.begin(), nums.end(),
            [](const ExprPtr& a, const ExprPtr& b) { return expr_cmp(a, b) < 0; });
  if (nums.empty()) return make_rational(coeff);
  if (coeff != 1) nums.insert(nums.begin(), make_rational(coeff));
  if (nums.size() == 1) return nums[0];
  return detail::make_node(ExprKind::Mul, Rational(0), "", std::move(nums));
}

inline ExprPtr make_div(ExprPtr num, ExprPtr den) {
  if (den->kind == ExprKind::Rational) {
    if (den->value == 0) throw DivisionByExactZero("division by constant zero");
    return mul_const(Rational(1) / den->value, num);
  }
  if (num->kind == ExprKind::Rational && num->value == 0) return num;
  if (den->kind == ExprKind::Div)
    return make_div(make_mul({num, den->kids[1]}), den->kids[0]);
  if (num->kind == ExprKind::Div)
    return make_div(num->kids[0], make_mul({num->kids[1], den}));
  if (expr_eq(num, den)) return make_rational(Rational(1));
  // c*u / d*u cancels to the constant ratio.
  auto [qn, sn] = term_parts(num);
  auto [qd, sd] = term_parts(den);
  if (sn && sd && expr_eq(sn, sd)) return make_rational(qn / qd);
  return detail::make_node(ExprKind::Div, Rational(0), "", {std::move(num), std::move(den)});
}

inline ExprPtr make_ln(ExprPtr u) {
  if (u->kind == ExprKind::Exp) return u->kids[0];
  if (u->kind == ExprKind::Rational) {
    if (u->value <= 0)
      throw UndefinedAtPoint("ln of the non-positive constant " + to_string(u->value));
    if (u->value == 1) return make_rational(Rational(0));
  }
  return detail::make_node(ExprKind::Ln, Rational(0), "", {std::move(u)});
}

ExprPtr make_int_pow(const ExprPtr& base, long k);

inline ExprPtr make_exp(ExprPtr u) {
  if (u->kind == ExprKind::Ln) return u->kids[0];
  if (u->kind == ExprKind::Rational && u->value == 0) return make_rational(Rational(1));
  // exp(k * ln v) with integer k collapses to the explicit power.
  if (u->kind == ExprKind::Mul && u->kids.size() == 2 &&
      u->kids[0]->kind == ExprKind::Rational && is_integer(u->kids[0]->value) &&
      u->kids[1]->kind == ExprKind::Ln) {
    Int k = num(u->kids[0]->value);
    if (boost::multiprecision::abs(k) <= 512)
      return make_int_pow(u->kids[1]->kids[0], static_cast<long>(k));
  }
  return detail::make_node(ExprKind::Exp, Rational(0), "", {std::move(u)});
}

inline ExprPtr make_int_pow(const ExprPtr& base, long k) {
  if (k == 0) return make_rational(Rational(1));
  if (k == 1) return base;
  if (base->kind == ExprKind::Rational) return make_rational(pow_rational(base->value, k));
  long n = k < 0 ? -k : k;
  std::vector<ExprPtr> factors(static_cast<std::size_t>(n), base);
  ExprPtr p = make_mul(std::move(factors));
  if (k < 0) return make_div(make_rational(Rational(1)), p);
  return p;
}

// Fact argument restriction: exactly Var or Var + rational constant.
inline void check_fact_arg(const ExprPtr& arg) {
  if (arg->kind == ExprKind::Var) return;
  if (arg->kind == ExprKind::Add && arg->kids.size() == 2 &&
      arg->kids[0]->kind == ExprKind::Var && arg->kids[1]->kind == ExprKind::Rational)
    return;
  throw FactorialDomainError(
      "fact() argument must be the main variable plus an optional rational constant");
}

inline ExprPtr make_fact(ExprPtr arg) {
  check_fact_arg(arg);
  return detail::make_node(ExprKind::Fact, Rational(0), "", {std::move(arg)});
}

namespace detail {
// Parser-internal: identifiers are not yet resolved to the main variable
// while parsing, so the argument check runs after promotion.
inline ExprPtr make_fact_unchecked(ExprPtr arg) {
  return make_node(ExprKind::Fact, Rational(0), "", {std::move(arg)});
}
}  // namespace detail

inline void validate_facts(const ExprPtr& e) {
  if (e->kind == ExprKind::Fact) check_fact_arg(e->kids[0]);
  for (const auto& k : e->kids) validate_facts(k);
}

// General power; `exponent` may be any expression.  Integer exponents become
// repeated products, everything else goes through Exp/Ln.
inline ExprPtr make_pow(const ExprPtr& base, const ExprPtr& exponent) {
  if (exponent->kind == ExprKind::Rational && is_integer(exponent->value) &&
      boost::multiprecision::abs(num(exponent->value)) <= 512) {
    return make_int_pow(base, static_cast<long>(num(exponent->value)));
  }
  if (base->kind == ExprKind::Rational && base->value <= 0)
    throw UndefinedAtPoint("power of the non-positive constant base " + to_string(base->value) +
                           " with a non-integer exponent");
  return make_exp(make_mul({exponent, make_ln(base)}));
}

// ---------------------------------------------------------------------------
// Substitution and differentiation.

inline ExprPtr substitute(const ExprPtr& e, const ExprPtr& replacement) {
  switch (e->kind) {
    case ExprKind::Rational:
    case ExprKind::Param:
      return e;
    case ExprKind::Var:
      return replacement;
    case ExprKind::Ln:
      return make_ln(substitute(e->kids[0], replacement));
    case ExprKind::Exp:
      return make_exp(substitute(e->kids[0], replacement));
    case ExprKind::Fact:
      return make_fact(substitute(e->kids[0], replacement));
    case ExprKind::Mul: {
      std::vector<ExprPtr> kids;
      kids.reserve(e->kids.size());
      for (const auto& k : e->kids) kids.push_back(substitute(k, replacement));
      return make_mul(std::move(kids));
    }
    case ExprKind::Add: {
      std::vector<ExprPtr> kids;
      kids.reserve(e->kids.size());
      for (const auto& k : e->kids) kids.push_back(substitute(k, replacement));
      return make_add(std::move(kids));
    }
    case ExprKind::Div:
      return make_div(substitute(e->kids[0], replacement), substitute(e->kids[1], replacement));
  }
  throw Error("unreachable");
}

inline ExprPtr differentiate(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Rational:
    case ExprKind::Param:
      return make_rational(Rational(0));
    case ExprKind::Var:
      return make_rational(Rational(1));
    case ExprKind::Ln:
      return make_div(differentiate(e->kids[0]), e->kids[0]);
    case ExprKind::Exp:
      return make_mul({differentiate(e->kids[0]), e});
    case ExprKind::Fact:
      throw FactorialDomainError("cannot differentiate a factorial node");
    case ExprKind::Add: {
      std::vector<ExprPtr> kids;
      kids.reserve(e->kids.size());
      for (const auto& k : e->kids) kids.push_back(differentiate(k));
      return make_add(std::move(kids));
    }
    case ExprKind::Mul: {
      std::vector<ExprPtr> sum;
      for (std::size_t i = 0; i < e->kids.size(); ++i) {
        std::vector<ExprPtr> prod;
        prod.reserve(e->kids.size());
        for (std::size_t j = 0; j < e->kids.size(); ++j)
          prod.push_back(i == j ? differentiate(e->kids[j]) : e->kids[j]);
        sum.push_back(make_mul(std::move(prod)));
      }
      return make_add(std::move(sum));
    }
    case ExprKind::Div: {
      const auto& a = e->kids[0];
      const auto& b = e->kids[1];
      ExprPtr numerator =
          make_add({make_mul({differentiate(a), b}), make_neg(make_mul({a, differentiate(b)}))});
      return make_div(numerator, make_mul({b, b}));
    }
  }
  throw Error("unreachable");
}

inline bool contains_fact(const ExprPtr& e) {
  if (e->kind == ExprKind::Fact) return true;
  for (const auto& k : e->kids)
    if (contains_fact(k)) return true;
  return false;
}

inline std::size_t expr_size(const ExprPtr& e) {
  std::size_t n = 1;
  for (const auto& k : e->kids) n += expr_size(k);
  return n;
}

inline bool contains_var(const ExprPtr& e) {
  if (e->kind == ExprKind::Var) return true;
  for (const auto& k : e->kids)
    if (contains_var(k)) return true;
  return false;
}

}  // namespace gossamer

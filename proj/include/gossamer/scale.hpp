#pragma once

// Scales of infinity: most-rapidly-varying subexpression analysis, public
// basis extension, and the standard comparison-scale families.

#include <string>
#include <vector>

#include "gossamer/engine.hpp"
#include "gossamer/relate.hpp"

namespace gossamer {

// A public, expression-level view of a comparison basis.
struct ScaleBasis {
  std::vector<ExprPtr> elements;  // ascending growth
  Point point = Point::infinity();
};

namespace detail {

// Best-effort reification of a coefficient back into the expression grammar.
inline ExprPtr coeff_to_expr(const Coeff& c);

inline ExprPtr symbol_to_expr(const Symbol& s) {
  switch (s->kind) {
    case SymKind::Param: return make_param(s->name);
    case SymKind::EulerE: return make_exp(make_rational(Rational(1)));
    case SymKind::Prime: return make_rational(Rational(s->prime_value));
    case SymKind::LnSym: return make_ln(symbol_to_expr(s->inner));
    case SymKind::LnPoly: return make_ln(coeff_to_expr(*s->arg));
    case SymKind::ExpPoly: return make_exp(coeff_to_expr(*s->arg));
    case SymKind::TwoPi:
      throw Error("the constant 2*pi has no expression form");
  }
  throw Error("unreachable");
}

inline ExprPtr mono_expr_of(const SymMonomial& m) {
  std::vector<ExprPtr> factors;
  for (const auto& [s, e] : m.factors())
    factors.push_back(make_pow(symbol_to_expr(s), make_rational(e)));
  if (factors.empty()) return make_rational(Rational(1));
  if (factors.size() == 1) return factors[0];
  return make_mul(std::move(factors));
}

inline ExprPtr poly_to_expr(const Poly& p) {
  std::vector<ExprPtr> terms;
  for (const auto& [m, q] : p.terms()) terms.push_back(mul_const(q, mono_expr_of(m)));
  if (terms.empty()) return make_rational(Rational(0));
  if (terms.size() == 1) return terms[0];
  return make_add(std::move(terms));
}

inline ExprPtr coeff_to_expr(const Coeff& c) {
  if (c.is_rational()) return make_rational(c.rational_value());
  ExprPtr n = poly_to_expr(c.num());
  if (c.den().is_constant() && c.den().constant_value() == 1) return n;
  return make_div(n, poly_to_expr(c.den()));
}

inline ExprPtr gnum_to_expr(const Engine& eng, const GNum& g);

inline ExprPtr element_to_expr(const Engine& eng, const BasisElementPtr& el) {
  switch (el->kind) {
    case BasisElement::Kind::VarItself:
      return make_var();
    case BasisElement::Kind::IterLog: {
      ExprPtr e = make_var();
      for (int i = 0; i < el->log_depth; ++i) e = make_ln(e);
      return e;
    }
    case BasisElement::Kind::IterExp:
      return make_exp(gnum_to_expr(eng, *el->tower));
  }
  throw Error("unreachable");
}

inline ExprPtr gnum_to_expr(const Engine& eng, const GNum& g) {
  std::vector<ExprPtr> terms;
  auto elems = eng.basis().ascending;
  auto lookup = [&](int id) -> BasisElementPtr {
    for (const auto& e : elems)
      if (e->id == id) return e;
    throw Error("unknown basis element");
  };
  for (const auto& t : g.terms) {
    std::vector<ExprPtr> factors{coeff_to_expr(t.coeff)};
    for (const auto& [id, exp_] : t.mono.powers)
      factors.push_back(make_pow(element_to_expr(eng, lookup(id)), coeff_to_expr(exp_)));
    terms.push_back(make_mul(std::move(factors)));
  }
  if (terms.empty()) return make_rational(Rational(0));
  if (terms.size() == 1) return terms[0];
  return make_add(std::move(terms));
}

}  // namespace detail

inline ScaleBasis basis_to_scale(const Engine& eng) {
  ScaleBasis out;
  out.point = eng.point();
  for (const auto& el : eng.basis().ascending)
    out.elements.push_back(detail::element_to_expr(eng, el));
  return out;
}

// The set of maximal-growth subexpressions (the variable itself, exponential
// subterms with divergent towers, factorial subterms) that control e's
// variation at infinity.
inline std::vector<ExprPtr> mrv(const ExprPtr& e, const Point& p, const Assumptions& a,
                                ExpandOptions opts = {}, const std::string& var_name = "x") {
  if (!p.is_infinity())
    throw UndefinedAtPoint("mrv analysis runs at infinity; shift the point first");

  std::vector<ExprPtr> candidates;
  auto add_candidate = [&](const ExprPtr& c) {
    for (const auto& k : candidates)
      if (expr_eq(k, c)) return;
    candidates.push_back(c);
  };
  std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& node) {
    if (!contains_var(node)) return;
    switch (node->kind) {
      case ExprKind::Var:
        add_candidate(node);
        break;
      case ExprKind::Exp: {
        // Only exponentials of divergent towers define new growth classes.
        Engine probe(a, p, opts);
        probe.set_var_name(var_name);
        bool divergent = probe.with_retry([&] {
          GNum u = probe.expand_shifted(node->kids[0]);
          Form f = probe.classify(u);
          return f == Form::Inf || f == Form::RealInf || f == Form::PhiInf ||
                 f == Form::PhiRealInf;
        });
        if (divergent) add_candidate(node);
        walk(node->kids[0]);
        break;
      }
      case ExprKind::Fact:
        add_candidate(node);
        walk(node->kids[0]);
        break;
      default:
        for (const auto& k : node->kids) walk(k);
    }
  };
  walk(e);
  if (candidates.empty()) return {};

  // The log-measure of a candidate decides its class: ln x for the variable,
  // the tower for exponentials, a ln a for factorials.
  auto log_measure = [&](const ExprPtr& c) -> ExprPtr {
    switch (c->kind) {
      case ExprKind::Var: return make_ln(c);
      case ExprKind::Exp: return c->kids[0];
      case ExprKind::Fact: return make_mul({c->kids[0], make_ln(c->kids[0])});
      default: throw Error("unreachable");
    }
  };

  Engine eng(a, p, opts);
  eng.set_var_name(var_name);
  return eng.with_retry([&] {
    std::vector<GMonomial> leads;
    for (const auto& c : candidates) {
      GNum m = eng.expand_shifted(eng.shift_expr(log_measure(c)));
      if (m.terms.empty()) throw detail::NeedMoreTerms{};
      leads.push_back(m.terms.front().mono);
    }
    std::vector<ExprPtr> maximal{candidates[0]};
    GMonomial best = leads[0];
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      int c = eng.growth_cmp(leads[i], best);
      if (c > 0) {
        maximal.assign(1, candidates[i]);
        best = leads[i];
      } else if (c == 0) {
        maximal.push_back(candidates[i]);
      }
    }
    return maximal;
  });
}

// Returns a basis extended with the comparison classes needed to expand e.
inline ScaleBasis extend_basis(const ScaleBasis& b, const ExprPtr& e, const Assumptions& a,
                               ExpandOptions opts = {}, const std::string& var_name = "x") {
  Engine eng(a, b.point, opts);
  eng.set_var_name(var_name);
  eng.with_retry([&] {
    for (const auto& el : b.elements) eng.expand_shifted(eng.shift_expr(el));
    eng.expand_shifted(eng.shift_expr(e));
    return 0;
  });
  return basis_to_scale(eng);
}

// ---------------------------------------------------------------------------
// Standard scale families, with engine-computed adjacent relations.

enum class ScaleFamily : std::uint8_t { Powers, ExponentialTowers, Logs, Mixed };

struct ScaleChain {
  std::vector<ExprPtr> members;
  std::vector<Relation> relations;  // members[i] relations[i] members[i+1]
};

inline ScaleChain standard_scale(ScaleFamily family, int depth, const Point& p,
                                 const Assumptions& a = {}, const std::string& var_name = "x") {
  if (depth < 1) throw Error("scale depth must be at least 1");
  ScaleChain out;
  switch (family) {
    case ScaleFamily::Powers:
      for (int k = 1; k <= depth; ++k) out.members.push_back(make_int_pow(make_var(), k));
      break;
    case ScaleFamily::ExponentialTowers: {
      ExprPtr t = make_var();
      for (int k = 1; k <= depth; ++k) {
        t = make_exp(t);
        out.members.push_back(t);
      }
      if (!p.is_infinity())
        throw UndefinedAtPoint("exponential towers form a scale at infinity");
      break;
    }
    case ScaleFamily::Logs: {
      ExprPtr t = make_var();
      out.members.push_back(t);
      for (int k = 1; k < depth; ++k) {
        t = make_ln(t);
        out.members.push_back(t);
      }
      if (!p.is_infinity())
        throw UndefinedAtPoint("iterated logarithms form a scale at infinity");
      break;
    }
    case ScaleFamily::Mixed: {
      if (!p.is_infinity())
        throw UndefinedAtPoint("the mixed scale is stated at infinity");
      std::vector<ExprPtr> family_members{
          make_rational(Rational(1)),
          make_ln(make_var()),
          make_var(),
          make_exp(make_var()),
          make_fact(make_var()),
          make_exp(make_mul({make_var(), make_ln(make_var())})),  // x^x
      };
      for (int k = 0; k < depth && k < static_cast<int>(family_members.size()); ++k)
        out.members.push_back(family_members[static_cast<std::size_t>(k)]);
      break;
    }
  }
  for (std::size_t i = 0; i + 1 < out.members.size(); ++i) {
    RelationResult r =
        compare(out.members[i], out.members[i + 1], p, a, {ExpandOptions{}, false}, var_name);
    switch (r.magnitude) {
      case Magnitude::MuchLess: out.relations.push_back(Relation::MuchLess); break;
      case Magnitude::MuchGreater: out.relations.push_back(Relation::MuchGreater); break;
      case Magnitude::Propto: out.relations.push_back(Relation::Propto); break;
    }
  }
  return out;
}

}  // namespace gossamer

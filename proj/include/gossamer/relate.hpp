#pragma once

// Solving for the relation between two expressions at a point, and the
// relation-operator transformation table for positive divergent comparands.

#include <optional>
#include <string>
#include <vector>

#include "gossamer/engine.hpp"
#include "gossamer/parser.hpp"

namespace gossamer {

enum class Relation : std::uint8_t {
  MuchLess,     // prec
  PrecEq,       // preceq
  Propto,       // propto / asymp
  Sim,          // sim
  SimEq,        // simeq (infinitesimally close)
  SuccEq,       // succeq
  MuchGreater,  // succ
  Less,
  LessEq,
  Equal,
  GreaterEq,
  Greater,
  LogMuchLess,     // logll
  LogMuchGreater,  // loggg
};

inline Relation reverse_relation(Relation r) {
  switch (r) {
    case Relation::MuchLess: return Relation::MuchGreater;
    case Relation::MuchGreater: return Relation::MuchLess;
    case Relation::PrecEq: return Relation::SuccEq;
    case Relation::SuccEq: return Relation::PrecEq;
    case Relation::Less: return Relation::Greater;
    case Relation::Greater: return Relation::Less;
    case Relation::LessEq: return Relation::GreaterEq;
    case Relation::GreaterEq: return Relation::LessEq;
    case Relation::LogMuchLess: return Relation::LogMuchGreater;
    case Relation::LogMuchGreater: return Relation::LogMuchLess;
    default: return r;  // propto, sim, simeq, equal are symmetric
  }
}

inline std::string relation_token(Relation r, bool unicode = false) {
  switch (r) {
    case Relation::MuchLess: return unicode ? "≺" : "prec";
    case Relation::PrecEq: return unicode ? "⪯" : "preceq";
    case Relation::Propto: return unicode ? "∝" : "propto";
    case Relation::Sim: return unicode ? "∼" : "sim";
    case Relation::SimEq: return unicode ? "≃" : "simeq";
    case Relation::SuccEq: return unicode ? "⪰" : "succeq";
    case Relation::MuchGreater: return unicode ? "≻" : "succ";
    case Relation::Less: return unicode ? "<" : "lt";
    case Relation::LessEq: return unicode ? "≤" : "le";
    case Relation::Equal: return unicode ? "==" : "eq";
    case Relation::GreaterEq: return unicode ? "≥" : "ge";
    case Relation::Greater: return unicode ? ">" : "gt";
    case Relation::LogMuchLess: return unicode ? "≺≺" : "logll";
    case Relation::LogMuchGreater: return unicode ? "≻≻" : "loggg";
  }
  return "?";
}

inline std::optional<Relation> relation_from_token(const std::string& t) {
  if (t == "prec") return Relation::MuchLess;
  if (t == "preceq") return Relation::PrecEq;
  if (t == "propto" || t == "asymp") return Relation::Propto;
  if (t == "sim") return Relation::Sim;
  if (t == "simeq") return Relation::SimEq;
  if (t == "succeq") return Relation::SuccEq;
  if (t == "succ") return Relation::MuchGreater;
  if (t == "lt" || t == "<") return Relation::Less;
  if (t == "le" || t == "<=") return Relation::LessEq;
  if (t == "eq" || t == "==" || t == "=") return Relation::Equal;
  if (t == "ge" || t == ">=") return Relation::GreaterEq;
  if (t == "gt" || t == ">") return Relation::Greater;
  if (t == "loggg") return Relation::LogMuchGreater;
  if (t == "logll") return Relation::LogMuchLess;
  return std::nullopt;
}

enum class Magnitude : std::uint8_t { MuchLess, Propto, MuchGreater };
enum class Order : std::uint8_t { Less, Greater, Equal, Unknown };

struct RelationResult {
  Magnitude magnitude;
  bool asymptotic = false;  // ratio -> 1, i.e. f ~ g
  bool close = false;       // f - g infinitesimal or zero, i.e. f ~= g
  Order order = Order::Unknown;
  std::string landau;

  Relation strongest() const {
    if (asymptotic) return Relation::Sim;
    switch (magnitude) {
      case Magnitude::MuchLess: return Relation::MuchLess;
      case Magnitude::MuchGreater: return Relation::MuchGreater;
      case Magnitude::Propto: return Relation::Propto;
    }
    return Relation::Propto;
  }
};

struct CompareOptions {
  ExpandOptions expand;
  bool want_order = true;  // the f-g expansion can be skipped by callers
};

namespace detail {

inline Magnitude magnitude_of(Engine& eng, const GNum& ratio) {
  Form f = eng.classify(ratio);
  switch (f) {
    case Form::Phi: return Magnitude::MuchLess;
    case Form::ExactZero:
      throw DivisionByExactZero("comparand ratio is exactly zero");
    case Form::Inf:
    case Form::RealInf:
    case Form::PhiInf:
    case Form::PhiRealInf: return Magnitude::MuchGreater;
    default: return Magnitude::Propto;
  }
}

inline std::string landau_gloss(const std::string& fs, const std::string& gs,
                                const RelationResult& r) {
  switch (r.strongest()) {
    case Relation::Sim: return fs + " ~ " + gs;
    case Relation::MuchLess: return fs + " = o(" + gs + ")";
    case Relation::MuchGreater: return fs + " = omega(" + gs + ")";
    default: return fs + " = Theta(" + gs + ")";
  }
}

}  // namespace detail

// Solve for the relation between f and g at p.  The ratio f/g determines the
// magnitude, with an ln f - ln g fallback when the ratio overflows the basis
// depth; the difference f - g supplies the order and closeness refinements.
inline RelationResult compare(const ExprPtr& f, const ExprPtr& g, const Point& p,
                              const Assumptions& a, CompareOptions opts = {},
                              const std::string& var_name = "x") {
  Engine eng(a, p, opts.expand);
  eng.set_var_name(var_name);
  ExprPtr ratio_expr = make_div(f, g);
  ExprPtr diff_expr = make_add({f, make_neg(g)});
  ExprPtr shifted_ratio = eng.shift_expr(ratio_expr);
  ExprPtr shifted_diff = eng.shift_expr(diff_expr);
  ExprPtr shifted_f = eng.shift_expr(f);
  ExprPtr shifted_g = eng.shift_expr(g);

  return eng.with_retry([&] {
    RelationResult out;
    bool ratio_done = false;
    try {
      GNum ratio = eng.expand_shifted(shifted_ratio);
      out.magnitude = detail::magnitude_of(eng, ratio);
      if (out.magnitude == Magnitude::Propto) {
        Components c = eng.components(ratio);
        out.asymptotic = c.inf.terms.empty() && !c.inf.tail.exhausted && c.real.is_one();
      }
      ratio_done = true;
    } catch (const DepthLimit&) {
      // fall through to the logarithmic route
    }
    if (!ratio_done) {
      GNum ln_diff = eng.add(eng.expand_ln(eng.expand_shifted(shifted_f)),
                             eng.neg(eng.expand_ln(eng.expand_shifted(shifted_g))));
      ExtendedReal lim = eng.st(ln_diff);
      if (lim.is_finite()) {
        out.magnitude = Magnitude::Propto;
        Form lf = eng.classify(ln_diff);
        out.asymptotic = lf == Form::ExactZero || lf == Form::Phi;
      } else {
        out.magnitude = lim.kind == ExtendedReal::Kind::PlusInfinity ? Magnitude::MuchGreater
                                                                     : Magnitude::MuchLess;
      }
    }
    if (opts.want_order) {
      try {
        GNum diff = eng.expand_shifted(shifted_diff);
        Form df = eng.classify(diff);
        out.close = df == Form::ExactZero || df == Form::Phi;
        Sign s = eng.sign_leading(diff);
        out.order = s == Sign::Positive  ? Order::Greater
                    : s == Sign::Negative ? Order::Less
                    : s == Sign::Zero     ? Order::Equal
                                          : Order::Unknown;
      } catch (const AssumptionNeeded&) {
        out.order = Order::Unknown;
      }
    }
    out.landau = detail::landau_gloss(print_expression(f, var_name),
                                      print_expression(g, var_name), out);
    return out;
  });
}

// f log-dominates g: ln f has strictly larger growth than ln g.
inline bool logdom(const ExprPtr& f, const ExprPtr& g, const Point& p, const Assumptions& a,
                   ExpandOptions opts = {}, const std::string& var_name = "x") {
  Engine eng(a, p, opts);
  eng.set_var_name(var_name);
  ExprPtr sf = eng.shift_expr(f);
  ExprPtr sg = eng.shift_expr(g);
  return eng.with_retry([&] {
    return eng.log_dominates(eng.expand_shifted(sf), eng.expand_shifted(sg));
  });
}

// ---------------------------------------------------------------------------
// Relation operators.

struct RelOp {
  enum class Kind : std::uint8_t {
    ApplyExp,
    ApplyLn,
    Differentiate,
    Integrate,
    ScalarMul,
    AddBoth,
    MulBoth,  // multiply both sides by a nonzero expression
    Reciprocal,
    Negate,
  } kind;
  Rational scalar;  // ScalarMul
  ExprPtr operand;  // AddBoth / MulBoth

  static RelOp exp() { return {Kind::ApplyExp, Rational(0), nullptr}; }
  static RelOp ln() { return {Kind::ApplyLn, Rational(0), nullptr}; }
  static RelOp diff() { return {Kind::Differentiate, Rational(0), nullptr}; }
  static RelOp integrate() { return {Kind::Integrate, Rational(0), nullptr}; }
  static RelOp scalar_mul(Rational q) { return {Kind::ScalarMul, std::move(q), nullptr}; }
  static RelOp add_both(ExprPtr e) { return {Kind::AddBoth, Rational(0), std::move(e)}; }
  static RelOp mul_both(ExprPtr e) { return {Kind::MulBoth, Rational(0), std::move(e)}; }
  static RelOp reciprocal() { return {Kind::Reciprocal, Rational(0), nullptr}; }
  static RelOp negate() { return {Kind::Negate, Rational(0), nullptr}; }
};

struct RelOpContext {
  ExprPtr f, g;
  Point point;
  const Assumptions* assume;
  ExpandOptions expand;
  std::string var_name = "x";
};

namespace detail {

inline bool is_order_relation(Relation r) {
  return r == Relation::Less || r == Relation::LessEq || r == Relation::Equal ||
         r == Relation::GreaterEq || r == Relation::Greater;
}

struct SideInfo {
  Sign sign;
  bool divergent;
  bool infinitesimal;
};

inline SideInfo side_info(Engine& eng, const ExprPtr& e) {
  GNum g = eng.expand(e);
  SideInfo out{};
  out.sign = eng.sign_leading(g);
  Form f = eng.classify(g);
  out.divergent = f == Form::Inf || f == Form::RealInf || f == Form::PhiInf ||
                  f == Form::PhiRealInf;
  out.infinitesimal = f == Form::Phi || f == Form::ExactZero;
  return out;
}

inline void require_positive_divergent(const RelOpContext& ctx, const char* row) {
  Engine eng(*ctx.assume, ctx.point, ctx.expand);
  eng.set_var_name(ctx.var_name);
  for (const ExprPtr& side : {ctx.f, ctx.g}) {
    SideInfo info = side_info(eng, side);
    if (info.sign != Sign::Positive || !info.divergent)
      throw ConditionViolated(std::string("table row '") + row +
                                  "' requires positive divergent sides",
                              print_expression(side, ctx.var_name));
  }
}

// Is f - g bounded (no infinite part)?
inline bool difference_bounded(const RelOpContext& ctx) {
  Engine eng(*ctx.assume, ctx.point, ctx.expand);
  eng.set_var_name(ctx.var_name);
  GNum d = eng.expand(make_add({ctx.f, make_neg(ctx.g)}));
  Form form = eng.classify(d);
  return form == Form::ExactZero || form == Form::Phi || form == Form::Real ||
         form == Form::PhiReal;
}

inline bool both_infinitesimal(const RelOpContext& ctx) {
  Engine eng(*ctx.assume, ctx.point, ctx.expand);
  eng.set_var_name(ctx.var_name);
  return side_info(eng, ctx.f).infinitesimal && side_info(eng, ctx.g).infinitesimal;
}

}  // namespace detail

// Applies a relation operator per the transformation table for positive
// divergent functions, checking each row's side condition with the engine.
inline Relation apply_rel_op(Relation rel, const RelOp& op, const RelOpContext& ctx) {
  using K = RelOp::Kind;
  auto unsupported = [&]() -> Relation {
    throw UnsupportedRow("no table row for relation '" + relation_token(rel) +
                         "' under this operator");
  };
  switch (op.kind) {
    case K::ApplyExp: {
      switch (rel) {
        case Relation::Equal:
          return Relation::Equal;
        case Relation::Less:
        case Relation::LessEq:
        case Relation::Greater:
        case Relation::GreaterEq: {
          // Order relations among infinitesimals are preserved untouched.
          if (detail::both_infinitesimal(ctx)) return rel;
          if (detail::difference_bounded(ctx)) return rel;
          // Unbounded difference magnifies the order relation.
          if (rel == Relation::Less || rel == Relation::LessEq) return Relation::MuchLess;
          return Relation::MuchGreater;
        }
        case Relation::MuchLess:
        case Relation::MuchGreater:
          detail::require_positive_divergent(ctx, "e^prec = prec");
          return rel;
        default:
          return unsupported();
      }
    }
    case K::ApplyLn: {
      detail::require_positive_divergent(ctx, "ln");
      switch (rel) {
        case Relation::Equal:
          return Relation::Equal;
        case Relation::Less:
        case Relation::LessEq:
        case Relation::Greater:
        case Relation::GreaterEq:
          return rel;  // ln< = <
        case Relation::MuchLess:
          // ln prec = < in general; prec when f is log-dominated by g.
          if (logdom(ctx.g, ctx.f, ctx.point, *ctx.assume, ctx.expand, ctx.var_name))
            return Relation::MuchLess;
          return Relation::Less;
        case Relation::MuchGreater:
          if (logdom(ctx.f, ctx.g, ctx.point, *ctx.assume, ctx.expand, ctx.var_name))
            return Relation::MuchGreater;
          return Relation::Greater;
        default:
          return unsupported();
      }
    }
    case K::Differentiate: {
      switch (rel) {
        case Relation::MuchLess:
        case Relation::MuchGreater:
          return rel;
        case Relation::Less:
        case Relation::LessEq:
        case Relation::Greater:
        case Relation::GreaterEq: {
          Engine eng(*ctx.assume, ctx.point, ctx.expand);
          eng.set_var_name(ctx.var_name);
          GNum d = eng.expand(
              make_add({differentiate(ctx.f), make_neg(differentiate(ctx.g))}));
          Form form = eng.classify(d);
          if (form == Form::Real || form == Form::ExactZero)
            throw ConditionViolated("D< = < requires Df - Dg not constant",
                                    "difference of derivatives is constant");
          return rel;
        }
        default:
          return unsupported();
      }
    }
    case K::Integrate: {
      switch (rel) {
        case Relation::MuchLess:
        case Relation::MuchGreater:
        case Relation::Less:
        case Relation::LessEq:
        case Relation::Greater:
        case Relation::GreaterEq:
          return rel;  // ignore integration constants
        default:
          return unsupported();
      }
    }
    case K::ScalarMul: {
      if (op.scalar == 0) throw ConditionViolated("scalar multiplication", "scalar is zero");
      if (op.scalar > 0) return rel;
      if (detail::is_order_relation(rel)) return reverse_relation(rel);
      return rel;  // magnitude relations are sign-blind
    }
    case K::Negate: {
      if (detail::is_order_relation(rel)) return reverse_relation(rel);
      return rel;
    }
    case K::AddBoth: {
      if (rel == Relation::SimEq) return rel;  // difference unchanged
      if (detail::is_order_relation(rel)) return rel;
      if (rel == Relation::MuchLess || rel == Relation::MuchGreater ||
          rel == Relation::PrecEq || rel == Relation::SuccEq || rel == Relation::Sim) {
        for (const ExprPtr& side : {ctx.f, ctx.g}) {
          RelationResult r = compare(op.operand, side, ctx.point, *ctx.assume,
                                     {ctx.expand, false}, ctx.var_name);
          if (r.magnitude != Magnitude::MuchLess)
            throw ConditionViolated("a + lambda succ b + lambda requires lambda prec both sides",
                                    print_expression(op.operand, ctx.var_name));
        }
        return rel;
      }
      return unsupported();
    }
    case K::MulBoth: {
      Engine eng(*ctx.assume, ctx.point, ctx.expand);
      eng.set_var_name(ctx.var_name);
      Sign s = eng.sign_leading(eng.expand(op.operand));
      if (s == Sign::Zero)
        throw ConditionViolated("cb succ ca requires c != 0",
                                print_expression(op.operand, ctx.var_name));
      if (rel == Relation::MuchLess || rel == Relation::MuchGreater ||
          rel == Relation::PrecEq || rel == Relation::SuccEq || rel == Relation::Propto ||
          rel == Relation::Sim)
        return rel;  // magnitude relations survive any nonzero factor
      if (detail::is_order_relation(rel)) {
        if (s == Sign::Positive) return rel;
        if (s == Sign::Negative) return reverse_relation(rel);
        throw AssumptionNeeded("order under multiplication needs the factor's sign",
                               print_expression(op.operand, ctx.var_name));
      }
      return unsupported();
    }
    case K::Reciprocal: {
      switch (rel) {
        case Relation::MuchLess: return Relation::MuchGreater;
        case Relation::MuchGreater: return Relation::MuchLess;
        case Relation::PrecEq: return Relation::SuccEq;
        case Relation::SuccEq: return Relation::PrecEq;
        case Relation::Propto:
        case Relation::Sim:
        case Relation::Equal:
          return rel;
        case Relation::LogMuchLess:
        case Relation::LogMuchGreater:
          return rel;  // |ln| is unchanged by reciprocal
        case Relation::Less:
        case Relation::LessEq:
        case Relation::Greater:
        case Relation::GreaterEq: {
          Engine eng(*ctx.assume, ctx.point, ctx.expand);
          eng.set_var_name(ctx.var_name);
          if (detail::side_info(eng, ctx.f).sign != Sign::Positive ||
              detail::side_info(eng, ctx.g).sign != Sign::Positive)
            throw ConditionViolated("1/f > 1/g from f < g requires positive sides",
                                    "sides not known positive");
          return reverse_relation(rel);
        }
        default:
          return unsupported();
      }
    }
  }
  return unsupported();
}

// Transform both sides of a relation by the operator (expression part).
inline std::pair<ExprPtr, ExprPtr> apply_op_to_sides(const RelOp& op, const ExprPtr& f,
                                                     const ExprPtr& g) {
  using K = RelOp::Kind;
  switch (op.kind) {
    case K::ApplyExp: return {make_exp(f), make_exp(g)};
    case K::ApplyLn: return {make_ln(f), make_ln(g)};
    case K::Differentiate: return {differentiate(f), differentiate(g)};
    case K::Integrate:
      throw UnsupportedRow("integration transforms relations, not expressions");
    case K::ScalarMul:
      return {mul_const(op.scalar, f), mul_const(op.scalar, g)};
    case K::AddBoth: return {make_add({f, op.operand}), make_add({g, op.operand})};
    case K::MulBoth: return {make_mul({f, op.operand}), make_mul({g, op.operand})};
    case K::Reciprocal:
      return {make_div(make_rational(Rational(1)), f),
              make_div(make_rational(Rational(1)), g)};
    case K::Negate: return {make_neg(f), make_neg(g)};
  }
  throw Error("unreachable");
}

// Does the engine's verdict at (f, g) entail the stated relation?
inline bool verdict_entails(const RelationResult& r, Relation stated) {
  switch (stated) {
    case Relation::MuchLess: return r.magnitude == Magnitude::MuchLess;
    case Relation::MuchGreater: return r.magnitude == Magnitude::MuchGreater;
    case Relation::PrecEq:
      return r.magnitude == Magnitude::MuchLess || r.magnitude == Magnitude::Propto;
    case Relation::SuccEq:
      return r.magnitude == Magnitude::MuchGreater || r.magnitude == Magnitude::Propto;
    case Relation::Propto: return r.magnitude == Magnitude::Propto;
    case Relation::Sim: return r.asymptotic;
    case Relation::SimEq: return r.close;
    case Relation::Less: return r.order == Order::Less;
    case Relation::Greater: return r.order == Order::Greater;
    case Relation::Equal: return r.order == Order::Equal;
    case Relation::LessEq: return r.order == Order::Less || r.order == Order::Equal;
    case Relation::GreaterEq: return r.order == Order::Greater || r.order == Order::Equal;
    default: return false;  // log relations are checked separately
  }
}

// ---------------------------------------------------------------------------
// Tail monotonicity by comparing successive terms.

enum class Monotonicity : std::uint8_t { Increasing, Decreasing, Constant };

inline Monotonicity is_monotone_tail(const ExprPtr& term, const Assumptions& a,
                                     ExpandOptions opts = {},
                                     const std::string& var_name = "n") {
  ExprPtr shifted = substitute(term, make_add({make_var(), make_rational(Rational(1))}));
  ExprPtr diff = make_add({shifted, make_neg(term)});
  Engine eng(a, Point::infinity(), opts);
  eng.set_var_name(var_name);
  Sign s = eng.with_retry([&] {
    GNum d = eng.expand_shifted(diff);
    if (d.is_exact_zero()) return Sign::Zero;
    if (d.terms.empty()) throw detail::NeedMoreTerms{};
    return eng.sign_leading(d);
  });
  switch (s) {
    case Sign::Positive: return Monotonicity::Increasing;
    case Sign::Negative: return Monotonicity::Decreasing;
    case Sign::Zero: return Monotonicity::Constant;
    default:
      throw AssumptionNeeded("monotonicity needs the sign of the successive difference",
                             print_expression(diff, var_name));
  }
}

}  // namespace gossamer

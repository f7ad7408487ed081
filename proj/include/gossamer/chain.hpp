#pragma once

// Derivation-chain verification.  A chain is a sequence of asserted
// relations; each step is justified either by solving directly, by applying
// a relation operator to the previous step's sides, or by non-reversible
// absorption.  Verification re-derives everything with the engine.

#include <sstream>
#include <string>
#include <vector>

#include "gossamer/limit.hpp"
#include "gossamer/relate.hpp"

namespace gossamer {

struct ChainStep {
  ExprPtr lhs;
  Relation rel;
  ExprPtr rhs;
  Point point;
  std::string var_name;
  enum class Just : std::uint8_t { Solve, Op, Absorb } just;
  RelOp op{RelOp::Kind::ApplyExp, Rational(0), nullptr};  // when just == Op
  std::string source;                                     // original line
};

struct Chain {
  std::vector<ChainStep> steps;
  Assumptions assumptions;
};

struct StepReport {
  std::size_t index;
  bool ok;
  std::string message;
};

struct ChainReport {
  std::vector<StepReport> steps;
  bool all_ok = true;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline RelOp parse_chain_op(const std::string& text, const Assumptions& a) {
  std::string t = trim(text);
  if (t == "exp") return RelOp::exp();
  if (t == "ln") return RelOp::ln();
  if (t == "D") return RelOp::diff();
  if (t == "int") return RelOp::integrate();
  if (t == "recip") return RelOp::reciprocal();
  if (t == "neg") return RelOp::negate();
  auto call = [&](const std::string& name) -> std::optional<std::string> {
    if (t.rfind(name + "(", 0) == 0 && t.back() == ')')
      return t.substr(name.size() + 1, t.size() - name.size() - 2);
    return std::nullopt;
  };
  if (auto arg = call("mul")) {
    ParseResult pr = parse_expression(*arg, a);
    if (is_rational_const(pr.expr)) return RelOp::scalar_mul(pr.expr->value);
    return RelOp::mul_both(pr.expr);
  }
  if (auto arg = call("add")) {
    ParseResult pr = parse_expression(*arg, a);
    return RelOp::add_both(pr.expr);
  }
  throw ParseError("unknown chain operator '" + t + "'", 0,
                   {"exp", "ln", "D", "int", "mul(..)", "add(..)", "recip", "neg"});
}

}  // namespace detail

// Chain file: one step per line,
//   <expr> ; <REL> ; <expr> ; at <var>=<point> ; by <op|solve|absorb>
// Blank lines and lines starting with '#' are ignored.
inline Chain parse_chain(const std::string& text, Assumptions assumptions) {
  Chain chain;
  chain.assumptions = std::move(assumptions);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto parts = detail::split(t, ';');
    if (parts.size() != 5)
      throw ParseError("chain step needs 5 ';'-separated fields", 0,
                       {"<expr> ; <REL> ; <expr> ; at var=point ; by <just>"});
    ChainStep step;
    step.source = t;
    std::string at = detail::trim(parts[3]);
    if (at.rfind("at ", 0) != 0) throw ParseError("expected 'at var=point'", 0, {"at"});
    std::string spec = detail::trim(at.substr(3));
    auto eq = spec.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'var=point'", 0, {"="});
    step.var_name = detail::trim(spec.substr(0, eq));
    step.point = parse_point_value(detail::trim(spec.substr(eq + 1)));

    ParseResult lhs = parse_expression(detail::trim(parts[0]), chain.assumptions);
    ParseResult rhs = parse_expression(detail::trim(parts[2]), chain.assumptions);
    for (const ParseResult* pr : {&lhs, &rhs})
      if (!pr->main_var.empty() && pr->main_var != step.var_name)
        throw ParseError("undeclared identifier '" + pr->main_var + "' is not the point variable '" +
                             step.var_name + "'",
                         0);
    step.lhs = lhs.expr;
    step.rhs = rhs.expr;

    auto rel = relation_from_token(detail::trim(parts[1]));
    if (!rel) throw ParseError("unknown relation token '" + detail::trim(parts[1]) + "'", 0);
    step.rel = *rel;

    std::string by = detail::trim(parts[4]);
    if (by.rfind("by ", 0) != 0) throw ParseError("expected 'by <justification>'", 0, {"by"});
    std::string just = detail::trim(by.substr(3));
    if (just == "solve") {
      step.just = ChainStep::Just::Solve;
    } else if (just == "absorb") {
      step.just = ChainStep::Just::Absorb;
    } else {
      step.just = ChainStep::Just::Op;
      step.op = detail::parse_chain_op(just, chain.assumptions);
    }
    chain.steps.push_back(std::move(step));
  }
  return chain;
}

namespace detail {

// Sound weakenings of an engine-derived relation, with positivity checks
// where the table requires them.
inline bool weakening_allowed(Relation derived, Relation stated, const RelOpContext& ctx) {
  if (derived == stated) return true;
  auto positive_sides = [&]() {
    try {
      Engine eng(*ctx.assume, ctx.point, ctx.expand);
      eng.set_var_name(ctx.var_name);
      return side_info(eng, ctx.f).sign == Sign::Positive &&
             side_info(eng, ctx.g).sign == Sign::Positive;
    } catch (const Error&) {
      return false;
    }
  };
  switch (derived) {
    case Relation::MuchLess:
      if (stated == Relation::PrecEq) return true;
      if ((stated == Relation::Less || stated == Relation::LessEq) && positive_sides())
        return true;
      return false;
    case Relation::MuchGreater:
      if (stated == Relation::SuccEq) return true;
      if ((stated == Relation::Greater || stated == Relation::GreaterEq) && positive_sides())
        return true;
      return false;
    case Relation::Sim:
      return stated == Relation::Propto || stated == Relation::PrecEq ||
             stated == Relation::SuccEq;
    case Relation::Propto:
      return stated == Relation::PrecEq || stated == Relation::SuccEq;
    case Relation::Less:
      return stated == Relation::LessEq;
    case Relation::Greater:
      return stated == Relation::GreaterEq;
    case Relation::Equal:
      return stated == Relation::LessEq || stated == Relation::GreaterEq;
    default:
      return false;
  }
}

inline bool solve_step_holds(const ChainStep& s, const Assumptions& a, ExpandOptions opts,
                             std::string& why) {
  if (s.rel == Relation::LogMuchGreater || s.rel == Relation::LogMuchLess) {
    bool fwd = s.rel == Relation::LogMuchGreater;
    bool ok = fwd ? logdom(s.lhs, s.rhs, s.point, a, opts, s.var_name)
                  : logdom(s.rhs, s.lhs, s.point, a, opts, s.var_name);
    if (!ok) why = "log-dominance does not hold";
    return ok;
  }
  RelationResult r = compare(s.lhs, s.rhs, s.point, a, {opts, true}, s.var_name);
  if (verdict_entails(r, s.rel)) return true;
  why = "engine verdict '" + relation_token(r.strongest()) + "'";
  if (r.order == Order::Less) why += " with order lt";
  if (r.order == Order::Greater) why += " with order gt";
  if (r.order == Order::Equal) why += " with order eq";
  why += " contradicts stated '" + relation_token(s.rel) + "'";
  return false;
}

}  // namespace detail

inline ChainReport verify_chain(const Chain& chain, ExpandOptions opts = {}) {
  ChainReport report;
  const Assumptions& a = chain.assumptions;
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    const ChainStep& s = chain.steps[i];
    StepReport sr{i, true, "OK"};
    try {
      switch (s.just) {
        case ChainStep::Just::Solve: {
          std::string why;
          if (!detail::solve_step_holds(s, a, opts, why)) sr = {i, false, "FAIL: " + why};
          break;
        }
        case ChainStep::Just::Op: {
          if (i == 0) {
            sr = {i, false, "FAIL: an operator step needs a previous step"};
            break;
          }
          const ChainStep& prev = chain.steps[i - 1];
          // Sides must be the op applied to the previous sides; integration
          // is checked in reverse (differentiate the new sides).
          if (s.op.kind == RelOp::Kind::Integrate) {
            if (!expr_eq(differentiate(s.lhs), prev.lhs) ||
                !expr_eq(differentiate(s.rhs), prev.rhs)) {
              sr = {i, false, "FAIL: sides are not antiderivatives of the previous sides"};
              break;
            }
          } else {
            auto [el, er] = apply_op_to_sides(s.op, prev.lhs, prev.rhs);
            if (!expr_eq(el, s.lhs) || !expr_eq(er, s.rhs)) {
              sr = {i, false, "FAIL: sides do not match the operator applied to the previous step"};
              break;
            }
          }
          RelOpContext ctx{prev.lhs, prev.rhs, prev.point, &a, opts, prev.var_name};
          Relation derived = apply_rel_op(prev.rel, s.op, ctx);
          RelOpContext new_ctx{s.lhs, s.rhs, s.point, &a, opts, s.var_name};
          if (!detail::weakening_allowed(derived, s.rel, new_ctx)) {
            sr = {i, false,
                  "FAIL: operator yields '" + relation_token(derived) + "', stated '" +
                      relation_token(s.rel) + "'"};
          }
          break;
        }
        case ChainStep::Just::Absorb: {
          if (i == 0) {
            sr = {i, false, "FAIL: an absorb step needs a previous step"};
            break;
          }
          const ChainStep& prev = chain.steps[i - 1];
          if (detail::is_order_relation(s.rel)) {
            sr = {i, false, "FAIL: absorption cannot justify an order relation"};
            break;
          }
          if (s.rel != prev.rel) {
            sr = {i, false, "FAIL: absorption preserves the relation"};
            break;
          }
          for (const auto& [ps, ns] : {std::pair{prev.lhs, s.lhs}, std::pair{prev.rhs, s.rhs}}) {
            if (expr_eq(ps, ns)) continue;
            RelationResult r = compare(ps, ns, s.point, a, {opts, false}, s.var_name);
            if (!r.asymptotic) {
              sr = {i, false,
                    "FAIL: '" + print_expression(ns, s.var_name) +
                        "' is not an absorption of '" + print_expression(ps, s.var_name) + "'"};
              break;
            }
          }
          break;
        }
      }
    } catch (const Error& err) {
      sr = {i, false, std::string("FAIL: ") + err.what()};
    }
    report.all_ok = report.all_ok && sr.ok;
    report.steps.push_back(std::move(sr));
  }
  return report;
}

}  // namespace gossamer

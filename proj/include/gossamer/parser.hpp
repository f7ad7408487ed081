#pragma once

// Recursive-descent parser for the expression grammar:
//   expr    := term { ("+"|"-") term }
//   term    := unary { ("*"|"/") unary }
//   unary   := ["-"] factor
//   factor  := base ["^" unary]
//   base    := NUMBER | IDENT | "(" expr ")" | FUNC "(" expr ")"
// "e" is the Euler constant.  Any identifier not declared as a parameter is
// the main variable; two distinct undeclared identifiers are an error.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gossamer/assumptions.hpp"
#include "gossamer/expr.hpp"

namespace gossamer {

struct ParseResult {
  ExprPtr expr;
  std::string main_var;  // empty when the expression has no main variable
};

namespace detail {

class ExprParser {
 public:
  ExprParser(const std::string& text, const Assumptions& assume)
      : s_(text), assume_(assume) {}

  ParseResult run() {
    ExprPtr raw = parse_expr();
    skip_ws();
    if (i_ < s_.size())
      throw ParseError("unexpected trailing input", i_, {"+", "-", "*", "/", "^", "end"});
    // Identifiers were parsed as Param nodes; promote the main variable.
    std::string main;
    for (const auto& name : seen_idents_) {
      if (assume_.is_declared(name)) continue;
      if (!main.empty() && main != name)
        throw ParseError("two undeclared identifiers '" + main + "' and '" + name +
                             "'; declare one as a parameter",
                         0);
      main = name;
    }
    ExprPtr out = main.empty() ? raw : promote_var(raw, main);
    validate_facts(out);
    return {out, main};
  }

 private:
  ExprPtr promote_var(const ExprPtr& e, const std::string& name) {
    switch (e->kind) {
      case ExprKind::Param:
        return e->name == name ? make_var() : e;
      case ExprKind::Rational:
      case ExprKind::Var:
        return e;
      case ExprKind::Ln:
        return make_ln(promote_var(e->kids[0], name));
      case ExprKind::Exp:
        return make_exp(promote_var(e->kids[0], name));
      case ExprKind::Fact:
        return detail::make_fact_unchecked(promote_var(e->kids[0], name));
      case ExprKind::Div:
        return make_div(promote_var(e->kids[0], name), promote_var(e->kids[1], name));
      case ExprKind::Mul: {
        std::vector<ExprPtr> kids;
        for (const auto& k : e->kids) kids.push_back(promote_var(k, name));
        return make_mul(std::move(kids));
      }
      case ExprKind::Add: {
        std::vector<ExprPtr> kids;
        for (const auto& k : e->kids) kids.push_back(promote_var(k, name));
        return make_add(std::move(kids));
      }
    }
    throw Error("unreachable");
  }

  void skip_ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }

  bool consume(char c) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }

  ExprPtr parse_expr() {
    std::vector<ExprPtr> terms;
    terms.push_back(parse_term());
    while (true) {
      if (consume('+')) {
        terms.push_back(parse_term());
      } else if (consume('-')) {
        terms.push_back(make_neg(parse_term()));
      } else {
        break;
      }
    }
    if (terms.size() == 1) return terms[0];
    return make_add(std::move(terms));
  }

  ExprPtr parse_term() {
    ExprPtr acc = parse_unary();
    while (true) {
      if (consume('*')) {
        acc = make_mul({acc, parse_unary()});
      } else if (consume('/')) {
        acc = make_div(acc, parse_unary());
      } else {
        break;
      }
    }
    return acc;
  }

  ExprPtr parse_unary() {
    if (consume('-')) return make_neg(parse_factor());
    consume('+');
    return parse_factor();
  }

  ExprPtr parse_factor() {
    ExprPtr base = parse_base();
    if (consume('^')) {
      ExprPtr exponent = parse_unary();
      return make_pow(base, exponent);
    }
    return base;
  }

  ExprPtr parse_base() {
    skip_ws();
    if (i_ >= s_.size())
      throw ParseError("unexpected end of input", i_, {"NUMBER", "IDENT", "("});
    char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (c == '(') {
      ++i_;
      ExprPtr e = parse_expr();
      if (!consume(')')) throw ParseError("expected ')'", i_, {")"});
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", i_,
                     {"NUMBER", "IDENT", "(", "ln", "exp", "fact"});
  }

  ExprPtr parse_number() {
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    return make_rational(Rational(Int(s_.substr(start, i_ - start))));
  }

  ExprPtr parse_ident() {
    std::size_t start = i_;
    while (i_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
      ++i_;
    std::string name = s_.substr(start, i_ - start);
    if (name == "ln" || name == "exp" || name == "fact") {
      if (!consume('(')) throw ParseError("expected '(' after " + name, i_, {"("});
      ExprPtr arg = parse_expr();
      if (!consume(')')) throw ParseError("expected ')'", i_, {")"});
      if (name == "ln") return make_ln(arg);
      if (name == "exp") return make_exp(arg);
      return detail::make_fact_unchecked(arg);
    }
    if (name == "e") return make_exp(make_rational(Rational(1)));
    seen_idents_.insert(name);
    return make_param(name);
  }

  const std::string& s_;
  const Assumptions& assume_;
  std::size_t i_ = 0;
  std::set<std::string> seen_idents_;
};

}  // namespace detail

inline ParseResult parse_expression(const std::string& text, const Assumptions& assume) {
  return detail::ExprParser(text, assume).run();
}

inline ParseResult parse_expression(const std::string& text) {
  Assumptions none;
  return detail::ExprParser(text, none).run();
}

}  // namespace gossamer

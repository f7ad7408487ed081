#pragma once

// Rendering of normalized expressions.  The plain format round-trips through
// the parser; the landau format additionally collapses nested logarithms to
// ln_k(x) for readability and is display-only.

#include <string>
#include <vector>

#include "gossamer/expr.hpp"

namespace gossamer {

enum class PrintFormat { Plain, Landau };

namespace detail {

struct Printer {
  std::string var_name;
  PrintFormat format;

  // Precedence: 0 add, 1 mul/div, 2 power operand, 3 atom.
  std::string render(const ExprPtr& e, int min_prec) const {
    switch (e->kind) {
      case ExprKind::Rational: {
        std::string s = to_string(e->value);
        bool atom = e->value >= 0 && is_integer(e->value);
        if (!atom && min_prec >= 2) return "(" + s + ")";
        if (e->value < 0 && min_prec >= 1) return "(" + s + ")";
        return s;
      }
      case ExprKind::Param:
        return e->name;
      case ExprKind::Var:
        return var_name;
      case ExprKind::Ln: {
        if (format == PrintFormat::Landau) {
          int depth = 0;
          ExprPtr inner = e;
          while (inner->kind == ExprKind::Ln) {
            ++depth;
            inner = inner->kids[0];
          }
          if (depth >= 2) return "ln_" + std::to_string(depth) + "(" + render(inner, 0) + ")";
        }
        return "ln(" + render(e->kids[0], 0) + ")";
      }
      case ExprKind::Fact:
        return "fact(" + render(e->kids[0], 0) + ")";
      case ExprKind::Exp:
        return render_exp(e, min_prec);
      case ExprKind::Add: {
        std::string out;
        for (std::size_t i = 0; i < e->kids.size(); ++i) {
          auto [q, sk] = term_parts(e->kids[i]);
          if (i == 0) {
            out += render(e->kids[i], 1);
          } else if (q < 0) {
            ExprPtr flipped = mul_const(Rational(-1), e->kids[i]);
            out += " - " + render(flipped, 1);
          } else {
            out += " + " + render(e->kids[i], 1);
          }
        }
        if (min_prec >= 1) return "(" + out + ")";
        return out;
      }
      case ExprKind::Mul: {
        std::string out;
        bool first = true;
        std::size_t i = 0;
        // Negative leading coefficient renders as a prefix minus.
        bool neg = false;
        if (e->kids[0]->kind == ExprKind::Rational) {
          Rational q = e->kids[0]->value;
          if (q < 0) {
            neg = true;
            q = -q;
          }
          if (q != 1) {
            out += render(make_rational(q), 2);
            first = false;
          }
          i = 1;
        }
        while (i < e->kids.size()) {
          // Collect runs of equal factors into powers.
          std::size_t j = i;
          while (j < e->kids.size() && expr_eq(e->kids[j], e->kids[i])) ++j;
          std::size_t count = j - i;
          if (!first) out += "*";
          first = false;
          if (count >= 2) {
            out += render(e->kids[i], 3) + "^" + std::to_string(count);
          } else {
            out += render(e->kids[i], 2);
          }
          i = j;
        }
        if (neg) {
          out = "-" + out;
          if (min_prec >= 1) return "(" + out + ")";
          return out;
        }
        if (min_prec >= 2) return "(" + out + ")";
        return out;
      }
      case ExprKind::Div: {
        std::string n = render(e->kids[0], 2);
        std::string d = render(e->kids[1], 2);
        std::string out = n + "/" + d;
        if (min_prec >= 2) return "(" + out + ")";
        return out;
      }
    }
    return "?";
  }

  // Exp(u): prefer base^exponent sugar when u contains exactly one Ln factor
  // at the top of a product; otherwise e^u.
  std::string render_exp(const ExprPtr& e, int min_prec) const {
    const ExprPtr& u = e->kids[0];
    ExprPtr base, exponent;
    if (u->kind == ExprKind::Mul) {
      int ln_count = 0;
      std::size_t ln_at = 0;
      for (std::size_t i = 0; i < u->kids.size(); ++i)
        if (u->kids[i]->kind == ExprKind::Ln) {
          ++ln_count;
          ln_at = i;
        }
      if (ln_count == 1) {
        base = u->kids[ln_at]->kids[0];
        std::vector<ExprPtr> rest;
        for (std::size_t i = 0; i < u->kids.size(); ++i)
          if (i != ln_at) rest.push_back(u->kids[i]);
        exponent = rest.size() == 1 ? rest[0] : make_mul(std::move(rest));
      }
    } else if (u->kind == ExprKind::Div && u->kids[0]->kind == ExprKind::Ln) {
      base = u->kids[0]->kids[0];
      exponent = make_div(make_rational(Rational(1)), u->kids[1]);
    }
    std::string out;
    if (base) {
      out = render(base, 3) + "^" + render_exponent(exponent);
    } else {
      out = "e^" + render_exponent(u);
    }
    if (min_prec >= 3) return "(" + out + ")";
    return out;
  }

  std::string render_exponent(const ExprPtr& e) const {
    bool atom = e->kind == ExprKind::Param || e->kind == ExprKind::Var ||
                (e->kind == ExprKind::Rational && e->value >= 0 && is_integer(e->value));
    if (atom) return render(e, 3);
    return "(" + render(e, 0) + ")";
  }
};

}  // namespace detail

inline std::string print_expression(const ExprPtr& e, const std::string& var_name = "x",
                                    PrintFormat format = PrintFormat::Plain) {
  detail::Printer p{var_name.empty() ? "x" : var_name, format};
  return p.render(e, 0);
}

}  // namespace gossamer

// Parsing, printing, normal form, differentiation, substitution.

#include <gtest/gtest.h>

#include <cmath>

#include "gossamer/gossamer.hpp"
#include "support.hpp"

using namespace gossamer;
using gossamer::testing::ExprGen;
using gossamer::testing::parse1;

TEST(Parse, GrammarExamples) {
  ExprPtr e = parse1("(3*n+5)/(5*n)");
  ASSERT_EQ(e->kind, ExprKind::Div);
  EXPECT_EQ(e->kids[0]->kind, ExprKind::Add);
  EXPECT_EQ(e->kids[1]->kind, ExprKind::Mul);
  EXPECT_EQ(print_expression(e, "n"), "(3*n + 5)/(5*n)");
}

TEST(Parse, PowDesugarsThroughExpLn) {
  Assumptions a = Assumptions::parse("a>0");
  ExprPtr e = parse_expression("x^a", a).expr;
  ASSERT_EQ(e->kind, ExprKind::Exp);
  ASSERT_EQ(e->kids[0]->kind, ExprKind::Mul);
  EXPECT_EQ(e->kids[0]->kids[0]->kind, ExprKind::Param);
  EXPECT_EQ(e->kids[0]->kids[1]->kind, ExprKind::Ln);
  EXPECT_EQ(print_expression(e), "x^a");
}

TEST(Parse, IntegerPowersAreRepeatedMul) {
  ExprPtr e = parse1("x^3");
  ASSERT_EQ(e->kind, ExprKind::Mul);
  EXPECT_EQ(e->kids.size(), 3u);
  EXPECT_EQ(print_expression(e), "x^3");
}

TEST(Parse, FactorialOfMainVariable) {
  ExprPtr e = parse1("fact(n)*e^n");
  ASSERT_EQ(e->kind, ExprKind::Mul);
  EXPECT_EQ(e->kids[0]->kind, ExprKind::Exp);
  EXPECT_EQ(e->kids[1]->kind, ExprKind::Fact);
  EXPECT_NO_THROW(parse1("fact(n+2)"));
  EXPECT_THROW(parse1("fact(n*n)"), FactorialDomainError);
  EXPECT_THROW(parse1("fact(2*n)"), FactorialDomainError);
}

TEST(Parse, TwoUndeclaredIdentifiersRejected) {
  EXPECT_THROW(parse1("x+y"), ParseError);
  Assumptions a = Assumptions::parse("y>0");
  EXPECT_NO_THROW(parse_expression("x+y", a));
}

TEST(Parse, ErrorsCarryOffsets) {
  try {
    parse1("x + * y");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Parse, EulerConstant) {
  ExprPtr e = parse1("e^x");
  ASSERT_EQ(e->kind, ExprKind::Exp);
  EXPECT_EQ(e->kids[0]->kind, ExprKind::Var);
  ExprPtr bare = parse1("e");
  EXPECT_EQ(bare->kind, ExprKind::Exp);
}

TEST(NormalForm, FoldsAndCollects) {
  EXPECT_TRUE(expr_eq(parse1("x+x"), parse1("2*x")));
  EXPECT_TRUE(expr_eq(parse1("x*x*x"), parse1("x^3")));
  EXPECT_TRUE(expr_eq(parse1("x - x"), parse1("0")));
  EXPECT_TRUE(expr_eq(parse1("ln(exp(x))"), parse1("x")));
  EXPECT_TRUE(expr_eq(parse1("exp(2*ln(x))"), parse1("x^2")));
  EXPECT_TRUE(expr_eq(parse1("x/x"), parse1("1")));
  EXPECT_TRUE(expr_eq(parse1("(x+1)*(x+1)"), parse1("x^2+2*x+1")));
}

TEST(NormalForm, NegativeConstantBaseRejected) {
  EXPECT_THROW(parse1("(0-2)^(1/2)"), UndefinedAtPoint);
  EXPECT_NO_THROW(parse1("(0-2)^3"));
}

TEST(Print, Examples) {
  EXPECT_EQ(print_expression(parse1("ln(ln(x))")), "ln(ln(x))");
  EXPECT_EQ(print_expression(parse1("ln(ln(x))"), "x", PrintFormat::Landau), "ln_2(x)");
  EXPECT_EQ(print_expression(parse1("1/t + 2"), "t"), "1/t + 2");
}

TEST(Print, RoundTripFixedPoint) {
  ExprGen gen(20260809);
  for (int i = 0; i < 300; ++i) {
    ExprPtr e = gen.term(3);
    std::string s = print_expression(e, "x");
    ExprPtr back = parse1(s);
    EXPECT_TRUE(expr_eq(e, back)) << s << " reparsed as " << print_expression(back, "x");
  }
}

TEST(Differentiate, Basics) {
  EXPECT_TRUE(expr_eq(differentiate(parse1("x^2")), parse1("2*x")));
  EXPECT_TRUE(expr_eq(differentiate(parse1("ln(x)")), parse1("1/x")));
  EXPECT_TRUE(expr_eq(differentiate(parse1("7")), parse1("0")));
  EXPECT_THROW(differentiate(parse1("fact(n)")), FactorialDomainError);
}

TEST(Differentiate, Linearity) {
  ExprGen gen(42);
  for (int i = 0; i < 200; ++i) {
    ExprPtr f = gen.term(3);
    ExprPtr g = gen.term(3);
    ExprPtr lhs = differentiate(make_add({f, g}));
    ExprPtr rhs = make_add({differentiate(f), differentiate(g)});
    EXPECT_TRUE(expr_eq(lhs, rhs))
        << print_expression(f) << " | " << print_expression(g);
  }
}

TEST(Differentiate, AgreesWithCentralDifferences) {
  ExprGen gen(7);
  int checked = 0;
  for (int i = 0; i < 200 && checked < 60; ++i) {
    ExprPtr f = gen.positive(3);
    ExprPtr df = differentiate(f);
    for (double x : {2.3, 3.7, 5.1, 7.9, 9.4}) {
      double h = 1e-6 * x;
      double num0, num1, sym;
      try {
        num0 = numeric_value(f, x - h);
        num1 = numeric_value(f, x + h);
        sym = numeric_value(df, x);
      } catch (const Error&) {
        continue;
      }
      double fd = (num1 - num0) / (2 * h);
      if (!std::isfinite(fd) || !std::isfinite(sym)) continue;
      double scale = std::max({1.0, std::abs(fd), std::abs(sym)});
      EXPECT_NEAR(fd, sym, 1e-5 * scale) << print_expression(f) << " at " << x;
      ++checked;
    }
  }
  EXPECT_GE(checked, 40);
}

TEST(Substitute, Examples) {
  ExprPtr f = parse1("x^2");
  ExprPtr shifted = substitute(f, parse1("x+2"));
  EXPECT_TRUE(expr_eq(shifted, parse1("x^2+4*x+4")));
  EXPECT_TRUE(expr_eq(substitute(f, make_var()), f));
  // Shift-to-infinity realization: f(1/t + a) equals 1/t^2 + 2a/t + a^2.
  Assumptions a = Assumptions::parse("a>0");
  ExprPtr g = parse_expression("x^2", a).expr;
  ExprPtr sh = substitute(g, parse_expression("1/t + a", a).expr);
  ExprPtr want = parse_expression("1/t^2 + 2*a/t + a^2", a).expr;
  Engine eng(a, Point::infinity());
  GNum diff = eng.expand(make_add({sh, make_neg(want)}));
  EXPECT_TRUE(diff.is_exact_zero()) << eng.render(diff);
}

TEST(Substitute, FactRestrictionEnforced) {
  ExprPtr f = parse1("fact(n)");
  EXPECT_NO_THROW(substitute(f, parse1("n+1")));
  EXPECT_THROW(substitute(f, parse1("n*n")), FactorialDomainError);
}

TEST(Assume, ParseAndConsistency) {
  Assumptions a = Assumptions::parse("a>0, mu+v<1, b>=2");
  EXPECT_TRUE(a.is_declared("a"));
  EXPECT_TRUE(a.is_declared("mu"));
  EXPECT_THROW(Assumptions::parse("a>0, a<0"), Error);
  EXPECT_THROW(Assumptions::parse("a>1, a=1"), Error);
  EXPECT_NO_THROW(Assumptions::parse("a>0, a<1"));
}

TEST(Assume, SignQueries) {
  Assumptions a = Assumptions::parse("a>0, b>0, mu+v<1, mu>0, v>0");
  auto sign_of_combo = [&](const std::string& s) {
    // Build a coefficient from parameters by parsing a tiny combo.
    Assumptions scratch = a;
    ExprPtr e = parse_expression(s, scratch).expr;
    Engine eng(a, Point::infinity());
    return eng.sign_leading(eng.expand(e));
  };
  EXPECT_EQ(sign_of_combo("a+b"), Sign::Positive);
  EXPECT_EQ(sign_of_combo("mu+v-1"), Sign::Negative);
  EXPECT_EQ(sign_of_combo("1-mu-v"), Sign::Positive);
  EXPECT_EQ(sign_of_combo("1-v"), Sign::Positive);  // from mu+v<1, mu>0
  EXPECT_EQ(sign_of_combo("a-b"), Sign::Unknown);
}

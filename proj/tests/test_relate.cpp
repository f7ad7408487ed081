// Relation solving, the operator table, and its theorem properties.

#include <gtest/gtest.h>

#include <cmath>

#include "gossamer/gossamer.hpp"
#include "support.hpp"

using namespace gossamer;
using gossamer::testing::ExprGen;
using gossamer::testing::parse1;

namespace {

RelationResult cmp(const std::string& f, const std::string& g, const std::string& assume = "",
                   Point p = Point::infinity(), const std::string& var = "") {
  Assumptions a = Assumptions::parse(assume);
  ParseResult pf = parse_expression(f, a);
  ParseResult pg = parse_expression(g, a);
  std::string v = !var.empty() ? var : (!pf.main_var.empty() ? pf.main_var : pg.main_var);
  return compare(pf.expr, pg.expr, p, a, {}, v.empty() ? "x" : v);
}

}  // namespace

TEST(Compare, PaperVerdicts) {
  EXPECT_EQ(cmp("ln(x)", "x^a", "a>0").magnitude, Magnitude::MuchLess);          // MEX015
  EXPECT_EQ(cmp("e^x", "x^D", "D>0").magnitude, Magnitude::MuchGreater);         // MEX012
  EXPECT_EQ(cmp("n^n*n", "e^n*fact(n)").magnitude, Magnitude::MuchGreater);      // MEX014
  EXPECT_EQ(cmp("ln(x)", "x^2").magnitude, Magnitude::MuchLess);                 // MEX031
  EXPECT_EQ(cmp("x^2", "x").magnitude, Magnitude::MuchGreater);                  // MEX041
}

TEST(Compare, IdentityIsProptoCloseEqual) {
  RelationResult r = cmp("x^2+x", "x^2+x");
  EXPECT_EQ(r.magnitude, Magnitude::Propto);
  EXPECT_TRUE(r.asymptotic);
  EXPECT_TRUE(r.close);
  EXPECT_EQ(r.order, Order::Equal);
}

TEST(Compare, CurveBetweenCurves) {  // MEX019
  RelationResult r = cmp("x^(ln(ln(x))/ln(ln(x+1)))", "x");
  EXPECT_EQ(r.magnitude, Magnitude::Propto);
  EXPECT_TRUE(r.asymptotic);
  EXPECT_EQ(r.order, Order::Less);
}

TEST(Compare, RateOfIncreaseCases) {  // MEX017
  const std::string f = "(ln(x))^((ln(x))^mu)";
  const std::string g = "x^((ln(x))^-v)";
  EXPECT_EQ(cmp(f, g, "mu>0, v>0, mu+v<1").magnitude, Magnitude::MuchLess);
  EXPECT_EQ(cmp(f, g, "mu>0, v>0, mu<1, v<1, mu+v>1").magnitude, Magnitude::MuchGreater);
  EXPECT_EQ(cmp(f, g, "mu>0, v>0, mu+v=1").magnitude, Magnitude::MuchGreater);
}

TEST(Compare, ZeroSidedPoints) {
  EXPECT_EQ(cmp("v", "ln(v)", "", Point::zero_plus(), "v").magnitude,
            Magnitude::MuchLess);  // MEX033
  EXPECT_EQ(cmp("x^n", "n", "x>0,x<1", Point::infinity(), "n").magnitude,
            Magnitude::MuchLess);  // MEX018
}

TEST(Compare, AgainstZeroRejected) {
  EXPECT_THROW(cmp("x", "x-x"), DivisionByExactZero);
}

TEST(Logdom, Examples) {
  Assumptions a = Assumptions::parse("c>0, c<1");
  ExprPtr xn = parse_expression("c^n", a).expr;
  ExprPtr n = parse_expression("n", a).expr;
  EXPECT_TRUE(logdom(xn, n, Point::infinity(), a, {}, "n"));
  Assumptions none;
  EXPECT_FALSE(logdom(parse1("n^2"), parse1("n"), Point::infinity(), none, {}, "n"));
  EXPECT_FALSE(logdom(parse1("n"), parse1("n"), Point::infinity(), none, {}, "n"));
}

// ---------------------------------------------------------------------------
// The operator table.

namespace {

RelOpContext ctx_of(const ExprPtr& f, const ExprPtr& g, const Assumptions& a,
                    const std::string& var = "x") {
  return RelOpContext{f, g, Point::infinity(), &a, ExpandOptions{}, var};
}

}  // namespace

TEST(RelOps, ExpMagnifiesUnboundedOrder) {  // MEX011 / Th P201
  Assumptions a;
  auto c = ctx_of(parse1("3*x"), parse1("2*x"), a);
  EXPECT_EQ(apply_rel_op(Relation::Greater, RelOp::exp(), c), Relation::MuchGreater);
}

TEST(RelOps, ExpKeepsBoundedOrder) {  // Th P010
  Assumptions a;
  auto c = ctx_of(parse1("x+1"), parse1("x"), a);
  EXPECT_EQ(apply_rel_op(Relation::Greater, RelOp::exp(), c), Relation::Greater);
}

TEST(RelOps, LnReducesOrder) {  // MEX010 / Th P019
  Assumptions a;
  auto c = ctx_of(parse1("3*x"), parse1("2*x"), a);
  EXPECT_EQ(apply_rel_op(Relation::Greater, RelOp::ln(), c), Relation::Greater);
}

TEST(RelOps, LnOfMuchGreaterDependsOnLogDominance) {  // Th P013 + refinement
  Assumptions a;
  auto weak = ctx_of(parse1("x^2"), parse1("x"), a);
  EXPECT_EQ(apply_rel_op(Relation::MuchGreater, RelOp::ln(), weak), Relation::Greater);
  auto strong = ctx_of(parse1("e^x"), parse1("x"), a);
  EXPECT_EQ(apply_rel_op(Relation::MuchGreater, RelOp::ln(), strong), Relation::MuchGreater);
}

TEST(RelOps, DifferentiatePreservesMagnitude) {  // Th P016
  Assumptions a;
  auto c = ctx_of(parse1("x^2"), parse1("x"), a);
  EXPECT_EQ(apply_rel_op(Relation::MuchGreater, RelOp::diff(), c), Relation::MuchGreater);
}

TEST(RelOps, DifferentiateOrderNeedsNonconstantDifference) {
  Assumptions a;
  auto degenerate = ctx_of(parse1("x+3"), parse1("x"), a);
  EXPECT_THROW(apply_rel_op(Relation::Greater, RelOp::diff(), degenerate), ConditionViolated);
  auto fine = ctx_of(parse1("x^2+x"), parse1("x"), a);
  EXPECT_EQ(apply_rel_op(Relation::Greater, RelOp::diff(), fine), Relation::Greater);
}

TEST(RelOps, NegateFlipsOrderKeepsMagnitude) {
  Assumptions a;
  auto c = ctx_of(parse1("x^2"), parse1("x"), a);
  EXPECT_EQ(apply_rel_op(Relation::Equal, RelOp::negate(), c), Relation::Equal);
  EXPECT_EQ(apply_rel_op(Relation::Less, RelOp::negate(), c), Relation::Greater);
  EXPECT_EQ(apply_rel_op(Relation::MuchLess, RelOp::negate(), c), Relation::MuchLess);
}

TEST(RelOps, AddBothRequiresSmallerGrowth) {  // Props P008/P004
  Assumptions a;
  auto c = ctx_of(parse1("x^3"), parse1("x^2"), a);
  EXPECT_EQ(apply_rel_op(Relation::MuchGreater, RelOp::add_both(parse1("x")), c),
            Relation::MuchGreater);
  EXPECT_THROW(apply_rel_op(Relation::MuchGreater, RelOp::add_both(parse1("x^4")), c),
               ConditionViolated);
}

TEST(RelOps, UnsupportedRowsAreNamed) {
  Assumptions a;
  auto c = ctx_of(parse1("x^2"), parse1("x"), a);
  EXPECT_THROW(apply_rel_op(Relation::Sim, RelOp::diff(), c), UnsupportedRow);
  EXPECT_THROW(apply_rel_op(Relation::SimEq, RelOp::reciprocal(), c), UnsupportedRow);
}

// ---------------------------------------------------------------------------
// Theorem properties on random instances.

TEST(Props, ReversalInvolution) {
  Assumptions a;
  ExprGen gen(11);
  for (int i = 0; i < 60; ++i) {
    ExprPtr f = gen.positive(3);
    ExprPtr g = gen.positive(3);
    RelationResult fg, gf;
    try {
      fg = compare(f, g, Point::infinity(), a);
      gf = compare(g, f, Point::infinity(), a);
    } catch (const Error&) {
      continue;
    }
    auto flip = [](Magnitude m) {
      return m == Magnitude::MuchLess    ? Magnitude::MuchGreater
             : m == Magnitude::MuchGreater ? Magnitude::MuchLess
                                           : Magnitude::Propto;
    };
    EXPECT_EQ(fg.magnitude, flip(gf.magnitude));
    auto flip_order = [](Order o) {
      return o == Order::Less ? Order::Greater : o == Order::Greater ? Order::Less : o;
    };
    EXPECT_EQ(fg.order, flip_order(gf.order));
  }
}

TEST(Props, ReciprocalReversesMagnitude) {  // Prop P005 via Reciprocal
  Assumptions a;
  ExprGen gen(17);
  for (int i = 0; i < 40; ++i) {
    ExprPtr f = gen.positive_divergent(2);
    ExprPtr g = gen.positive_divergent(2);
    RelationResult d = compare(f, g, Point::infinity(), a, {ExpandOptions{}, false});
    RelationResult r =
        compare(make_div(make_rational(Rational(1)), f), make_div(make_rational(Rational(1)), g),
                Point::infinity(), a, {ExpandOptions{}, false});
    auto flip = [](Magnitude m) {
      return m == Magnitude::MuchLess    ? Magnitude::MuchGreater
             : m == Magnitude::MuchGreater ? Magnitude::MuchLess
                                           : Magnitude::Propto;
    };
    EXPECT_EQ(r.magnitude, flip(d.magnitude));
  }
}

TEST(Props, TrichotomyOnRandomCorpus) {
  Assumptions a;
  ExprGen gen(23);
  int decided = 0;
  for (int i = 0; i < 220; ++i) {
    ExprPtr f = gen.positive(3);
    ExprPtr g = gen.positive(3);
    try {
      RelationResult r = compare(f, g, Point::infinity(), a, {ExpandOptions{}, false});
      RelationResult rr = compare(g, f, Point::infinity(), a, {ExpandOptions{}, false});
      // Exactly one verdict, consistent under swapping.
      bool ll = r.magnitude == Magnitude::MuchLess && rr.magnitude == Magnitude::MuchGreater;
      bool gg = r.magnitude == Magnitude::MuchGreater && rr.magnitude == Magnitude::MuchLess;
      bool pp = r.magnitude == Magnitude::Propto && rr.magnitude == Magnitude::Propto;
      EXPECT_TRUE(ll || gg || pp);
      ++decided;
    } catch (const PrecisionExhausted&) {
      // a declared outcome, allowed by the trichotomy contract
    } catch (const DivisionByExactZero&) {
    } catch (const DepthLimit&) {
    }
  }
  EXPECT_GE(decided, 180);
}

TEST(Props, Transitivity) {  // Prop P032
  Assumptions a;
  ExprGen gen(29);
  int hits = 0;
  for (int i = 0; i < 400 && hits < 40; ++i) {
    ExprPtr f = gen.positive(2);
    ExprPtr g = gen.positive(2);
    ExprPtr h = gen.positive(2);
    try {
      RelationResult fg = compare(f, g, Point::infinity(), a, {ExpandOptions{}, false});
      RelationResult gh = compare(g, h, Point::infinity(), a, {ExpandOptions{}, false});
      if (fg.magnitude != Magnitude::MuchGreater) continue;
      if (gh.magnitude == Magnitude::MuchLess) continue;  // need g succeq h
      RelationResult fh = compare(f, h, Point::infinity(), a, {ExpandOptions{}, false});
      EXPECT_EQ(fh.magnitude, Magnitude::MuchGreater)
          << print_expression(f) << " | " << print_expression(g) << " | " << print_expression(h);
      ++hits;
    } catch (const Error&) {
    }
  }
  EXPECT_GE(hits, 20);
}

TEST(Props, ScalarInvariance) {  // Prop P017
  Assumptions a;
  ExprGen gen(37);
  for (int i = 0; i < 60; ++i) {
    ExprPtr f = gen.positive(2);
    ExprPtr g = gen.positive(2);
    Rational alpha = gen.rational(1, 7);
    Rational beta = gen.rational(1, 7);
    try {
      RelationResult base = compare(f, g, Point::infinity(), a, {ExpandOptions{}, false});
      RelationResult scaled = compare(mul_const(alpha, f), mul_const(beta, g),
                                      Point::infinity(), a, {ExpandOptions{}, false});
      EXPECT_EQ(base.magnitude, scaled.magnitude);
    } catch (const Error&) {
    }
  }
}

TEST(Props, SignInvarianceOfMagnitude) {  // Prop P007
  Assumptions a;
  ExprGen gen(41);
  for (int i = 0; i < 60; ++i) {
    ExprPtr f = gen.positive(2);
    ExprPtr g = gen.positive(2);
    try {
      RelationResult base = compare(f, g, Point::infinity(), a, {ExpandOptions{}, false});
      RelationResult negd = compare(make_neg(f), g, Point::infinity(), a, {ExpandOptions{}, false});
      EXPECT_EQ(base.magnitude, negd.magnitude);
    } catch (const Error&) {
    }
  }
}

TEST(Props, LHopitalConsistency) {  // Th P015
  Assumptions a;
  ExprGen gen(43);
  int hits = 0;
  for (int i = 0; i < 120 && hits < 30; ++i) {
    ExprPtr f = gen.positive_divergent(2);
    ExprPtr g = gen.positive_divergent(2);
    try {
      RelationResult base = compare(f, g, Point::infinity(), a, {ExpandOptions{}, false});
      RelationResult deriv = compare(differentiate(f), differentiate(g), Point::infinity(), a,
                                     {ExpandOptions{}, false});
      EXPECT_EQ(base.magnitude, deriv.magnitude)
          << print_expression(f) << " vs " << print_expression(g);
      ++hits;
    } catch (const Error&) {
    }
  }
  EXPECT_GE(hits, 20);
}

TEST(Props, ExpPreservesInfinitesimalOrder) {  // Prop P212
  Assumptions a;
  ExprGen gen(47);
  int hits = 0;
  for (int i = 0; i < 80 && hits < 25; ++i) {
    ExprPtr f = gen.positive_infinitesimal(2);
    ExprPtr g = gen.positive_infinitesimal(2);
    try {
      RelationResult base = compare(f, g, Point::infinity(), a);
      RelationResult expd = compare(make_exp(f), make_exp(g), Point::infinity(), a);
      if (base.order == Order::Unknown) continue;
      EXPECT_EQ(base.order, expd.order)
          << print_expression(f) << " vs " << print_expression(g);
      ++hits;
    } catch (const Error&) {
    }
  }
  EXPECT_GE(hits, 15);
}

TEST(Props, LogDominanceImpliesDominance) {  // Prop P214
  Assumptions a;
  ExprGen gen(53);
  int hits = 0;
  for (int i = 0; i < 100 && hits < 20; ++i) {
    ExprPtr f = gen.positive_divergent(2);
    ExprPtr g = gen.positive_divergent(2);
    try {
      if (!logdom(f, g, Point::infinity(), a)) continue;
      RelationResult r = compare(f, g, Point::infinity(), a, {ExpandOptions{}, false});
      EXPECT_EQ(r.magnitude, Magnitude::MuchGreater);
      ++hits;
    } catch (const Error&) {
    }
  }
  EXPECT_GE(hits, 8);
}

TEST(Props, NumericOracleConsistency) {
  Assumptions a;
  ExprGen gen(59);
  int checked = 0;
  for (int i = 0; i < 120 && checked < 60; ++i) {
    ExprPtr f = gen.positive(3);
    ExprPtr g = gen.positive(3);
    RelationResult r;
    double d3, d6, d9;
    try {
      r = compare(f, g, Point::infinity(), a, {ExpandOptions{}, false});
      d3 = numeric_log_ratio(f, g, 1e3);
      d6 = numeric_log_ratio(f, g, 1e6);
      d9 = numeric_log_ratio(f, g, 1e9);
    } catch (const Error&) {
      continue;
    }
    if (!std::isfinite(d3) || !std::isfinite(d6) || !std::isfinite(d9)) continue;
    switch (r.magnitude) {
      case Magnitude::MuchLess:
        EXPECT_LT(d9, d3 + 1e-9) << print_expression(f) << " prec " << print_expression(g);
        EXPECT_LT(d9, -1.0);
        break;
      case Magnitude::MuchGreater:
        EXPECT_GT(d9, d3 - 1e-9);
        EXPECT_GT(d9, 1.0);
        break;
      case Magnitude::Propto:
        EXPECT_LT(std::abs(d9), 40.0) << print_expression(f) << " propto " << print_expression(g);
        break;
    }
    ++checked;
  }
  EXPECT_GE(checked, 40);
}

TEST(Monotone, Examples) {
  Assumptions a;
  EXPECT_EQ(is_monotone_tail(parse1("1/n^2"), a), Monotonicity::Decreasing);  // MEX021
  EXPECT_EQ(is_monotone_tail(parse1("n^2"), a), Monotonicity::Increasing);
  EXPECT_EQ(is_monotone_tail(parse1("3"), a), Monotonicity::Constant);
  EXPECT_EQ(is_monotone_tail(parse1("fact(n)"), a), Monotonicity::Increasing);
}

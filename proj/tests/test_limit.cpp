// Limits via expansion and transfer, the L'Hopital loop, the sqrt(2) demo.

#include <gtest/gtest.h>

#include "gossamer/gossamer.hpp"
#include "support.hpp"

using namespace gossamer;
using gossamer::testing::ExprGen;
using gossamer::testing::parse1;

namespace {

LimitResult lim(const std::string& f, const std::string& at, const std::string& assume = "") {
  Assumptions a = Assumptions::parse(assume);
  auto eq = at.find('=');
  std::string var = at.substr(0, eq);
  Point p = parse_point_value(at.substr(eq + 1));
  ParseResult pr = parse_expression(f, a);
  return limit(pr.expr, p, a, {}, var);
}

void expect_value(const LimitResult& r, const std::string& v) {
  ASSERT_EQ(r.kind, LimitResult::Kind::Value) << r.str();
  EXPECT_EQ(r.value.str(), v);
}

}  // namespace

TEST(Limit, PaperValues) {
  expect_value(lim("(3*n+5)/(5*n)", "n=inf"), "3/5");                         // MEX024
  expect_value(lim("(x^2-a^2)/(x^2+2*a*x+a^2)", "x=0", "a>0"), "-1");         // MEX025
  expect_value(lim("(x^5+7*x^4+2)^(1/5)-x", "x=inf"), "7/5");                 // MEX027
  expect_value(lim("x^alpha*ln(x)", "x=0+", "alpha>0"), "0");                 // MEX016
  expect_value(lim("((fact(n))^3/(n^(3*n)*e^-n))^(1/n)", "n=inf"), "e^-2");   // MEX029
  expect_value(lim("u/(u^2+1)^(1/2)", "u=inf"), "1");                         // MEX042
  expect_value(lim("(1-2^x)^x", "x=0-"), "1");                                // MEX030
}

TEST(Limit, SymbolicValue) {  // MEX028
  LimitResult r = lim("(a^x-b^x)/x", "x=0", "a>0,b>0");
  ASSERT_EQ(r.kind, LimitResult::Kind::Value);
  EXPECT_EQ(r.value.str(), "-ln(b) + ln(a)");
}

TEST(Limit, InfinitiesAndMismatch) {
  EXPECT_EQ(lim("n^2+n+1", "n=inf").kind, LimitResult::Kind::PlusInfinity);
  EXPECT_EQ(lim("1-n^3", "n=inf").kind, LimitResult::Kind::MinusInfinity);
  LimitResult r = lim("1/x", "x=0");
  ASSERT_EQ(r.kind, LimitResult::Kind::TwoSidedMismatch);
  EXPECT_EQ(r.right->kind, LimitResult::Kind::PlusInfinity);
  EXPECT_EQ(r.left->kind, LimitResult::Kind::MinusInfinity);
}

TEST(Limit, CollapseConstantExponent) {  // MEX026 context
  expect_value(lim("(x^5+7*x^4+2)^(1/5)-x", "x=inf"), "7/5");
  EXPECT_EQ(lim("(x^5+7*x^4+2)^(2/5)-x", "x=inf").kind, LimitResult::Kind::PlusInfinity);
}

TEST(Limit, UndeterminedIsDeclared) {
  LimitResult r = lim("a-b", "x=inf", "a>0,b>0");
  // The sign of a-b is unknown but its value is the exact symbolic a-b.
  ASSERT_EQ(r.kind, LimitResult::Kind::Value);
  Assumptions a = Assumptions::parse("a>0,b>0");
  ParseResult pr = parse_expression("(a-b)*x", a);
  LimitResult r2 = limit(pr.expr, Point::infinity(), a);
  EXPECT_EQ(r2.kind, LimitResult::Kind::Undetermined);
}

TEST(ShiftPoint, Machinery) {
  ExprPtr f = parse1("x^2");
  auto [at2, moved] = shift_point(f, Point::finite(Rational(2), Side::Plus));
  EXPECT_TRUE(moved);
  Assumptions a;
  LimitResult r = limit(at2, Point::infinity(), a);
  expect_value(r, "4");
  auto [same, unmoved] = shift_point(f, Point::infinity());
  EXPECT_FALSE(unmoved);
  EXPECT_TRUE(expr_eq(same, f));
  EXPECT_THROW(shift_point(parse1("fact(n)"), Point::zero_plus()), FactorialDomainError);
}

TEST(ShiftPoint, SoundnessOnCorpus) {
  Assumptions a;
  ExprGen gen(60);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    ExprPtr f = gen.positive(2);
    Point p = Point::finite(Rational(1 + static_cast<long>(gen.pick(3))), Side::Plus);
    LimitResult direct = limit(f, p, a);
    auto [shifted, moved] = shift_point(f, p);
    LimitResult via = limit(shifted, Point::infinity(), a);
    if (direct.kind == LimitResult::Kind::Undetermined) continue;
    EXPECT_TRUE(direct.same_as(via)) << print_expression(f) << " at " << p.str();
    ++checked;
  }
  EXPECT_GE(checked, 40);
}

TEST(LHopital, PaperExamples) {
  Assumptions a;
  {
    // MEX032 at a finite point.
    ParseResult f = parse_expression("3*x^2+2*x-16", a);
    ParseResult g = parse_expression("x^2-x-2", a);
    LimitResult r = limit_lhopital(f.expr, g.expr, Point::finite(Rational(2), Side::Plus), a);
    ASSERT_TRUE(r.is_value());
    EXPECT_EQ(r.value.str(), "14/3");
  }
  {
    // MEX033: v / ln v at 0+ -> 0.
    ParseResult f = parse_expression("v", a);
    ParseResult g = parse_expression("ln(v)", a);
    LimitResult r = limit_lhopital(f.expr, g.expr, Point::zero_plus(), a, 12, {}, "v");
    ASSERT_TRUE(r.is_value());
    EXPECT_EQ(r.value.str(), "0");
  }
  {
    // Trivial ratio: zero rounds needed.
    ParseResult f = parse_expression("x", a);
    LimitResult r = limit_lhopital(f.expr, f.expr, Point::finite(Rational(5), Side::Plus), a);
    ASSERT_TRUE(r.is_value());
    EXPECT_EQ(r.value.str(), "1");
  }
}

TEST(LHopital, AgreesWithExpansionLimit) {
  Assumptions a;
  ExprGen gen(71);
  int checked = 0;
  for (int i = 0; i < 60 && checked < 25; ++i) {
    ExprPtr f = gen.positive_divergent(2);
    ExprPtr g = gen.positive_divergent(2);
    if (contains_fact(f) || contains_fact(g)) continue;
    LimitResult via_expand = limit(make_div(f, g), Point::infinity(), a);
    LimitResult via_rounds = limit_lhopital(f, g, Point::infinity(), a, 20);
    if (!via_expand.is_value() || !via_rounds.is_value()) continue;
    EXPECT_TRUE(via_expand.value == via_rounds.value)
        << print_expression(f) << " / " << print_expression(g);
    ++checked;
  }
  EXPECT_GE(checked, 10);
}

TEST(Transfer, RatioOrderCorrespondence) {  // Th P210 / P001 / P002
  Assumptions a;
  ExprGen gen(83);
  int checked = 0;
  for (int i = 0; i < 120 && checked < 60; ++i) {
    ExprPtr f = gen.positive(3);
    ExprPtr g = gen.positive(3);
    RelationResult r;
    LimitResult ratio;
    try {
      r = compare(f, g, Point::infinity(), a);
      ratio = limit(make_div(f, g), Point::infinity(), a);
    } catch (const Error&) {
      continue;
    }
    if (r.order == Order::Unknown) continue;
    ++checked;
    if (ratio.is_value() && ratio.value.is_rational()) {
      Rational v = ratio.value.rational_value();
      if (v < 1) {
        // z1 = "<": requires f < g without f ~ g.
        EXPECT_EQ(r.order, Order::Less);
        EXPECT_FALSE(r.asymptotic);
      } else if (v > 1) {
        EXPECT_EQ(r.order, Order::Greater);
        EXPECT_FALSE(r.asymptotic);
      } else {
        EXPECT_TRUE(r.asymptotic);  // ratio -> 1 iff f ~ g
      }
    } else if (ratio.kind == LimitResult::Kind::PlusInfinity) {
      EXPECT_EQ(r.magnitude, Magnitude::MuchGreater);
    }
  }
  EXPECT_GE(checked, 40);
}

TEST(Sqrt2Demo, ExactIterates) {
  EXPECT_EQ(to_string(newton_sqrt2_demo(0)), "3/2");
  EXPECT_EQ(to_string(newton_sqrt2_demo(1)), "17/12");
  EXPECT_EQ(to_string(newton_sqrt2_demo(2)), "577/408");
}

TEST(Sqrt2Demo, QuadraticConvergenceTo47Places) {
  int prev = sqrt2_digits_correct(newton_sqrt2_demo(1));
  EXPECT_GE(prev, 2);
  for (int i = 2; i <= 5; ++i) {
    int digits = sqrt2_digits_correct(newton_sqrt2_demo(i));
    EXPECT_GE(digits, 2 * prev) << "iteration " << i;
    prev = digits;
  }
  EXPECT_GE(sqrt2_digits_correct(newton_sqrt2_demo(5)), 47);
}

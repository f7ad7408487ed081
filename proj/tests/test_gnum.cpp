// Multiseries expansion, component structure, field laws at truncation.

#include <gtest/gtest.h>

#include "gossamer/gossamer.hpp"
#include "support.hpp"

using namespace gossamer;
using gossamer::testing::ExprGen;
using gossamer::testing::parse1;

namespace {

bool same_terms(const GNum& a, const GNum& b) {
  if (a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (!(a.terms[i].coeff == b.terms[i].coeff)) return false;
    if (!(a.terms[i].mono == b.terms[i].mono)) return false;
  }
  return true;
}

// Retained-term agreement: the difference has no terms above the combined
// truncation bound (normalize already drops everything at or below it).
bool agree_within_window(Engine& eng, const GNum& a, const GNum& b) {
  GNum d = eng.add(a, eng.neg(b));
  return d.terms.empty();
}

GNum expand_str(Engine& eng, const std::string& s, const Assumptions& a) {
  return eng.expand(parse_expression(s, a).expr);
}

}  // namespace

TEST(Expand, GeometricSeries) {
  Assumptions a;
  Engine eng(a, Point::infinity(), ExpandOptions{3, 64, 8});
  eng.set_var_name("n");
  GNum g = expand_str(eng, "1/(n+1)", a);
  ASSERT_EQ(g.terms.size(), 3u);
  EXPECT_TRUE(g.exhausted());
  EXPECT_EQ(eng.render(g), "n^(-1) - n^(-2) + n^(-3) + O(n^(-4))");
}

TEST(Expand, PaperFiveOverNPlusOne) {
  Assumptions a;
  Engine eng(a, Point::infinity(), ExpandOptions{2, 64, 8});
  eng.set_var_name("n");
  GNum g = expand_str(eng, "(5/(n+1))*n", a);
  ASSERT_EQ(g.terms.size(), 2u);
  EXPECT_TRUE(g.exhausted());
  EXPECT_TRUE(g.terms[0].coeff.is_rational());
  EXPECT_EQ(g.terms[0].coeff.rational_value(), 5);
  EXPECT_TRUE(g.terms[0].mono.is_unit());
  EXPECT_EQ(g.terms[1].coeff.rational_value(), -5);
  Components c = eng.components(g);
  EXPECT_EQ(c.real.rational_value(), 5);
  EXPECT_EQ(c.phi.terms.size(), 1u);
  EXPECT_TRUE(c.inf.terms.empty());
}

TEST(Expand, ConstantIsSingleTerm) {
  Assumptions a;
  Engine eng(a, Point::infinity());
  GNum g = expand_str(eng, "7", a);
  ASSERT_EQ(g.terms.size(), 1u);
  EXPECT_TRUE(g.terms[0].mono.is_unit());
  EXPECT_FALSE(g.exhausted());
}

TEST(Expand, DivisionByExactZeroDetected) {
  Assumptions a;
  Engine eng(a, Point::infinity());
  EXPECT_THROW(expand_str(eng, "1/(x-x)", a), DivisionByExactZero);
}

TEST(Expand, LnOfNegativeLeading) {
  Assumptions a;
  Engine eng(a, Point::infinity());
  EXPECT_THROW(expand_str(eng, "ln(1-x)", a), UndefinedAtPoint);
}

TEST(Expand, FactAwayFromInfinityRejected) {
  Assumptions a;
  Engine eng(a, Point::zero_plus());
  eng.set_var_name("n");
  EXPECT_THROW(expand_str(eng, "fact(n)", a), UndefinedAtPoint);
}

TEST(Absorb, PaperExamples) {
  Assumptions a;
  Engine eng(a, Point::infinity());
  eng.set_var_name("n");
  GNum g = eng.absorb(expand_str(eng, "n^2+n+1", a));
  ASSERT_EQ(g.terms.size(), 1u);
  EXPECT_EQ(eng.render(g), "n^2");
  GNum h = eng.absorb(expand_str(eng, "3*n+5", a));
  EXPECT_EQ(eng.render(h), "3 * n");
  // Idempotence on a single term.
  EXPECT_TRUE(same_terms(eng.absorb(h), h));
  // Exact zero maps to exact zero.
  GNum z = eng.absorb(eng.exact_zero());
  EXPECT_TRUE(z.is_exact_zero());
}

TEST(Absorb, SumAbsorbsLowerOrder) {
  Assumptions a;
  Engine eng(a, Point::infinity());
  eng.set_var_name("n");
  GNum s = eng.add(expand_str(eng, "n^2", a), expand_str(eng, "ln(n)", a));
  ASSERT_EQ(s.terms.size(), 2u);
  GNum ab = eng.absorb(s);
  EXPECT_EQ(eng.render(ab), "n^2");
}

TEST(AbsorbProduct, LogDominanceAbsorbs) {
  Assumptions a = Assumptions::parse("c>0, c<1");
  Engine eng(a, Point::infinity());
  eng.set_var_name("n");
  GNum x = expand_str(eng, "c^n", a);
  GNum y = expand_str(eng, "n", a);
  GNum p = eng.absorb_product(x, y);
  EXPECT_TRUE(same_terms(p, x));  // c^n * n = c^n by log-dominance
  // No log-dominance between n^2 and n: full product n^3.
  GNum n2 = expand_str(eng, "n^2", a);
  GNum n1 = expand_str(eng, "n", a);
  GNum q = eng.absorb_product(n2, n1);
  EXPECT_EQ(eng.render(q), "n^3");
  // Multiplying by one is the identity.
  EXPECT_TRUE(same_terms(eng.absorb_product(n2, eng.one()), n2));
}

TEST(Components, PartitionExamples) {
  Assumptions a = Assumptions::parse("c>0");
  Engine eng(a, Point::infinity());
  eng.set_var_name("n");
  Components c1 = eng.components(expand_str(eng, "n + 1/n", a));
  EXPECT_EQ(c1.inf.terms.size(), 1u);
  EXPECT_EQ(c1.phi.terms.size(), 1u);
  EXPECT_TRUE(c1.real.is_zero());
  Components c2 = eng.components(expand_str(eng, "c + 1/n", a));
  EXPECT_TRUE(c2.inf.terms.empty());
  EXPECT_EQ(c2.real.str(), "c");
  Components c3 = eng.components(eng.exact_zero());
  EXPECT_TRUE(c3.inf.terms.empty());
  EXPECT_TRUE(c3.phi.terms.empty());
  EXPECT_TRUE(c3.real.is_zero());
}

TEST(Components, ReassemblyIsExact) {
  Assumptions a;
  ExprGen gen(99);
  Engine eng(a, Point::infinity());
  for (int i = 0; i < 60; ++i) {
    GNum x = eng.expand(gen.term(3));
    Components c = eng.components(x);
    GNum re = eng.add(eng.add(c.phi, eng.from_coeff(c.real)), c.inf);
    EXPECT_TRUE(same_terms(re, x));
  }
}

TEST(Classify, SevenFormsAndZero) {
  Assumptions a;
  Engine eng(a, Point::infinity());
  eng.set_var_name("n");
  EXPECT_EQ(eng.classify(expand_str(eng, "1/n", a)), Form::Phi);
  EXPECT_EQ(eng.classify(expand_str(eng, "n^2+1", a)), Form::RealInf);
  EXPECT_EQ(eng.classify(eng.exact_zero()), Form::ExactZero);
  EXPECT_EQ(eng.classify(expand_str(eng, "2+1/n", a)), Form::PhiReal);
  EXPECT_EQ(eng.classify(expand_str(eng, "n+1/n", a)), Form::PhiInf);
  EXPECT_EQ(eng.classify(expand_str(eng, "n+2+1/n", a)), Form::PhiRealInf);
  EXPECT_EQ(eng.classify(expand_str(eng, "5", a)), Form::Real);
  EXPECT_EQ(eng.classify(expand_str(eng, "n", a)), Form::Inf);
}

TEST(St, TransferExamples) {
  Assumptions a;
  Engine eng(a, Point::infinity());
  eng.set_var_name("n");
  EXPECT_EQ(eng.st(expand_str(eng, "2 + 1/n", a)).str(), "2");
  EXPECT_EQ(eng.st(expand_str(eng, "1/n", a)).str(), "0");
  EXPECT_EQ(eng.st(expand_str(eng, "n^2+n+1", a)).kind, ExtendedReal::Kind::PlusInfinity);
  EXPECT_EQ(eng.st(expand_str(eng, "1-n", a)).kind, ExtendedReal::Kind::MinusInfinity);
}

TEST(SignLeading, Examples) {
  Assumptions a;
  Engine eng(a, Point::infinity());
  eng.set_var_name("n");
  EXPECT_EQ(eng.sign_leading(expand_str(eng, "n^2-n", a)), Sign::Positive);
  EXPECT_EQ(eng.sign_leading(expand_str(eng, "0-1/n", a)), Sign::Negative);
  EXPECT_EQ(eng.sign_leading(eng.exact_zero()), Sign::Zero);
}

TEST(MulInv, IdentityWithinWindow) {
  Assumptions a;
  ExprGen gen(1234);
  Engine eng(a, Point::infinity());
  for (int i = 0; i < 80; ++i) {
    GNum x = eng.expand(gen.positive(3));
    if (x.terms.empty()) continue;
    GNum p = eng.mul(x, eng.inv(x));
    ASSERT_GE(p.terms.size(), 1u);
    EXPECT_TRUE(p.terms[0].mono.is_unit());
    EXPECT_TRUE(p.terms[0].coeff.is_one());
    EXPECT_EQ(p.terms.size(), 1u) << eng.render(p);
  }
}

TEST(FieldLaws, TruncatedSuite) {
  Assumptions a;
  ExprGen gen(5150);
  Engine eng(a, Point::infinity());
  int triples = 0;
  for (int i = 0; i < 150; ++i) {
    GNum x = eng.expand(gen.term(2));
    GNum y = eng.expand(gen.term(2));
    GNum z = eng.expand(gen.term(2));
    ++triples;
    // Addition commutes and associates exactly.
    EXPECT_TRUE(same_terms(eng.add(x, y), eng.add(y, x)));
    EXPECT_TRUE(
        agree_within_window(eng, eng.add(eng.add(x, y), z), eng.add(x, eng.add(y, z))));
    // Multiplication commutes; associativity/distributivity agree within the
    // truncation window.
    EXPECT_TRUE(same_terms(eng.mul(x, y), eng.mul(y, x)));
    EXPECT_TRUE(
        agree_within_window(eng, eng.mul(eng.mul(x, y), z), eng.mul(x, eng.mul(y, z))));
    EXPECT_TRUE(agree_within_window(eng, eng.mul(x, eng.add(y, z)),
                                    eng.add(eng.mul(x, y), eng.mul(x, z))));
    // Identities and inverses.
    EXPECT_TRUE(same_terms(eng.add(x, eng.exact_zero()), x));
    EXPECT_TRUE(same_terms(eng.mul(x, eng.one()), x));
    EXPECT_TRUE(eng.add(x, eng.neg(x)).terms.empty());
  }
  EXPECT_EQ(triples, 150);
}

TEST(FieldLaws, ScalarClosure) {
  Assumptions a;
  ExprGen gen(31337);
  Engine eng(a, Point::infinity());
  for (int i = 0; i < 60; ++i) {
    GNum phi = eng.expand(gen.positive_infinitesimal(2));
    Rational q = gen.rational(1, 9);
    EXPECT_EQ(eng.classify(eng.scale(phi, Coeff(q))), Form::Phi);
    GNum inf = eng.expand(gen.positive_divergent(2));
    Form f = eng.classify(eng.scale(inf, Coeff(q)));
    EXPECT_TRUE(f == Form::Inf || f == Form::RealInf || f == Form::PhiInf ||
                f == Form::PhiRealInf);
  }
}

TEST(PartitionOrder, PhiRealInfChain) {
  Assumptions a;
  ExprGen gen(777);
  Engine eng(a, Point::infinity());
  auto lt = [&](const GNum& u, const GNum& v) {
    return eng.sign_leading(eng.add(v, eng.neg(u))) == Sign::Positive;
  };
  for (int i = 0; i < 60; ++i) {
    GNum phi = eng.expand(gen.positive_infinitesimal(2));
    GNum r = eng.from_coeff(Coeff(gen.rational(1, 9)));
    GNum inf = eng.expand(gen.positive_divergent(2));
    EXPECT_TRUE(lt(phi, r));
    EXPECT_TRUE(lt(r, inf));
    EXPECT_TRUE(lt(phi, inf));
    EXPECT_EQ(eng.st(phi).str(), "0");
    EXPECT_EQ(eng.st(inf).kind, ExtendedReal::Kind::PlusInfinity);
  }
}

TEST(AbsorbLaw, AgreesWithComparison) {
  Assumptions a;
  ExprGen gen(2024);
  for (int i = 0; i < 50; ++i) {
    ExprPtr ae = gen.positive_divergent(2);
    ExprPtr be = gen.positive_divergent(2);
    RelationResult r = compare(ae, be, Point::infinity(), a, {ExpandOptions{}, false});
    Engine eng(a, Point::infinity());
    GNum sum = eng.expand(make_add({ae, be}));
    GNum absorbed = eng.absorb(sum);
    if (r.magnitude == Magnitude::MuchGreater) {
      EXPECT_TRUE(same_terms(absorbed, eng.absorb(eng.expand(ae))));
    } else if (r.magnitude == Magnitude::MuchLess) {
      EXPECT_TRUE(same_terms(absorbed, eng.absorb(eng.expand(be))));
    }
  }
}

TEST(StLimitAgreement, FiniteLimits) {
  Assumptions a;
  ExprGen gen(808);
  int checked = 0;
  for (int i = 0; i < 80; ++i) {
    ExprPtr e = gen.term(3);
    Engine eng(a, Point::infinity());
    ExtendedReal s{ExtendedReal::Kind::Finite, Coeff()};
    try {
      s = eng.st(eng.expand(e));
    } catch (const Error&) {
      continue;
    }
    if (!s.is_finite()) continue;
    LimitResult l = limit(e, Point::infinity(), a);
    ASSERT_TRUE(l.is_value());
    EXPECT_TRUE(l.value == s.value);
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

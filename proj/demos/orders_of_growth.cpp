// Walks the classic growth hierarchy and a few comparisons that are easy to
// state and awkward to prove by hand.

#include <iostream>

#include "gossamer/gossamer.hpp"

using namespace gossamer;

namespace {

void compare_and_print(const std::string& f, const std::string& g, const std::string& assume,
                       const std::string& var) {
  Assumptions a = Assumptions::parse(assume);
  ExprPtr fe = parse_expression(f, a).expr;
  ExprPtr ge = parse_expression(g, a).expr;
  RelationResult r = compare(fe, ge, Point::infinity(), a, {}, var);
  std::cout << "  " << f << "  " << relation_token(r.strongest()) << "  " << g << "    ["
            << r.landau << "]\n";
}

}  // namespace

int main() {
  std::cout << "The mixed scale at infinity:\n  ";
  ScaleChain chain = standard_scale(ScaleFamily::Mixed, 6, Point::infinity());
  for (std::size_t i = 0; i < chain.members.size(); ++i) {
    std::cout << print_expression(chain.members[i], "x");
    if (i + 1 < chain.members.size())
      std::cout << (chain.relations[i] == Relation::MuchLess ? " << " : " ?? ");
  }
  std::cout << "\n\nComparisons:\n";
  compare_and_print("ln(x)", "x^a", "a>0", "x");
  compare_and_print("e^x", "x^D", "D>0", "x");
  compare_and_print("n^n*n", "e^n*fact(n)", "", "n");
  compare_and_print("x^(ln(ln(x))/ln(ln(x+1)))", "x", "", "x");

  std::cout << "\nMost rapidly varying subexpressions of e^(x^2) + e^x + x^5:\n";
  Assumptions none;
  ExprPtr e = parse_expression("e^(x^2) + e^x + x^5").expr;
  for (const auto& m : mrv(e, Point::infinity(), none)) {
    std::cout << "  " << print_expression(m, "x") << "\n";
  }
  return 0;
}

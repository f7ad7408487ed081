// Limits evaluated by expansion and the standard-part transfer, plus the
// exact-rational Newton iteration for sqrt(2).

#include <iostream>

#include "gossamer/gossamer.hpp"

using namespace gossamer;

namespace {

void show_limit(const std::string& text, const std::string& at, const std::string& assume) {
  Assumptions a = Assumptions::parse(assume);
  auto eq = at.find('=');
  std::string var = at.substr(0, eq);
  Point p = parse_point_value(at.substr(eq + 1));
  ExprPtr e = parse_expression(text, a).expr;
  LimitResult r = limit(e, p, a, {}, var);
  std::cout << "  lim[" << at << "] " << text << " = " << r.str() << "\n";
}

}  // namespace

int main() {
  std::cout << "Limits by arguments of magnitude:\n";
  show_limit("(3*n+5)/(5*n)", "n=inf", "");
  show_limit("(x^2-a^2)/(x^2+2*a*x+a^2)", "x=0", "a>0");
  show_limit("(x^5+7*x^4+2)^(1/5)-x", "x=inf", "");
  show_limit("(a^x-b^x)/x", "x=0", "a>0,b>0");
  show_limit("((fact(n))^3/(n^(3*n)*e^-n))^(1/n)", "n=inf", "");
  show_limit("x^alpha*ln(x)", "x=0+", "alpha>0");
  show_limit("u/(u^2+1)^(1/2)", "u=inf", "");

  std::cout << "\nNewton iteration for sqrt(2), exact rationals from x0 = 3/2:\n";
  for (int i = 0; i <= 5; ++i) {
    Rational x = newton_sqrt2_demo(i);
    std::cout << "  x_" << i << " agrees with sqrt(2) to " << sqrt2_digits_correct(x)
              << " decimal places\n";
  }
  return 0;
}

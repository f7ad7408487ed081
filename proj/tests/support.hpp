#pragma once

// Shared helpers for the test suites: deterministic random expression
// generation and small conveniences.

#include <random>
#include <string>
#include <vector>

#include "gossamer/gossamer.hpp"

namespace gossamer::testing {

inline ExprPtr parse1(const std::string& s, const std::string& assume = "") {
  Assumptions a = Assumptions::parse(assume);
  return parse_expression(s, a).expr;
}

// Deterministic generator of smallish factorial-free expressions that stay
// real and finite on (0, inf).  Used for property suites.
class ExprGen {
 public:
  explicit ExprGen(unsigned seed) : rng_(seed) {}

  // A "safe" expression: built from positive atoms so that ln stays usable.
  ExprPtr positive(int depth) {
    switch (pick(depth == 0 ? 3 : 7)) {
      case 0:
        return make_rational(Rational(1 + pick(5)));
      case 1:
      case 2:
        return make_var();
      case 3: {
        std::vector<ExprPtr> f{positive(depth - 1), positive(depth - 1)};
        return make_mul(std::move(f));
      }
      case 4: {
        std::vector<ExprPtr> t{positive(depth - 1), positive(depth - 1)};
        return make_add(std::move(t));
      }
      case 5:
        return make_div(positive(depth - 1), positive(depth - 1));
      case 6: {
        // Powers and logs of something that visibly diverges keep the
        // generated corpus inside the real-valued grammar.
        ExprPtr base = divergent_atom();
        if (pick(2) == 0) return make_ln(base);
        return make_pow(base, make_rational(Rational(1 + pick(3), 1 + pick(2))));
      }
    }
    return make_var();
  }

  // A generic (possibly signed) expression.
  ExprPtr term(int depth) {
    ExprPtr e = positive(depth);
    if (pick(4) == 0) return make_neg(e);
    return e;
  }

  // Positive and divergent at infinity (useful for the relation table).
  ExprPtr positive_divergent(int depth) {
    ExprPtr core = divergent_atom();
    switch (pick(4)) {
      case 0:
        return core;
      case 1:
        return make_mul({make_rational(Rational(1 + pick(4))), core});
      case 2:
        return make_add({core, positive(depth > 0 ? depth - 1 : 0)});
      default:
        return make_mul({core, divergent_atom()});
    }
  }

  // Positive infinitesimal at infinity.
  ExprPtr positive_infinitesimal(int depth) {
    return make_div(make_rational(Rational(1 + pick(3))), positive_divergent(depth));
  }

  ExprPtr divergent_atom() {
    switch (pick(5)) {
      case 0:
        return make_var();
      case 1:
        return make_int_pow(make_var(), 2 + static_cast<long>(pick(3)));
      case 2:
        return make_ln(make_add({make_var(), make_rational(Rational(1 + pick(3)))}));
      case 3:
        return make_exp(make_var());
      default:
        return make_mul({make_var(), make_ln(make_add({make_var(), make_rational(Rational(2))}))});
    }
  }

  unsigned pick(unsigned n) { return std::uniform_int_distribution<unsigned>(0, n - 1)(rng_); }

  Rational rational(int lo, int hi, int den_max = 4) {
    int n = lo + static_cast<int>(pick(static_cast<unsigned>(hi - lo + 1)));
    int d = 1 + static_cast<int>(pick(static_cast<unsigned>(den_max)));
    return Rational(n, d);
  }

  std::mt19937& rng() { return rng_; }

 private:
  std::mt19937 rng_;
};

}  // namespace gossamer::testing

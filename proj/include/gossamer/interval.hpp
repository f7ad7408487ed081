#pragma once

// Certified sign decisions for parameter-free coefficients.  Values are
// enclosed in MPFR intervals with directed rounding; precision escalates
// until the interval separates from zero.  Equality-looking cases are left
// undecided (the canonical form already catches exact zero).

#include <mpfr.h>

#include <optional>

#include "gossamer/coeff.hpp"

namespace gossamer {

class MpInterval {
 public:
  explicit MpInterval(mpfr_prec_t prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
  }
  MpInterval(const MpInterval& o) {
    mpfr_init2(lo_, mpfr_get_prec(o.lo_));
    mpfr_init2(hi_, mpfr_get_prec(o.hi_));
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  MpInterval& operator=(const MpInterval& o) {
    if (this != &o) {
      mpfr_set_prec(lo_, mpfr_get_prec(o.lo_));
      mpfr_set_prec(hi_, mpfr_get_prec(o.hi_));
      mpfr_set(lo_, o.lo_, MPFR_RNDD);
      mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
  }
  ~MpInterval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  mpfr_prec_t prec() const { return mpfr_get_prec(lo_); }

  static MpInterval from_rational(const Rational& q, mpfr_prec_t prec) {
    MpInterval r(prec);
    // cpp_int -> string -> mpfr keeps this exact up to rounding.
    std::string n = num(q).str(), d = den(q).str();
    mpfr_t nn, dd;
    mpfr_init2(nn, prec + 64);
    mpfr_init2(dd, prec + 64);
    mpfr_set_str(nn, n.c_str(), 10, MPFR_RNDD);
    mpfr_set_str(dd, d.c_str(), 10, MPFR_RNDU);
    mpfr_div(r.lo_, nn, dd, MPFR_RNDD);
    mpfr_set_str(nn, n.c_str(), 10, MPFR_RNDU);
    mpfr_set_str(dd, d.c_str(), 10, MPFR_RNDD);
    mpfr_div(r.hi_, nn, dd, MPFR_RNDU);
    mpfr_clear(nn);
    mpfr_clear(dd);
    return r;
  }

  static MpInterval euler_e(mpfr_prec_t prec) {
    MpInterval r(prec);
    mpfr_t one;
    mpfr_init2(one, prec);
    mpfr_set_ui(one, 1, MPFR_RNDN);
    mpfr_exp(r.lo_, one, MPFR_RNDD);
    mpfr_exp(r.hi_, one, MPFR_RNDU);
    mpfr_clear(one);
    return r;
  }

  static MpInterval two_pi(mpfr_prec_t prec) {
    MpInterval r(prec);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    mpfr_mul_ui(r.lo_, r.lo_, 2, MPFR_RNDD);
    mpfr_mul_ui(r.hi_, r.hi_, 2, MPFR_RNDU);
    return r;
  }

  MpInterval operator+(const MpInterval& o) const {
    MpInterval r(prec());
    mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
    return r;
  }

  MpInterval operator*(const MpInterval& o) const {
    MpInterval r(prec());
    mpfr_t c[4];
    for (auto& x : c) mpfr_init2(x, prec());
    mpfr_mul(c[0], lo_, o.lo_, MPFR_RNDD);
    mpfr_mul(c[1], lo_, o.hi_, MPFR_RNDD);
    mpfr_mul(c[2], hi_, o.lo_, MPFR_RNDD);
    mpfr_mul(c[3], hi_, o.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, c[0], c[1], MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, c[2], MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, c[3], MPFR_RNDD);
    mpfr_mul(c[0], lo_, o.lo_, MPFR_RNDU);
    mpfr_mul(c[1], lo_, o.hi_, MPFR_RNDU);
    mpfr_mul(c[2], hi_, o.lo_, MPFR_RNDU);
    mpfr_mul(c[3], hi_, o.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, c[0], c[1], MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, c[2], MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, c[3], MPFR_RNDU);
    for (auto& x : c) mpfr_clear(x);
    return r;
  }

  std::optional<MpInterval> inverse() const {
    if (!separated_from_zero()) return std::nullopt;
    MpInterval r(prec());
    mpfr_ui_div(r.lo_, 1, hi_, MPFR_RNDD);
    mpfr_ui_div(r.hi_, 1, lo_, MPFR_RNDU);
    return r;
  }

  std::optional<MpInterval> log() const {
    if (mpfr_sgn(lo_) <= 0) return std::nullopt;
    MpInterval r(prec());
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
  }

  MpInterval exp() const {
    MpInterval r(prec());
    mpfr_exp(r.lo_, lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, hi_, MPFR_RNDU);
    return r;
  }

  // x^q for rational q; requires a positive interval unless q is an integer.
  std::optional<MpInterval> pow(const Rational& q) const {
    if (q == 0) return from_rational(Rational(1), prec());
    if (is_integer(q) && den(q) == 1) {
      long k = static_cast<long>(num(q));
      MpInterval acc = from_rational(Rational(1), prec());
      MpInterval base = *this;
      bool invert = k < 0;
      for (long i = 0; i < (invert ? -k : k); ++i) acc = acc * base;
      if (invert) return acc.inverse();
      return acc;
    }
    auto l = log();
    if (!l) return std::nullopt;
    return (*l * from_rational(q, prec())).exp();
  }

  bool separated_from_zero() const { return mpfr_sgn(lo_) > 0 || mpfr_sgn(hi_) < 0; }
  int definite_sign() const {
    if (mpfr_sgn(lo_) > 0) return 1;
    if (mpfr_sgn(hi_) < 0) return -1;
    return 0;
  }
  // Whole interval strictly above/below a rational bound.
  std::optional<bool> definitely_greater(const Rational& q) const {
    MpInterval b = from_rational(q, prec());
    if (mpfr_cmp(lo_, b.hi_) > 0) return true;
    if (mpfr_cmp(hi_, b.lo_) < 0) return false;
    return std::nullopt;
  }

 private:
  mpfr_t lo_, hi_;
};

namespace detail {

inline std::optional<MpInterval> symbol_interval(const Symbol& s, mpfr_prec_t prec);

inline std::optional<MpInterval> coeff_interval(const Coeff& c, mpfr_prec_t prec) {
  auto poly_interval = [&](const Poly& p) -> std::optional<MpInterval> {
    MpInterval acc = MpInterval::from_rational(Rational(0), prec);
    for (const auto& [m, q] : p.terms()) {
      MpInterval term = MpInterval::from_rational(q, prec);
      for (const auto& [s, e] : m.factors()) {
        auto base = symbol_interval(s, prec);
        if (!base) return std::nullopt;
        auto powed = base->pow(e);
        if (!powed) return std::nullopt;
        term = term * *powed;
      }
      acc = acc + term;
    }
    return acc;
  };
  auto n = poly_interval(c.num());
  if (!n) return std::nullopt;
  auto d = poly_interval(c.den());
  if (!d) return std::nullopt;
  auto inv = d->inverse();
  if (!inv) return std::nullopt;
  return *n * *inv;
}

inline std::optional<MpInterval> symbol_interval(const Symbol& s, mpfr_prec_t prec) {
  switch (s->kind) {
    case SymKind::Param:
      return std::nullopt;  // parameters have no numeric value
    case SymKind::EulerE:
      return MpInterval::euler_e(prec);
    case SymKind::TwoPi:
      return MpInterval::two_pi(prec);
    case SymKind::Prime:
      return MpInterval::from_rational(Rational(s->prime_value), prec);
    case SymKind::LnSym: {
      auto inner = symbol_interval(s->inner, prec);
      if (!inner) return std::nullopt;
      return inner->log();
    }
    case SymKind::LnPoly: {
      auto inner = coeff_interval(*s->arg, prec);
      if (!inner) return std::nullopt;
      return inner->log();
    }
    case SymKind::ExpPoly: {
      auto inner = coeff_interval(*s->arg, prec);
      if (!inner) return std::nullopt;
      return inner->exp();
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Sign of a parameter-free coefficient: +1/-1/0 when certified, nullopt when
// the value involves parameters or cannot be separated at max precision.
// Exact zero must be filtered out by the caller (canonical form).
inline std::optional<int> certified_constant_sign(const Coeff& c) {
  if (c.is_zero()) return 0;
  if (c.is_rational()) return sign_of(c.rational_value());
  if (!c.parameter_free()) return std::nullopt;
  for (mpfr_prec_t prec = 96; prec <= 8192; prec *= 2) {
    auto iv = detail::coeff_interval(c, prec);
    if (!iv) return std::nullopt;
    if (iv->separated_from_zero()) return iv->definite_sign();
  }
  return std::nullopt;
}

// Certified comparison of a parameter-free coefficient against a rational.
inline std::optional<bool> certified_greater_than(const Coeff& c, const Rational& bound) {
  if (c.is_rational()) return c.rational_value() > bound;
  if (!c.parameter_free()) return std::nullopt;
  for (mpfr_prec_t prec = 96; prec <= 8192; prec *= 2) {
    auto iv = detail::coeff_interval(c, prec);
    if (!iv) return std::nullopt;
    auto verdict = iv->definitely_greater(bound);
    if (verdict) return verdict;
  }
  return std::nullopt;
}

}  // namespace gossamer

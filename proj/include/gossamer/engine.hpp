#pragma once

// The expansion engine: turns expressions into truncated multiseries over a
// growth-ordered basis that extends itself on demand.  Every element of the
// basis is exp(tower) for a tower of strictly smaller growth (the main
// variable is exp(ln x), ln_k x is exp(ln_{k+1} x)), so ordering and
// rewriting are uniform: an exponential whose tower matches an existing
// tower's growth class is rewritten as a power of that element times a
// smaller exponential; otherwise it becomes a new comparison class.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gossamer/assumptions.hpp"
#include "gossamer/coeff.hpp"
#include "gossamer/expr.hpp"
#include "gossamer/point.hpp"
#include "gossamer/printer.hpp"
#include "gossamer/series.hpp"

namespace gossamer {

struct ExpandOptions {
  int terms = 8;        // truncation budget T
  int max_terms = 64;   // adaptive retry cap
  int depth_limit = 8;  // maximum tower nesting
};

namespace detail {
// Internal control flow: the current truncation window cannot decide; the
// enclosing retry loop doubles the budget.
struct NeedMoreTerms {};

// Exact Bernoulli numbers B_0..B_n via the defining recurrence.
inline const Rational& bernoulli(std::size_t n) {
  static std::vector<Rational> cache{Rational(1)};
  while (cache.size() <= n) {
    std::size_t m = cache.size();
    // sum_{j=0}^{m} C(m+1, j) B_j = 0
    Rational sum(0);
    Int binom = 1;  // C(m+1, 0)
    for (std::size_t j = 0; j < m; ++j) {
      sum += Rational(binom) * cache[j];
      binom = binom * Int(m + 1 - j) / Int(j + 1);
    }
    cache.push_back(-sum / Rational(binom));  // binom == C(m+1, m)
  }
  return cache[n];
}
}  // namespace detail

class Engine {
 public:
  Engine(const Assumptions& assume, Point point, ExpandOptions opts = {})
      : assume_(&assume), point_(point), opts_(opts), terms_(opts.terms) {
    working_side_ = point.side == Side::Both ? Side::Plus : point.side;
  }
  Engine(const Assumptions& assume, Point point, Side side, ExpandOptions opts = {})
      : assume_(&assume), point_(point), opts_(opts), terms_(opts.terms), working_side_(side) {}

  const Assumptions& assumptions() const { return *assume_; }
  const Point& point() const { return point_; }
  int window() const { return terms_; }

  // -------------------------------------------------------------- retries

  // Runs `f`, doubling the truncation budget whenever the window cannot
  // decide, up to the configured cap.
  template <class F>
  auto with_retry(F f) {
    struct Guard {
      int& depth;
      explicit Guard(int& d) : depth(d) { ++depth; }
      ~Guard() { --depth; }
    } guard(retry_active_);
    for (terms_ = opts_.terms;; terms_ *= 2) {
      // The basis is append-only for the engine's lifetime so that monomials
      // of previously returned values stay meaningful; a retry only clears
      // the expression cache (entries were computed at the old budget).
      cache_.clear();
      try {
        return f();
      } catch (const detail::NeedMoreTerms&) {
        if (terms_ * 2 > opts_.max_terms)
          throw PrecisionExhausted("truncation budget " + std::to_string(terms_) +
                                   " cannot separate the needed terms");
      }
    }
  }

  // Public methods outside a retry loop surface window exhaustion as
  // PrecisionExhausted instead of the internal control-flow type.
  template <class F>
  auto shielded(F f) {
    if (retry_active_ > 0) return f();
    try {
      return f();
    } catch (const detail::NeedMoreTerms&) {
      throw PrecisionExhausted("truncation window cannot decide; re-expand with more terms");
    }
  }

  // ------------------------------------------------------------ expansion

  // Public entry: shifts the expression to the working infinity and expands
  // with adaptive retries.
  GNum expand(const ExprPtr& e) {
    ExprPtr shifted = shift_expr(e);
    return with_retry([&] { return expand_shifted(shifted); });
  }

  // Expansion of an already-shifted expression at the current budget.
  GNum expand_shifted(const ExprPtr& e) {
    auto it = cache_.find(e.get());
    if (it != cache_.end()) return it->second;
    GNum g = expand_uncached(e);
    g.point = point_;
    cache_.emplace(e.get(), g);
    return g;
  }

  ExprPtr shift_expr(const ExprPtr& e) const {
    if (point_.is_infinity()) return e;
    try {
      return shift_to_infinity(e, point_, working_side_);
    } catch (const FactorialDomainError& err) {
      throw UndefinedAtPoint(std::string("factorial is only defined toward infinity: ") +
                             err.what());
    }
  }

  // ----------------------------------------------------------- arithmetic

  GNum add(const GNum& a, const GNum& b) {
    std::vector<GTerm> terms = a.terms;
    terms.insert(terms.end(), b.terms.begin(), b.terms.end());
    return normalize(std::move(terms), combine_tails(a.tail, b.tail));
  }

  GNum neg(const GNum& a) { return scale(a, Coeff(Rational(-1))); }

  GNum scale(const GNum& a, const Coeff& c) {
    if (c.is_zero()) return exact_zero();
    std::vector<GTerm> terms;
    terms.reserve(a.terms.size());
    for (const auto& t : a.terms) terms.push_back({t.coeff * c, t.mono});
    return normalize(std::move(terms), a.tail);
  }

  GNum mul(const GNum& a, const GNum& b) {
    if (a.is_exact_zero() || b.is_exact_zero()) return exact_zero();
    std::vector<GTerm> terms;
    terms.reserve(a.terms.size() * b.terms.size());
    for (const auto& ta : a.terms)
      for (const auto& tb : b.terms)
        terms.push_back({ta.coeff * tb.coeff, mono_mul(ta.mono, tb.mono)});
    Tail tail = Tail::exact();
    if (a.tail.exhausted) tail = combine_tails(tail, shifted_tail(a.tail, b));
    if (b.tail.exhausted) tail = combine_tails(tail, shifted_tail(b.tail, a));
    return normalize(std::move(terms), tail);
  }

  GNum inv(const GNum& a) {
    return shielded([&] {
      if (a.is_exact_zero()) throw DivisionByExactZero("reciprocal of exact zero");
      if (a.terms.empty()) throw detail::NeedMoreTerms{};
      const GTerm& lead = a.terms.front();
      // a = c*m*(1 + r); 1/a = (1/c)*m^-1 * sum (-r)^k
      GNum r = remainder_ratio(a);
      GNum series = geometric(neg(r));
      return mul_term(series, lead.coeff, lead.mono, true);
    });
  }

  GNum div(const GNum& a, const GNum& b) { return mul(a, inv(b)); }

  // -------------------------------------------------- component structure

  // Growth of a monomial against 1: -1 infinitesimal, 0 unit, +1 infinite.
  int mono_vs_one(const GMonomial& m) {
    for (const auto& [id, e] : ranked_desc(m)) {
      Sign s = assume_->sign(e);
      if (s == Sign::Positive) return 1;
      if (s == Sign::Negative) return -1;
      if (s == Sign::Zero) continue;
      throw AssumptionNeeded("cannot resolve the sign of the exponent of " + element_name(id),
                             e.str());
    }
    return 0;
  }

  // Strict growth comparison of two monomials at the working infinity.
  int growth_cmp(const GMonomial& a, const GMonomial& b) {
    GMonomial q = mono_mul(a, mono_pow(b, Coeff(Rational(-1))));
    return mono_vs_one(q);
  }

  Components components(const GNum& x) {
    return shielded([&] { return components_impl(x); });
  }
  Components components_impl(const GNum& x) {
    Components out;
    out.phi.point = out.inf.point = x.point;
    if (x.tail.exhausted) {
      if (!x.tail.bound) throw detail::NeedMoreTerms{};
      int c = mono_vs_one(*x.tail.bound);
      if (c < 0)
        out.phi.tail = x.tail;  // unknown remainder is infinitesimal
      else if (c > 0)
        out.inf.tail = x.tail;  // unknown remainder dominated by an infinity
      else
        throw detail::NeedMoreTerms{};  // could hide a real contribution
    }
    for (const auto& t : x.terms) {
      int c = mono_vs_one(t.mono);
      if (c > 0)
        out.inf.terms.push_back(t);
      else if (c < 0)
        out.phi.terms.push_back(t);
      else
        out.real = out.real + t.coeff;
    }
    return out;
  }

  Form classify(const GNum& x) {
    return shielded([&] { return classify_impl(x); });
  }
  Form classify_impl(const GNum& x) {
    if (x.is_exact_zero()) return Form::ExactZero;
    Components c = components_impl(x);
    // With an infinite-growth tail bound the dominant form needs at least
    // one retained infinite term; sub-dominant flags reflect retained terms.
    if (c.inf.terms.empty() && c.inf.tail.exhausted) throw detail::NeedMoreTerms{};
    bool phi = !c.phi.terms.empty() || c.phi.tail.exhausted;
    bool real = !c.real.is_zero();
    bool inf = !c.inf.terms.empty();
    if (phi && real && inf) return Form::PhiRealInf;
    if (phi && real) return Form::PhiReal;
    if (phi && inf) return Form::PhiInf;
    if (real && inf) return Form::RealInf;
    if (inf) return Form::Inf;
    if (real) return Form::Real;
    if (phi) return Form::Phi;
    return Form::ExactZero;  // exhausted with nothing retained is caught above
  }

  ExtendedReal st(const GNum& x) {
    return shielded([&] { return st_impl(x); });
  }
  ExtendedReal st_impl(const GNum& x) {
    if (x.is_exact_zero()) return ExtendedReal::finite(Coeff());
    Components c = components_impl(x);
    if (!c.inf.terms.empty()) {
      Sign s = assume_->require_known(c.inf.terms.front().coeff, "the leading coefficient");
      return s == Sign::Positive ? ExtendedReal::plus_infinity() : ExtendedReal::minus_infinity();
    }
    if (c.inf.tail.exhausted) throw detail::NeedMoreTerms{};
    return ExtendedReal::finite(c.real);
  }

  // Keeps the maximal growth class (the single leading term).
  GNum absorb(const GNum& x) {
    return shielded([&] { return absorb_impl(x); });
  }
  GNum absorb_impl(const GNum& x) {
    if (x.terms.empty()) return x.tail.exhausted ? throw detail::NeedMoreTerms{} : x;
    GNum out;
    out.point = x.point;
    out.terms.push_back(x.terms.front());
    return out;
  }

  // x * y simplified to x when x log-dominates y (both positive).
  GNum absorb_product(const GNum& x, const GNum& y) {
    return shielded([&] {
      if (is_one(y)) return x;
      if (log_dominates_impl(x, y)) return x;
      return mul(x, y);
    });
  }

  // ln-growth comparison: true iff ln x has strictly larger growth than
  // ln y.  Requires positive leading terms.
  bool log_dominates(const GNum& x, const GNum& y) {
    return shielded([&] { return log_dominates_impl(x, y); });
  }
  bool log_dominates_impl(const GNum& x, const GNum& y) {
    GNum lx = expand_ln_impl(x);
    GNum ly = expand_ln_impl(y);
    if (lx.terms.empty() || ly.terms.empty()) {
      if (lx.terms.empty() && lx.tail.exhausted) throw detail::NeedMoreTerms{};
      if (ly.terms.empty() && ly.tail.exhausted) throw detail::NeedMoreTerms{};
      // ln == exact 0 on one side: dominance needs the other side infinite.
      if (!lx.terms.empty()) return mono_vs_one(lx.terms.front().mono) > 0;
      return false;
    }
    int c = growth_cmp(lx.terms.front().mono, ly.terms.front().mono);
    if (c <= 0) return false;
    return mono_vs_one(lx.terms.front().mono) > 0;
  }

  Sign sign_leading(const GNum& x) {
    return shielded([&] {
      if (x.is_exact_zero()) return Sign::Zero;
      if (x.terms.empty()) throw detail::NeedMoreTerms{};
      return assume_->sign(x.terms.front().coeff);
    });
  }

  // ------------------------------------------------------------- the basis

  struct BasisView {
    std::vector<BasisElementPtr> ascending;  // by growth
  };
  BasisView basis() const {
    BasisView v;
    for (int id : rank_) v.ascending.push_back(elements_[static_cast<std::size_t>(id)]);
    return v;
  }

  std::string element_name(int id) const {
    const auto& e = elements_[static_cast<std::size_t>(id)];
    switch (e->kind) {
      case BasisElement::Kind::VarItself:
        return var_name_;
      case BasisElement::Kind::IterLog: {
        std::string s = var_name_;
        for (int i = 0; i < e->log_depth; ++i) s = "ln(" + s + ")";
        return s;
      }
      case BasisElement::Kind::IterExp:
        return "exp(" + render(*e->tower) + ")";
    }
    return "?";
  }

  std::string render_mono(const GMonomial& m) const {
    if (m.is_unit()) return "1";
    std::string out;
    auto ranked = ranked_desc_const(m);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      if (i) out += "*";
      out += element_name(ranked[i].first);
      const Coeff& e = ranked[i].second;
      if (!e.is_one()) {
        std::string es = e.str();
        bool atom = e.is_rational() && e.rational_value() >= 0 && is_integer(e.rational_value());
        out += atom ? "^" + es : "^(" + es + ")";
      }
    }
    return out;
  }

  std::string render_term(const GTerm& t) const {
    std::string c = t.coeff.str();
    if (t.mono.is_unit()) return c;
    if (t.coeff.is_one()) return render_mono(t.mono);
    if (t.coeff.is_rational() && t.coeff.rational_value() == -1)
      return "-" + render_mono(t.mono);
    bool wrap = !t.coeff.is_rational() && t.coeff.num().size() > 1;
    if (wrap) c = "(" + c + ")";
    return c + " * " + render_mono(t.mono);
  }

  std::string render(const GNum& x) const {
    if (x.is_exact_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < x.terms.size(); ++i) {
      std::string t = render_term(x.terms[i]);
      if (i == 0) {
        out = t;
      } else if (!t.empty() && t[0] == '-') {
        out += " - " + t.substr(1);
      } else {
        out += " + " + t;
      }
    }
    if (x.tail.exhausted) {
      if (!out.empty()) out += " + ";
      out += "O(" + (x.tail.bound ? render_mono(*x.tail.bound) : std::string("...")) + ")";
    }
    return out;
  }

  void set_var_name(std::string n) { var_name_ = std::move(n); }
  const std::string& var_name() const { return var_name_; }

  // ------------------------------------------------------- basic builders

  GNum exact_zero() const {
    GNum g;
    g.point = point_;
    return g;
  }
  GNum from_coeff(const Coeff& c) {
    GNum g = exact_zero();
    if (!c.is_zero() && assume_->sign(c) != Sign::Zero) g.terms.push_back({c, GMonomial{}});
    return g;
  }
  GNum one() { return from_coeff(Coeff(Rational(1))); }

  bool is_one(const GNum& g) const {
    return g.terms.size() == 1 && !g.tail.exhausted && g.terms[0].mono.is_unit() &&
           g.terms[0].coeff.is_one();
  }

  // ----------------------------------------------------- ln / exp kernels

  // ln of a multiseries with positive leading term.
  GNum expand_ln(const GNum& a) {
    return shielded([&] { return expand_ln_impl(a); });
  }
  GNum expand_ln_impl(const GNum& a) {
    if (a.is_exact_zero()) throw UndefinedAtPoint("ln of exact zero");
    if (a.terms.empty()) throw detail::NeedMoreTerms{};
    const GTerm lead = a.terms.front();
    Sign s = assume_->sign(lead.coeff);
    if (s == Sign::Negative)
      throw UndefinedAtPoint("ln of a quantity with negative leading sign (" +
                             lead.coeff.str() + ")");
    if (s == Sign::Unknown)
      throw AssumptionNeeded("ln requires a known-positive leading coefficient",
                             lead.coeff.str());
    GNum acc = ln_monomial(lead.mono);
    acc = add(acc, from_coeff(coeff_ln(lead.coeff)));
    GNum r = remainder_ratio(a);  // all terms < 1
    acc = add(acc, log1p(r));
    return acc;
  }

  // exp of any multiseries.
  GNum expand_exp(const GNum& a) {
    return shielded([&] { return expand_exp_impl(a); });
  }
  GNum expand_exp_impl(const GNum& a) {
    if (a.is_exact_zero()) return one();
    if (a.tail.exhausted) {
      if (!a.tail.bound || mono_vs_one(*a.tail.bound) >= 0) throw detail::NeedMoreTerms{};
    }
    GNum big = exact_zero(), small = exact_zero();
    Coeff c0;
    for (const auto& t : a.terms) {
      int c = mono_vs_one(t.mono);
      if (c > 0)
        big.terms.push_back(t);
      else if (c < 0)
        small.terms.push_back(t);
      else
        c0 = c0 + t.coeff;
    }
    small.tail = a.tail;
    GNum out = exp_taylor(small);
    if (!c0.is_zero()) out = scale(out, exp_of_coeff(c0));
    if (!big.terms.empty()) out = mul(exp_infinite(big), out);
    return out;
  }

  // --------------------------------------------------------- full expander

  GNum expand_uncached(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::Rational:
        return from_coeff(Coeff(e->value));
      case ExprKind::Param:
        return from_coeff(Coeff::from_symbol(SymbolNode::param(e->name)));
      case ExprKind::Var: {
        GNum g = exact_zero();
        g.terms.push_back({Coeff(Rational(1)), mono_single(ensure_var(), Coeff(Rational(1)))});
        return g;
      }
      case ExprKind::Add: {
        GNum acc = exact_zero();
        for (const auto& k : e->kids) acc = add(acc, expand_shifted(k));
        return acc;
      }
      case ExprKind::Mul: {
        GNum acc = one();
        for (const auto& k : e->kids) acc = mul(acc, expand_shifted(k));
        return acc;
      }
      case ExprKind::Div: {
        GNum d = expand_shifted(e->kids[1]);
        if (d.is_exact_zero())
          throw DivisionByExactZero("denominator expands to exact zero: " +
                                    print_expression(e->kids[1], var_name_));
        return mul(expand_shifted(e->kids[0]), inv(d));
      }
      case ExprKind::Ln:
        return expand_ln_impl(expand_shifted(e->kids[0]));
      case ExprKind::Exp:
        return expand_exp_impl(expand_shifted(e->kids[0]));
      case ExprKind::Fact:
        return expand_fact(e->kids[0]);
    }
    throw Error("unreachable");
  }

 private:
  // ---------------------------------------------------------- basis state

  int ensure_var() {
    if (var_id_ >= 0) return var_id_;
    auto e = std::make_shared<BasisElement>();
    e->kind = BasisElement::Kind::VarItself;
    e->id = next_id();
    elements_.push_back(e);
    // The variable outgrows every iterated log; exps are inserted later.
    rank_.push_back(e->id);
    var_id_ = e->id;
    return var_id_;
  }

  int ensure_log(int depth) {
    ensure_var();
    while (static_cast<int>(log_ids_.size()) < depth) {
      int k = static_cast<int>(log_ids_.size()) + 1;
      if (k > opts_.depth_limit)
        throw DepthLimit("iterated-log depth " + std::to_string(k) + " exceeds the limit");
      auto e = std::make_shared<BasisElement>();
      e->kind = BasisElement::Kind::IterLog;
      e->log_depth = k;
      e->id = next_id();
      elements_.push_back(e);
      // Insert immediately below ln_{k-1} (below the variable for k == 1).
      int above = k == 1 ? var_id_ : log_ids_[static_cast<std::size_t>(k - 2)];
      auto pos = std::find(rank_.begin(), rank_.end(), above);
      rank_.insert(pos, e->id);
      log_ids_.push_back(e->id);
    }
    return log_ids_[static_cast<std::size_t>(depth - 1)];
  }

  // Leading monomial of the tower of `id`, materializing deeper logs.
  GMonomial tower_lead(int id) {
    const auto& e = elements_[static_cast<std::size_t>(id)];
    switch (e->kind) {
      case BasisElement::Kind::VarItself:
        return mono_single(ensure_log(1), Coeff(Rational(1)));
      case BasisElement::Kind::IterLog:
        return mono_single(ensure_log(e->log_depth + 1), Coeff(Rational(1)));
      case BasisElement::Kind::IterExp:
        return e->tower->terms.front().mono;
    }
    throw Error("unreachable");
  }

  GNum tower_of(int id) {
    const auto& e = elements_[static_cast<std::size_t>(id)];
    switch (e->kind) {
      case BasisElement::Kind::VarItself:
      case BasisElement::Kind::IterLog: {
        GNum g = exact_zero();
        g.terms.push_back({Coeff(Rational(1)), tower_lead(id)});
        return g;
      }
      case BasisElement::Kind::IterExp:
        return *e->tower;
    }
    throw Error("unreachable");
  }

  int insert_exp_class(const GNum& tower, int above_id) {
    int depth = 1;
    for (const auto& t : tower.terms)
      for (const auto& [id, exp_] : t.mono.powers)
        depth = std::max(depth, elements_[static_cast<std::size_t>(id)]->nest_depth + 1);
    if (depth > opts_.depth_limit)
      throw DepthLimit("exponential tower nesting " + std::to_string(depth) +
                       " exceeds the limit");
    auto e = std::make_shared<BasisElement>();
    e->kind = BasisElement::Kind::IterExp;
    e->id = next_id();
    e->nest_depth = depth;
    e->tower = std::make_shared<const GNum>(tower);
    elements_.push_back(e);
    auto pos = std::find(rank_.begin(), rank_.end(), above_id);
    rank_.insert(pos + 1, e->id);
    return e->id;
  }

  int next_id() const { return static_cast<int>(elements_.size()); }

  // --------------------------------------------------------- monomial ops

  GMonomial mono_single(int id, Coeff e) {
    GMonomial m;
    if (!e.is_zero() && assume_->sign(e) != Sign::Zero) m.powers.emplace_back(id, std::move(e));
    return m;
  }

  GMonomial mono_mul(const GMonomial& a, const GMonomial& b) {
    GMonomial r;
    std::size_t i = 0, j = 0;
    while (i < a.powers.size() || j < b.powers.size()) {
      if (j == b.powers.size()) {
        r.powers.push_back(a.powers[i++]);
      } else if (i == a.powers.size()) {
        r.powers.push_back(b.powers[j++]);
      } else if (a.powers[i].first < b.powers[j].first) {
        r.powers.push_back(a.powers[i++]);
      } else if (a.powers[i].first > b.powers[j].first) {
        r.powers.push_back(b.powers[j++]);
      } else {
        Coeff e = a.powers[i].second + b.powers[j].second;
        if (!e.is_zero() && assume_->sign(e) != Sign::Zero)
          r.powers.emplace_back(a.powers[i].first, std::move(e));
        ++i, ++j;
      }
    }
    return r;
  }

  GMonomial mono_pow(const GMonomial& m, const Coeff& e) {
    GMonomial r;
    if (e.is_zero()) return r;
    for (const auto& [id, x] : m.powers) {
      Coeff p = x * e;
      if (!p.is_zero() && assume_->sign(p) != Sign::Zero) r.powers.emplace_back(id, std::move(p));
    }
    return r;
  }

  std::vector<std::pair<int, Coeff>> ranked_desc(const GMonomial& m) const {
    return ranked_desc_const(m);
  }
  std::vector<std::pair<int, Coeff>> ranked_desc_const(const GMonomial& m) const {
    std::vector<std::pair<int, Coeff>> out(m.powers.begin(), m.powers.end());
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
      return rank_of(a.first) > rank_of(b.first);
    });
    return out;
  }

  int rank_of(int id) const {
    for (std::size_t i = 0; i < rank_.size(); ++i)
      if (rank_[i] == id) return static_cast<int>(i);
    throw Error("basis element not ranked");
  }

  // ------------------------------------------------------- normalization

  GNum normalize(std::vector<GTerm> terms, Tail tail) {
    // Drop terms whose coefficient is canonically or provably zero.
    std::vector<GTerm> kept;
    kept.reserve(terms.size());
    for (auto& t : terms) {
      if (t.coeff.is_zero()) continue;
      if (!t.coeff.is_rational() && assume_->sign(t.coeff) == Sign::Zero) continue;
      kept.push_back(std::move(t));
    }
    std::sort(kept.begin(), kept.end(),
              [&](const GTerm& a, const GTerm& b) { return growth_cmp(a.mono, b.mono) > 0; });
    std::vector<GTerm> merged;
    for (auto& t : kept) {
      if (!merged.empty() && merged.back().mono == t.mono) {
        merged.back().coeff = merged.back().coeff + t.coeff;
        if (merged.back().coeff.is_zero() ||
            (!merged.back().coeff.is_rational() &&
             assume_->sign(merged.back().coeff) == Sign::Zero))
          merged.pop_back();
        continue;
      }
      // Equal-growth monomials that are not structurally equal can appear
      // when exponents differ by an assumption-zero combination; merge via
      // growth comparison instead of structural equality.
      if (!merged.empty() && growth_cmp(merged.back().mono, t.mono) == 0) {
        merged.back().coeff = merged.back().coeff + t.coeff;
        if (merged.back().coeff.is_zero() ||
            (!merged.back().coeff.is_rational() &&
             assume_->sign(merged.back().coeff) == Sign::Zero))
          merged.pop_back();
        continue;
      }
      merged.push_back(std::move(t));
    }
    // Truncate to the window.
    if (static_cast<int>(merged.size()) > terms_) {
      Tail dropped{true, merged[static_cast<std::size_t>(terms_)].mono};
      merged.resize(static_cast<std::size_t>(terms_));
      tail = combine_tails(tail, dropped);
    }
    // Terms at or below the tail bound are unreliable.
    if (tail.exhausted && tail.bound) {
      while (!merged.empty()) {
        int c;
        try {
          c = growth_cmp(merged.back().mono, *tail.bound);
        } catch (const AssumptionNeeded&) {
          break;
        }
        if (c > 0) break;
        merged.pop_back();
      }
    }
    GNum out;
    out.point = point_;
    out.terms = std::move(merged);
    out.tail = tail;
    return out;
  }

  Tail combine_tails(const Tail& a, const Tail& b) {
    if (!a.exhausted) return b;
    if (!b.exhausted) return a;
    if (!a.bound || !b.bound) return {true, std::nullopt};
    try {
      int c = growth_cmp(*a.bound, *b.bound);
      return {true, c >= 0 ? a.bound : b.bound};
    } catch (const AssumptionNeeded&) {
      return {true, std::nullopt};
    }
  }

  // Tail of `t` multiplied by the series b (bound shifts by b's lead).
  Tail shifted_tail(const Tail& t, const GNum& b) {
    if (!t.exhausted) return t;
    if (!t.bound) return {true, std::nullopt};
    if (b.terms.empty()) {
      if (!b.tail.exhausted) return Tail::exact();  // b exact zero: 0 * O(..) = 0
      if (!b.tail.bound) return {true, std::nullopt};
      return {true, mono_mul(*t.bound, *b.tail.bound)};
    }
    return {true, mono_mul(*t.bound, b.terms.front().mono)};
  }

  // a / leading(a) - 1: the infinitesimal remainder ratio.
  GNum remainder_ratio(const GNum& a) {
    const GTerm& lead = a.terms.front();
    GNum scaled = mul_term(a, lead.coeff, lead.mono, true);
    // Remove the unit leading term (exactly 1).
    GNum out = scaled;
    if (!out.terms.empty() && out.terms.front().mono.is_unit()) {
      Coeff c = out.terms.front().coeff - Coeff(Rational(1));
      out.terms.erase(out.terms.begin());
      if (!c.is_zero()) {
        std::vector<GTerm> ts = out.terms;
        ts.push_back({c, GMonomial{}});
        return normalize(std::move(ts), out.tail);
      }
    }
    return out;
  }

  // a * c^{+-1} * m^{+-1}
  GNum mul_term(const GNum& a, const Coeff& c, const GMonomial& m, bool invert) {
    Coeff factor = invert ? Coeff(Rational(1)) / c : c;
    GMonomial mono = invert ? mono_pow(m, Coeff(Rational(-1))) : m;
    std::vector<GTerm> terms;
    terms.reserve(a.terms.size());
    for (const auto& t : a.terms) terms.push_back({t.coeff * factor, mono_mul(t.mono, mono)});
    Tail tail = a.tail;
    if (tail.exhausted && tail.bound) tail.bound = mono_mul(*tail.bound, mono);
    return normalize(std::move(terms), tail);
  }

  // ------------------------------------------------------------- series

  // sum_k q_k r^k with r infinitesimal; q supplied per index, q_0 included.
  GNum power_series(const GNum& r, const std::function<Rational(int)>& q) {
    GNum acc = from_coeff(Coeff(q(0)));
    if (r.is_exact_zero()) return acc;
    GNum pw = one();
    int cap = 2 * terms_ + 8;
    for (int k = 1; k <= cap; ++k) {
      pw = mul(pw, r);
      if (pw.terms.empty()) {
        if (pw.tail.exhausted) acc.tail = combine_tails(acc.tail, pw.tail);
        return acc;
      }
      acc = add(acc, scale(pw, Coeff(q(k))));
      // Stop when the next power can no longer touch retained terms.
      if (static_cast<int>(acc.terms.size()) >= terms_) {
        try {
          if (growth_cmp(pw.terms.front().mono, acc.terms.back().mono) < 0) {
            acc.tail = combine_tails(acc.tail, Tail{true, pw.terms.front().mono});
            return normalize(std::move(acc.terms), acc.tail);
          }
        } catch (const AssumptionNeeded&) {
          // fall through to the cap
        }
      }
    }
    acc.tail = combine_tails(acc.tail, Tail{true, pw.terms.empty()
                                                      ? std::optional<GMonomial>()
                                                      : std::optional<GMonomial>(
                                                            pw.terms.front().mono)});
    return normalize(std::move(acc.terms), acc.tail);
  }

  GNum geometric(const GNum& r) {  // 1/(1 - r)
    return power_series(r, [](int) { return Rational(1); });
  }

  GNum log1p(const GNum& r) {  // ln(1 + r)
    return power_series(r, [](int k) {
      if (k == 0) return Rational(0);
      return Rational(k % 2 == 1 ? 1 : -1, k);
    });
  }

  GNum exp_taylor(const GNum& r) {  // exp(r), r infinitesimal
    return power_series(r, [state = Rational(1), k0 = 0](int k) mutable {
      if (k == 0) return Rational(1);
      while (k0 < k) {
        ++k0;
        state /= k0;
      }
      return state;
    });
  }

  // ------------------------------------------------------- ln of monomial

  GNum ln_monomial(const GMonomial& m) {
    GNum acc = exact_zero();
    for (const auto& [id, e] : m.powers) acc = add(acc, scale(tower_of(id), e));
    return acc;
  }

  // ln of a positive coefficient; falls back to an opaque constant whenever
  // a factor's sign is not provably positive.
  Coeff coeff_ln(const Coeff& c) {
    auto positive_monomial = [&](const SymMonomial& m, const Rational& q) {
      if (q <= 0) return false;
      for (const auto& [s, e] : m.factors())
        if (assume_->symbol_sign(s) != Sign::Positive) return false;
      return true;
    };
    const Poly& n = c.num();
    bool decomposable = c.den().is_constant() && c.den().constant_value() > 0;
    if (decomposable && n.size() == 1)
      decomposable = positive_monomial(n.terms()[0].first, n.terms()[0].second);
    if (decomposable)
      return ln_of_coeff(c);
    return Coeff::from_symbol(SymbolNode::ln_poly(std::make_shared<const Coeff>(c)));
  }

  // ----------------------------------------------------- exp of infinities

  // exp of a purely infinite multiseries: rewrite along existing towers,
  // else create a new comparison class.
  GNum exp_infinite(GNum h) {
    GMonomial result = GMonomial{};
    int guard = 4 * terms_ + 32;
    while (!h.terms.empty()) {
      if (--guard < 0) throw PrecisionExhausted("exponential rewrite did not terminate");
      const GTerm lead = h.terms.front();
      // Find the first element (descending) whose tower is not above lead.
      bool rewritten = false;
      for (int attempt = 0; attempt < opts_.depth_limit + 2 && !rewritten; ++attempt) {
        bool restart = false;
        for (std::size_t i = rank_.size(); i-- > 0;) {
          int id = rank_[i];
          std::size_t elems_before = elements_.size();
          GMonomial tl = tower_lead(id);
          if (elements_.size() != elems_before) {
            restart = true;  // materialized a deeper log; ranks changed
            break;
          }
          int c = growth_cmp(lead.mono, tl);
          if (c < 0) continue;
          if (c == 0) {
            // h = ratio * tower + rest; exp(h) = elem^ratio * exp(rest)
            GNum tow = tower_of(id);
            Coeff ratio = lead.coeff / tow.terms.front().coeff;
            result = mono_mul(result, mono_single(id, ratio));
            h = add(h, scale(tow, -ratio));
            rewritten = true;
            break;
          }
          // lead outgrows this tower: new class directly above element id.
          // The new tower absorbs all of h (h itself is the exponent).
          Sign s = assume_->require_known(lead.coeff, "the leading coefficient of an exponent");
          if (h.tail.exhausted && (!h.tail.bound || mono_vs_one(*h.tail.bound) >= 0))
            throw detail::NeedMoreTerms{};  // unknown non-infinitesimal exponent part
          GNum tower = s == Sign::Positive ? h : neg(h);
          Tail h_tail = tower.tail;
          tower.tail = Tail::exact();
          int nid = insert_exp_class(tower, id);
          GMonomial factor =
              mono_single(nid, Coeff(s == Sign::Positive ? Rational(1) : Rational(-1)));
          GMonomial head = mono_mul(result, factor);
          GNum out = exact_zero();
          out.terms.push_back({Coeff(Rational(1)), head});
          if (h_tail.exhausted)  // exp(x + O(phi)) = elem * (1 + O(phi))
            out.tail = Tail{true, h_tail.bound ? std::optional<GMonomial>(mono_mul(
                                                     head, *h_tail.bound))
                                               : std::nullopt};
          return out;
        }
        if (!restart) break;
      }
      if (!rewritten && !h.terms.empty()) {
        // lead is below every existing tower, including the deepest log:
        // materialize one deeper log and try again (bounded by depth).
        std::size_t before = elements_.size();
        ensure_log(static_cast<int>(log_ids_.size()) + 1);
        if (elements_.size() == before)
          throw DepthLimit("cannot place the exponential class within the depth limit");
      }
      // Re-split: the subtraction may have produced real/small terms.
      if (rewritten) {
        GNum big = exact_zero();
        Coeff c0;
        GNum small_part = exact_zero();
        for (const auto& t : h.terms) {
          int c = mono_vs_one(t.mono);
          if (c > 0)
            big.terms.push_back(t);
          else if (c < 0)
            small_part.terms.push_back(t);
          else
            c0 = c0 + t.coeff;
        }
        small_part.tail = h.tail;
        if (!c0.is_zero() || !small_part.terms.empty() || small_part.tail.exhausted) {
          GNum rest = exp_taylor(small_part);
          if (!c0.is_zero()) rest = scale(rest, exp_of_coeff(c0));
          GNum head = exact_zero();
          head.terms.push_back({Coeff(Rational(1)), result});
          if (!big.terms.empty()) {
            big.tail = Tail::exact();
            return mul(mul(exp_infinite(big), head), rest);
          }
          return mul(head, rest);
        }
        h = big;
      }
    }
    GNum out = exact_zero();
    out.terms.push_back({Coeff(Rational(1)), result});
    return out;
  }

  // -------------------------------------------------------------- factorial

  // fact(arg) via the exact Stirling log-expansion, arg = x or x + k.
  GNum expand_fact(const ExprPtr& arg) {
    if (!point_.is_infinity())
      throw UndefinedAtPoint("factorial is only defined toward infinity");
    GNum a = expand_shifted(arg);
    GNum ln_a = expand_ln_impl(a);
    // ln fact(a) = a ln a - a + (1/2) ln a + (1/2) ln(2 pi)
    //              + sum_k B_{2k} / (2k(2k-1) a^{2k-1})
    GNum acc = mul(a, ln_a);
    acc = add(acc, neg(a));
    acc = add(acc, scale(ln_a, Coeff(Rational(1, 2))));
    acc = add(acc,
              from_coeff(Coeff(Rational(1, 2)) *
                         Coeff::from_symbol(SymbolNode::ln_sym(SymbolNode::two_pi()))));
    GNum inv_a = inv(a);
    GNum inv_sq = mul(inv_a, inv_a);
    GNum pw = inv_a;
    int kmax = terms_ / 2 + 2;
    for (int k = 1; k <= kmax; ++k) {
      Rational s = detail::bernoulli(static_cast<std::size_t>(2 * k)) /
                   Rational(2 * k * (2 * k - 1));
      acc = add(acc, scale(pw, Coeff(s)));
      pw = mul(pw, inv_sq);
    }
    // The Stirling series continues beyond kmax.
    if (!pw.terms.empty())
      acc.tail = combine_tails(acc.tail, Tail{true, pw.terms.front().mono});
    else
      acc.tail = combine_tails(acc.tail, Tail{true, std::nullopt});
    acc = normalize(std::move(acc.terms), acc.tail);
    return expand_exp_impl(acc);
  }

  // ------------------------------------------------------------------ state

  const Assumptions* assume_;
  Point point_;
  ExpandOptions opts_;
  int terms_;
  int retry_active_ = 0;
  Side working_side_ = Side::Plus;
  std::string var_name_ = "x";

  std::map<const Expr*, GNum> cache_;
  std::vector<BasisElementPtr> elements_;
  std::vector<int> rank_;  // ids ascending by growth
  std::vector<int> log_ids_;
  int var_id_ = -1;
};

}  // namespace gossamer

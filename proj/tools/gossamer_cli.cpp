// Command-line surface for the comparison engine.
//
// Exit codes: 0 success; 1 verification failure or determinate
// contradiction; 2 usage/parse error; 3 an unresolved assumption or an
// exhausted truncation budget.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gossamer/gossamer.hpp"

namespace {

using nlohmann::json;
using namespace gossamer;

struct CommonArgs {
  std::string at;
  std::string assume;
  std::vector<std::string> params;
  int terms = 8;
  bool json_out = false;
  bool unicode = false;
};

void add_common(CLI::App* cmd, CommonArgs& c, bool needs_at) {
  auto* at = cmd->add_option("--at", c.at, "evaluation point, e.g. x=inf, n=0+, u=2-");
  if (needs_at) at->required();
  cmd->add_option("--assume", c.assume, "assumptions, e.g. \"a>0, mu+v<1\"");
  cmd->add_option("--param", c.params, "declare a parameter name (repeatable)");
  cmd->add_option("--terms", c.terms, "truncation budget override");
  cmd->add_flag("--json", c.json_out, "machine-readable output");
  cmd->add_flag("--unicode", c.unicode, "unicode relation symbols");
}

int default_terms() {
  if (const char* env = std::getenv("GOSSAMER_MAX_TERMS")) {
    int v = std::atoi(env);
    if (v >= 2) return v;
  }
  return 8;
}

struct Context {
  Assumptions assume;
  Point point = Point::infinity();
  std::string var = "x";
  ExpandOptions opts;
  bool have_at = false;
};

Context make_context(const CommonArgs& c) {
  Context ctx;
  ctx.assume = Assumptions::parse(c.assume);
  for (const auto& p : c.params) ctx.assume.declare(p);
  ctx.opts.terms = c.terms > 0 ? c.terms : default_terms();
  ctx.opts.max_terms = std::max(64, ctx.opts.terms * 8);
  if (!c.at.empty()) {
    auto eq = c.at.find('=');
    if (eq == std::string::npos)
      throw ParseError("--at needs var=point", 0, {"="});
    ctx.var = c.at.substr(0, eq);
    ctx.point = parse_point_value(c.at.substr(eq + 1));
    ctx.have_at = true;
  }
  return ctx;
}

ExprPtr parse_in(const std::string& text, Context& ctx) {
  ParseResult pr = parse_expression(text, ctx.assume);
  if (!pr.main_var.empty() && ctx.have_at && pr.main_var != ctx.var)
    throw ParseError("expression variable '" + pr.main_var + "' does not match --at variable '" +
                         ctx.var + "'",
                     0);
  return pr.expr;
}

std::string order_token(Order o) {
  switch (o) {
    case Order::Less: return "lt";
    case Order::Greater: return "gt";
    case Order::Equal: return "eq";
    case Order::Unknown: return "unknown";
  }
  return "?";
}

std::string magnitude_token(Magnitude m, bool unicode) {
  switch (m) {
    case Magnitude::MuchLess: return relation_token(Relation::MuchLess, unicode);
    case Magnitude::Propto: return relation_token(Relation::Propto, unicode);
    case Magnitude::MuchGreater: return relation_token(Relation::MuchGreater, unicode);
  }
  return "?";
}

int run_compare(const std::string& ftext, const std::string& gtext, const CommonArgs& args) {
  Context ctx = make_context(args);
  ExprPtr f = parse_in(ftext, ctx);
  ExprPtr g = parse_in(gtext, ctx);
  RelationResult r = compare(f, g, ctx.point, ctx.assume, {ctx.opts, true}, ctx.var);
  std::string verdict = relation_token(r.strongest(), args.unicode);
  if (args.json_out) {
    json j{{"verdict", relation_token(r.strongest())},
           {"magnitude", magnitude_token(r.magnitude, false)},
           {"asymptotic", r.asymptotic},
           {"close", r.close},
           {"order", order_token(r.order)},
           {"landau", r.landau},
           {"diagnostics", json::array()}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << print_expression(f, ctx.var) << " " << verdict << " "
              << print_expression(g, ctx.var) << "   [" << r.landau << "]\n";
    std::cout << "order: " << order_token(r.order) << (r.close ? "   close (simeq)" : "")
              << "\n";
  }
  return 0;
}

int run_limit(const std::string& ftext, const CommonArgs& args) {
  Context ctx = make_context(args);
  ExprPtr f = parse_in(ftext, ctx);
  LimitResult r = limit(f, ctx.point, ctx.assume, ctx.opts, ctx.var);
  if (args.json_out) {
    json j{{"diagnostics", json::array()}};
    switch (r.kind) {
      case LimitResult::Kind::Value: j["verdict"] = "value"; j["value"] = r.value.str(); break;
      case LimitResult::Kind::PlusInfinity: j["verdict"] = "+inf"; break;
      case LimitResult::Kind::MinusInfinity: j["verdict"] = "-inf"; break;
      case LimitResult::Kind::TwoSidedMismatch:
        j["verdict"] = "mismatch";
        j["left"] = r.left->str();
        j["right"] = r.right->str();
        break;
      case LimitResult::Kind::Undetermined:
        j["verdict"] = "undetermined";
        j["diagnostics"].push_back(r.reason);
        break;
    }
    std::cout << j.dump() << "\n";
  } else {
    std::cout << r.str() << "\n";
  }
  if (r.kind == LimitResult::Kind::Undetermined) return 3;
  return 0;
}

int run_series(const std::string& ftext, const CommonArgs& args, bool absorb_only) {
  Context ctx = make_context(args);
  ExprPtr f = parse_in(ftext, ctx);
  Engine eng(ctx.assume, ctx.point, ctx.opts);
  eng.set_var_name(ctx.var);
  GNum g = eng.expand(f);
  if (absorb_only) g = eng.absorb(g);
  if (args.json_out) {
    json terms = json::array();
    for (const auto& t : g.terms)
      terms.push_back({{"coeff", t.coeff.str()}, {"monomial", eng.render_mono(t.mono)}});
    json j{{"verdict", "series"},
           {"series", terms},
           {"exhausted", g.exhausted()},
           {"diagnostics", json::array()}};
    if (g.tail.bound) j["order_bound"] = eng.render_mono(*g.tail.bound);
    std::cout << j.dump() << "\n";
    return 0;
  }
  if (absorb_only) {
    std::cout << eng.render(g) << "\n";
    return 0;
  }
  if (g.is_exact_zero()) {
    std::cout << "0\n";
    return 0;
  }
  for (const auto& t : g.terms)
    std::cout << t.coeff.str() << " * " << eng.render_mono(t.mono) << "\n";
  if (g.exhausted())
    std::cout << "+ O(" << (g.tail.bound ? eng.render_mono(*g.tail.bound) : std::string("..."))
              << ")\n";
  return 0;
}

int run_scale(const std::string& family, int depth, const CommonArgs& args) {
  Context ctx = make_context(args);
  ScaleFamily f;
  if (family == "powers") f = ScaleFamily::Powers;
  else if (family == "exponential-towers" || family == "towers") f = ScaleFamily::ExponentialTowers;
  else if (family == "logs") f = ScaleFamily::Logs;
  else if (family == "mixed") f = ScaleFamily::Mixed;
  else throw ParseError("unknown family '" + family + "'", 0,
                        {"powers", "exponential-towers", "logs", "mixed"});
  ScaleChain chain = standard_scale(f, depth, ctx.point, ctx.assume, ctx.var);
  std::string out;
  for (std::size_t i = 0; i < chain.members.size(); ++i) {
    out += print_expression(chain.members[i], ctx.var);
    if (i < chain.relations.size()) {
      switch (chain.relations[i]) {
        case Relation::MuchLess: out += args.unicode ? " ≺ " : " << "; break;
        case Relation::MuchGreater: out += args.unicode ? " ≻ " : " >> "; break;
        default: out += " ~ "; break;
      }
    }
  }
  if (args.json_out) {
    json members = json::array(), rels = json::array();
    for (const auto& m : chain.members) members.push_back(print_expression(m, ctx.var));
    for (auto r : chain.relations) rels.push_back(relation_token(r));
    std::cout << json{{"verdict", "scale"}, {"members", members}, {"relations", rels}}.dump()
              << "\n";
  } else {
    std::cout << out << "\n";
  }
  return 0;
}

int run_verify(const std::string& path, const CommonArgs& args) {
  Context ctx = make_context(args);
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open chain file: " << path << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  Chain chain = parse_chain(buf.str(), ctx.assume);
  ChainReport report = verify_chain(chain, ctx.opts);
  if (args.json_out) {
    json steps = json::array();
    for (const auto& s : report.steps)
      steps.push_back({{"index", s.index}, {"ok", s.ok}, {"message", s.message}});
    std::cout << json{{"verdict", report.all_ok ? "ok" : "fail"}, {"steps", steps}}.dump()
              << "\n";
  } else {
    for (const auto& s : report.steps) std::cout << s.message << "\n";
  }
  return report.all_ok ? 0 : 1;
}

int run_monotone(const std::string& ftext, const CommonArgs& args) {
  Context ctx = make_context(args);
  ExprPtr f = parse_in(ftext, ctx);
  if (!ctx.point.is_infinity())
    throw ParseError("monotonicity is a tail property; use --at var=inf", 0);
  Monotonicity m = is_monotone_tail(f, ctx.assume, ctx.opts, ctx.var);
  std::string verdict = m == Monotonicity::Increasing   ? "increasing"
                        : m == Monotonicity::Decreasing ? "decreasing"
                                                        : "constant";
  if (args.json_out)
    std::cout << json{{"verdict", verdict}}.dump() << "\n";
  else
    std::cout << verdict << "\n";
  return 0;
}

int run_demo(const std::string& which, int iters, const CommonArgs& args) {
  if (which != "sqrt2") throw ParseError("unknown demo '" + which + "'", 0, {"sqrt2"});
  Rational x = newton_sqrt2_demo(iters);
  int digits = sqrt2_digits_correct(x);
  if (args.json_out) {
    std::cout << json{{"verdict", "demo"},
                      {"iterations", iters},
                      {"value", to_string(x)},
                      {"decimal", decimal_digits(x, 60)},
                      {"digits_correct", digits}}
                     .dump()
              << "\n";
  } else {
    std::cout << "x_" << iters << " = " << to_string(x) << "\n";
    std::cout << "     = " << decimal_digits(x, 60) << "...\n";
    std::cout << digits << (digits >= 47 ? "+ digits verified against isqrt(2*10^200)"
                                         : " digits correct")
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asymptotic comparison, limits and series in the magnitude calculus"};
  app.require_subcommand(1);

  CommonArgs cargs;
  std::string f_text, g_text, family = "powers", chain_path, demo_name;
  int depth = 3, iters = 5;

  auto* cmp = app.add_subcommand("compare", "solve the relation f z g at a point");
  cmp->add_option("f", f_text)->required();
  cmp->add_option("g", g_text)->required();
  add_common(cmp, cargs, true);

  auto* lim = app.add_subcommand("limit", "limit of an expression at a point");
  lim->add_option("f", f_text)->required();
  add_common(lim, cargs, true);

  auto* simp = app.add_subcommand("simplify", "expand, absorb, print the dominant part");
  simp->add_option("f", f_text)->required();
  add_common(simp, cargs, true);

  auto* ser = app.add_subcommand("series", "truncated multiseries expansion");
  ser->add_option("f", f_text)->required();
  add_common(ser, cargs, true);

  auto* sc = app.add_subcommand("scale", "standard scale-of-infinity families");
  sc->add_option("family", family, "powers | exponential-towers | logs | mixed");
  sc->add_option("--depth", depth, "number of members");
  add_common(sc, cargs, true);

  auto* ver = app.add_subcommand("verify", "verify a relation derivation chain file");
  ver->add_option("chain", chain_path)->required();
  add_common(ver, cargs, false);

  auto* mono = app.add_subcommand("monotone", "tail monotonicity of a term");
  mono->add_option("f", f_text)->required();
  add_common(mono, cargs, true);

  auto* demo = app.add_subcommand("demo", "worked reproductions (sqrt2)");
  demo->add_option("name", demo_name)->required();
  demo->add_option("--iters", iters, "iteration count");
  add_common(demo, cargs, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmp->parsed()) return run_compare(f_text, g_text, cargs);
    if (lim->parsed()) return run_limit(f_text, cargs);
    if (simp->parsed()) return run_series(f_text, cargs, true);
    if (ser->parsed()) return run_series(f_text, cargs, false);
    if (sc->parsed()) return run_scale(family, depth, cargs);
    if (ver->parsed()) return run_verify(chain_path, cargs);
    if (mono->parsed()) return run_monotone(f_text, cargs);
    if (demo->parsed()) return run_demo(demo_name, iters, cargs);
  } catch (const AssumptionNeeded& e) {
    std::cerr << "assumption needed: " << e.what() << "\n";
    return 3;
  } catch (const PrecisionExhausted& e) {
    std::cerr << "precision exhausted: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

// cobordlab: mod-p Chern numbers, generator coordinates and fixed-locus bounds.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cobordlab/acceptance.hpp"
#include "cobordlab/actions.hpp"
#include "cobordlab/bounds.hpp"
#include "cobordlab/cobordism.hpp"
#include "cobordlab/equivariant.hpp"
#include "cobordlab/io.hpp"

namespace {

using namespace cobordlab;

enum Exit { kOk = 0, kUsage = 1, kNotInLp = 2, kAssert = 3 };

struct Globals {
  std::uint32_t p = 2;
  long q = 0;
  int max_weight = -1;
  bool json = false;
  std::string cache;
  std::string family = "standard";
};

struct Input {
  std::string text;
  std::optional<VarietyExpr> expr;
  BPoly cls;
};

std::filesystem::path cache_path(const Globals& g) {
  if (const char* env = std::getenv("COBORDLAB_CACHE")) return env;
  if (!g.cache.empty()) return g.cache;
  if (const char* home = std::getenv("HOME")) return std::filesystem::path(home) / ".cobordlab" / "cache.json";
  return {};
}

Input read_input(const std::string& text, const Globals& g) {
  if (looks_like_bpoly(text)) {
    int w = g.max_weight >= 0 ? g.max_weight : 16;
    return {text, std::nullopt, parse_bpoly(text, g.p, w)};
  }
  std::vector<std::string> notes;
  VarietyExpr e = parse_expr(text, &notes);
  for (const auto& n : notes) std::cerr << "note: " << n << "\n";
  int w = g.max_weight >= 0 ? g.max_weight : std::max(0, e.dimension());
  return {text, e, chern_numbers(e, g.p, w)};
}

int class_weight(const BPoly& x) {
  int w = 0;
  for (const auto& [a, c] : x.terms()) w = std::max(w, a.weight());
  return w;
}

GeneratorFamily family_for(const Globals& g, int weight) {
  GeneratorFamily std_fam = cached_standard_generators(g.p, std::max(weight, 1), cache_path(g));
  if (g.family == "standard") return std_fam;
  std::string f = g.family;
  std::uint64_t seed = 1;
  if (f.rfind("perturbed", 0) == 0) {
    std::string rest = f.substr(9);
    if (!rest.empty()) {
      if (rest.front() == ':' || rest.front() == '(') rest = rest.substr(1);
      if (!rest.empty() && rest.back() == ')') rest.pop_back();
      try {
        seed = std::stoull(rest);
      } catch (const std::exception&) {
        throw PreconditionError("bad perturbed family seed '" + rest + "'");
      }
    }
    return perturbed_generators(std_fam, seed);
  }
  throw PreconditionError("unknown family '" + g.family + "' (standard or perturbed[:seed])");
}

long require_q(const Globals& g) {
  if (g.q <= 0) throw PreconditionError("this command needs -q");
  require_power_of(g.q, g.p);
  return g.q;
}

void emit(const Globals& g, const Json& j, const std::string& table) {
  if (g.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << table << "\n";
}

int cmd_class(const Globals& g, const std::string& text) {
  Input in = read_input(text, g);
  Json j = {{"input", text}, {"p", g.p}, {"class", to_json(in.cls)}};
  emit(g, j, in.cls.to_string());
  return kOk;
}

int cmd_express(const Globals& g, const std::string& text) {
  Input in = read_input(text, g);
  GeneratorFamily fam = family_for(g, in.cls.max_weight());
  auto e = express_in_generators(in.cls, fam);
  auto e2 = express_in_generators_gaussian(in.cls, fam);
  if (e.index() != e2.index()) throw InvariantViolation("triangular and Gaussian solves disagree on membership");
  if (auto* n = std::get_if<NotInLp>(&e)) {
    if (!(std::get<NotInLp>(e2) == *n)) throw InvariantViolation("solvers report different witnesses");
    Json j = {{"input", text}, {"p", g.p}, {"member", false}, {"witness", to_json(n->witness)}};
    emit(g, j, "NotInLp, witness " + n->witness.to_string());
    return kNotInLp;
  }
  const auto& poly = std::get<GenPoly>(e);
  if (!(std::get<GenPoly>(e2) == poly)) throw InvariantViolation("triangular and Gaussian solves disagree");
  Json j = {{"input", text}, {"p", g.p}, {"member", true}, {"expression", to_json(poly)}};
  emit(g, j, poly.to_string());
  return kOk;
}

int cmd_dimq(const Globals& g, const std::string& text) {
  long q = require_q(g);
  Input in = read_input(text, g);
  GeneratorFamily fam = family_for(g, in.cls.max_weight());
  ExtInt direct = dim_q_direct(in.cls, q);
  ExtInt via = dim_q_via_generators(in.cls, q, fam);
  Json j = {{"direct", to_json(direct)}, {"viaGenerators", to_json(via)}};
  emit(g, j, "direct " + direct.to_string() + ", via generators " + via.to_string());
  if (direct != via) {
    std::cerr << "error: dim_q computations disagree\n";
    return kAssert;
  }
  return kOk;
}

IndexSet parse_index_set(const std::string& text, std::uint32_t p) {
  if (text == "Np" || text == "N") return IndexSet::np(p);
  std::set<long> xs;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      xs.insert(std::stol(tok));
    } catch (const std::exception&) {
      throw PreconditionError("bad index set entry '" + tok + "'");
    }
  }
  for (long i : xs)
    if (!np_contains(i, p)) throw PreconditionError(std::to_string(i) + " is not in N_" + std::to_string(p));
  return IndexSet::explicit_set(std::move(xs));
}

struct BoundOpts {
  std::optional<std::string> a;
  long s = 0;
  std::optional<long> small_fixed;
  std::optional<long> milnor;
};

int cmd_bound(const Globals& g, const std::string& text, const BoundOpts& o) {
  long q = require_q(g);
  Input in = read_input(text, g);
  ExtInt mb = main_bound(in.cls, q);
  Json j = {{"input", text}, {"p", g.p}, {"q", q}, {"main", to_json(mb)}};
  std::string table = "main bound: " + mb.to_string();
  if (o.a || o.small_fixed || o.milnor) {
    GeneratorFamily fam = family_for(g, in.cls.max_weight());
    if (o.a) {
      BoundReport r = ratio_bound(in.cls, parse_index_set(*o.a, g.p), o.s, q, fam);
      j["ratio"] = to_json(r);
      j["ratio"]["A"] = *o.a;
      table += "\nratio bound: " + r.bound.to_string() + " (" + r.hypothesis + ")";
    }
    if (o.small_fixed) {
      bool ok = small_fixed_divisibility(in.cls, q, *o.small_fixed, fam);
      j["smallFixed"] = {{"d", *o.small_fixed}, {"holds", ok}};
      table += "\nsmall fixed locus divisibility (d=" + std::to_string(*o.small_fixed) + "): " + (ok ? "holds" : "fails");
    }
    if (o.milnor) {
      bool ok = milnor_divisibility_check(in.cls, *o.milnor, fam);
      j["milnor"] = {{"d", *o.milnor}, {"holds", ok}};
      table += "\nH(2,4) divisibility (d=" + std::to_string(*o.milnor) + "): " + (ok ? "holds" : "fails");
    }
  }
  emit(g, j, table);
  return kOk;
}

int cmd_realize(const Globals& g, const std::string& text) {
  long q = require_q(g);
  Input in = read_input(text, g);
  Globals gs = g;
  gs.family = "standard";
  GeneratorFamily fam = family_for(gs, in.cls.max_weight());
  Realization r = realize(in.cls, CharacterGroup::cyclic(g.p, q), fam);
  Json j = {{"input", text}, {"p", g.p}, {"q", q}, {"action", to_json(r.action)},
            {"variety", underlying_variety(r.action).to_string()}, {"achievedDim", to_json(r.achieved_dim)}};
  emit(g, j, underlying_variety(r.action).to_string() + "\nachieved fixed dimension " + r.achieved_dim.to_string());
  return kOk;
}

int cmd_rho(const Globals& g, const std::string& set, const std::vector<long>& exclude) {
  long q = g.q;
  if (q <= 0) throw PreconditionError("rho needs -q");
  IndexSet s = set == "Np" ? IndexSet::np(g.p, {exclude.begin(), exclude.end()}) : parse_index_set(set, g.p);
  Rational r = rho_q(s, q);
  std::string v = std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
  emit(g, {{"set", set}, {"exclude", exclude}, {"q", q}, {"rho", v}}, v);
  return kOk;
}

int cmd_localize(const Globals& g, const std::vector<long>& weights, int zeta_exp, int t_exp, long r) {
  EqProjClass y(g.p, weights, XtPoly::monomial(g.p, zeta_exp, t_exp));
  LocalizationResult res = localization_check(y, r);
  Json j = {{"weights", weights}, {"p", g.p}, {"y", y.element().to_string("zeta")}, {"r", r},
            {"lhs", res.lhs}, {"rhs", res.rhs}};
  emit(g, j, "lhs " + std::to_string(res.lhs) + ", rhs " + std::to_string(res.rhs));
  return res.lhs == res.rhs ? kOk : kAssert;
}

int cmd_selftest(const Globals& g) {
  auto results = acceptance::run_all();
  int failed = 0;
  Json arr = Json::array();
  for (const auto& r : results) {
    failed += r.pass ? 0 : 1;
    if (!g.json) std::cout << acceptance::format(r) << "\n";
    arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  if (g.json)
    std::cout << Json{{"passed", results.size() - failed}, {"failed", failed}, {"criteria", arr}}.dump(2) << "\n";
  else
    std::cout << (results.size() - failed) << " passed, " << failed << " failed\n";
  return failed ? kAssert : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mod-p cobordism classes, generator coordinates and fixed-locus bounds"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("-p,--prime", g.p, "prime p")->check([](const std::string& s) {
    try {
      return is_prime(static_cast<std::uint32_t>(std::stoul(s))) ? std::string() : "not a prime: " + s;
    } catch (const std::exception&) {
      return "not a number: " + s;
    }
  });
  app.add_option("-q,--order", g.q, "group order q (a power of p)");
  app.add_option("--max-weight", g.max_weight, "truncation weight");
  app.add_flag("--json", g.json, "JSON output");
  app.add_option("--cache", g.cache, "generator cache file (COBORDLAB_CACHE overrides)");
  app.add_option("--family", g.family, "standard | perturbed[:seed]");

  std::string input;
  auto* c_class = app.add_subcommand("class", "mod-p Chern numbers of a variety expression");
  c_class->add_option("expr", input, "e.g. \"2.P(4)*H(2,4) + P(1)\"")->required();
  auto* c_express = app.add_subcommand("express", "coordinates in generators, or a non-membership witness");
  c_express->add_option("input", input, "variety expression or raw class like \"b[2]*b[1]^2\"")->required();
  auto* c_dimq = app.add_subcommand("dimq", "dim_q computed directly and via generators");
  c_dimq->add_option("input", input)->required();

  BoundOpts bo;
  auto* c_bound = app.add_subcommand("bound", "fixed-locus dimension bounds");
  c_bound->add_option("input", input)->required();
  c_bound->add_option("--ratio-set", bo.a, "set A for the ratio bound: comma list or Np");
  c_bound->add_option("--s", bo.s, "at most s factors indexed in A");
  c_bound->add_option("--small-fixed", bo.small_fixed, "check the small fixed locus corollary for this d");
  c_bound->add_option("--milnor", bo.milnor, "check the H(2,4) divisibility corollary for this d");

  auto* c_realize = app.add_subcommand("realize", "action realizing dim_q");
  c_realize->add_option("input", input)->required();

  std::string set = "Np";
  std::vector<long> exclude;
  auto* c_rho = app.add_subcommand("rho", "rho_q of an index set");
  c_rho->add_option("--set", set, "comma list, or Np");
  c_rho->add_option("--exclude", exclude, "indices removed from Np")->delimiter(',');

  std::vector<long> weights;
  int zeta_exp = 0, t_exp = 0;
  long r = 1;
  auto* c_loc = app.add_subcommand("localize", "both sides of the localization identity on P(V)");
  c_loc->add_option("--weights", weights, "characters mod p, e.g. 0,0,1")->delimiter(',')->required();
  c_loc->add_option("--zeta", zeta_exp, "exponent of zeta in y");
  c_loc->add_option("--t", t_exp, "exponent of t in y");
  c_loc->add_option("-r", r, "evaluation residue (default 1)");

  auto* c_self = app.add_subcommand("selftest", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_class->parsed()) return cmd_class(g, input);
    if (c_express->parsed()) return cmd_express(g, input);
    if (c_dimq->parsed()) return cmd_dimq(g, input);
    if (c_bound->parsed()) return cmd_bound(g, input, bo);
    if (c_realize->parsed()) return cmd_realize(g, input);
    if (c_rho->parsed()) return cmd_rho(g, set, exclude);
    if (c_loc->parsed()) return cmd_localize(g, weights, zeta_exp, t_exp, r);
    if (c_self->parsed()) return cmd_selftest(g);
  } catch (const NotInLpError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNotInLp;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kAssert;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

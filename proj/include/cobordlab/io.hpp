#pragma once

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cobordlab/actions.hpp"
#include "cobordlab/bounds.hpp"
#include "cobordlab/bpoly.hpp"
#include "cobordlab/chow.hpp"
#include "cobordlab/cobordism.hpp"
#include "cobordlab/common.hpp"

namespace cobordlab {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline Json to_json(const Partition& a) { return Json(std::vector<int>(a.begin(), a.end())); }

inline Partition partition_from_json(const Json& j) { return Partition(j.get<std::vector<int>>()); }

inline Json to_json(const ExtInt& v) { return v.is_neg_inf() ? Json("-inf") : Json(v.value()); }

inline Json to_json(const BPoly& x) {
  Json terms = Json::array();
  for (const auto& [a, c] : x.terms()) terms.push_back({{"partition", to_json(a)}, {"coeff", c}});
  return {{"p", x.prime()}, {"maxWeight", x.max_weight()}, {"terms", terms}};
}

inline BPoly bpoly_from_json(const Json& j) {
  BPoly x(j.at("p").get<std::uint32_t>(), j.at("maxWeight").get<int>());
  for (const auto& t : j.at("terms")) x.add_term(partition_from_json(t.at("partition")), t.at("coeff").get<long long>());
  return x;
}

inline Json to_json(const GenPoly& g) {
  Json terms = Json::array();
  for (const auto& [b, c] : g.terms()) terms.push_back({{"monomial", to_json(b)}, {"coeff", c}});
  return {{"p", g.prime()}, {"terms", terms}};
}

inline GenPoly genpoly_from_json(const Json& j) {
  GenPoly g(j.at("p").get<std::uint32_t>());
  for (const auto& t : j.at("terms")) g.add_term(partition_from_json(t.at("monomial")), t.at("coeff").get<long long>());
  return g;
}

inline Json to_json(const WeightedVariety& x) {
  return std::visit(
      [](const auto& n) -> Json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PAct>) {
          return {{"type", "P"}, {"weights", n.weights}};
        } else if constexpr (std::is_same_v<T, HAct>) {
          return {{"type", "H"}, {"V", n.v}, {"W", n.w}};
        } else if constexpr (std::is_same_v<T, ProductAct>) {
          Json fs = Json::array();
          for (const auto& f : n.factors) fs.push_back(to_json(f));
          return {{"type", "product"}, {"factors", fs}};
        } else {
          Json ps = Json::array();
          for (const auto& [k, part] : n.parts) ps.push_back({{"multiplicity", k}, {"variety", to_json(part)}});
          return {{"type", "disjoint"}, {"parts", ps}};
        }
      },
      x.node);
}

inline WeightedVariety weighted_variety_from_json(const Json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "P") return {PAct{j.at("weights").get<std::vector<Character>>()}};
  if (type == "H") return {HAct{j.at("V").get<std::vector<Character>>(), j.at("W").get<std::vector<Character>>()}};
  if (type == "product") {
    ProductAct p;
    for (const auto& f : j.at("factors")) p.factors.push_back(weighted_variety_from_json(f));
    return {std::move(p)};
  }
  if (type == "disjoint") {
    DisjointAct d;
    for (const auto& e : j.at("parts"))
      d.parts.emplace_back(e.at("multiplicity").get<long>(), weighted_variety_from_json(e.at("variety")));
    return {std::move(d)};
  }
  throw ParseError("unknown variety node type '" + type + "'", 0);
}

inline Json to_json(const BoundReport& r) {
  Json j = {{"bound", to_json(r.bound)}, {"hypothesisChecked", r.hypothesis}};
  j["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
  j["n"] = r.n;
  j["q"] = r.q;
  j["s"] = r.s;
  j["rho"] = std::to_string(r.rho.numerator()) + "/" + std::to_string(r.rho.denominator());
  return j;
}

// ---------------------------------------------------------------------------
// Generator cache
// ---------------------------------------------------------------------------

inline Json generator_cache_json(const GeneratorFamily& fam) {
  Json gens = Json::object();
  for (const auto& [i, l] : fam.classes()) gens[std::to_string(i)] = to_json(l);
  return {{"version", 1}, {"p", fam.prime()}, {"maxWeight", fam.max_weight()}, {"generators", gens}};
}

/// Standard generators, read from `path` when it holds a usable cache for
/// (p, max_weight) and written back otherwise. Unreadable or mismatched files
/// are ignored, so the cache only affects speed.
inline GeneratorFamily cached_standard_generators(std::uint32_t p, int max_weight, const std::filesystem::path& path) {
  if (!path.empty()) {
    std::ifstream in(path);
    if (in) {
      try {
        Json root = Json::parse(in);
        if (root.at("version") == 1 && root.at("p") == p && root.at("maxWeight").get<int>() >= max_weight) {
          std::map<int, BPoly> classes;
          for (const auto& [k, v] : root.at("generators").items()) {
            int i = std::stoi(k);
            if (i <= max_weight) classes.emplace(i, bpoly_from_json(v).truncated(max_weight));
          }
          return GeneratorFamily(p, max_weight, std::move(classes), GeneratorFamily::Provenance::Standard);
        }
      } catch (const std::exception&) {
        // recompute below
      }
    }
  }
  GeneratorFamily fam = standard_generators(p, max_weight);
  if (!path.empty()) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path);
    if (out) out << generator_cache_json(fam).dump() << "\n";
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Parsers
// ---------------------------------------------------------------------------

namespace detail {

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool done() {
    skip_ws();
    return i_ == s_.size();
  }
  std::size_t pos() const { return i_; }
  char peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }
  long number() {
    if (!at_digit()) fail("expected a number");
    long v = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      v = v * 10 + (s_[i_++] - '0');
      if (v > 1'000'000) fail("number too large");
    }
    return v;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, i_); }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

/// expr := term ('+' term)*; term := [uint '.'] atom ('*' atom)*;
/// atom := 'P(' n ')' | 'H(' n ',' m ')'. H(n,m) is stored with n <= m.
/// Normalizations applied (H(4,2) -> H(2,4)) are reported through `notes`.
inline VarietyExpr parse_expr(std::string_view text, std::vector<std::string>* notes = nullptr) {
  detail::Cursor c(text);
  VarietyExpr out;
  do {
    ProductTerm term;
    if (c.at_digit()) {
      term.multiplicity = c.number();
      c.expect('.');
    }
    do {
      std::size_t at = c.pos();
      char k = c.peek();
      if (k != 'P' && k != 'H') c.fail("expected P(...) or H(...)");
      c.accept(k);
      c.expect('(');
      long n = c.number();
      if (n > 40) throw ParseError("atom parameter too large", at);
      if (k == 'P') {
        c.expect(')');
        term.factors.push_back(Atom::projective(static_cast<int>(n)));
      } else {
        c.expect(',');
        long m = c.number();
        c.expect(')');
        if (m > 40) throw ParseError("atom parameter too large", at);
        if (n > m && notes)
          notes->push_back("H(" + std::to_string(n) + "," + std::to_string(m) + ") normalized to H(" +
                           std::to_string(m) + "," + std::to_string(n) + ")");
        term.factors.push_back(Atom::milnor(static_cast<int>(n), static_cast<int>(m)));
      }
    } while (c.accept('*'));
    out.terms.push_back(std::move(term));
  } while (c.accept('+'));
  if (!c.done()) c.fail("unexpected trailing input");
  return out;
}

/// Raw classes: sum of [coeff '*'] monomials in b[i] with optional powers,
/// e.g. "b[2]*b[1]^2 + b[4]" or "1".
inline BPoly parse_bpoly(std::string_view text, std::uint32_t p, int max_weight) {
  detail::Cursor c(text);
  BPoly out(p, max_weight);
  do {
    long long coeff = 1;
    std::vector<int> parts;
    bool any = false;
    if (c.at_digit()) {
      coeff = c.number();
      any = true;
      if (!c.accept('*')) {
        out.add_term(Partition{}, coeff);
        continue;
      }
    }
    do {
      if (!c.accept('b')) c.fail(any ? "expected b[i]" : "expected a coefficient or b[i]");
      c.expect('[');
      long i = c.number();
      if (i < 1) c.fail("b index must be positive");
      c.expect(']');
      long e = 1;
      if (c.accept('^')) e = c.number();
      for (long k = 0; k < e; ++k) parts.push_back(static_cast<int>(i));
      if (static_cast<long>(parts.size()) > 4L * max_weight + 4) c.fail("monomial too long");
    } while (c.accept('*'));
    Partition a(std::move(parts));
    if (a.weight() > max_weight)
      throw TruncationError("monomial " + a.to_string() + " above truncation " + std::to_string(max_weight));
    out.add_term(a, coeff);
  } while (c.accept('+'));
  if (!c.done()) c.fail("unexpected trailing input");
  return out;
}

/// True when the text looks like a raw class rather than a variety expression.
inline bool looks_like_bpoly(std::string_view text) {
  return text.find('b') != std::string_view::npos ||
         (text.find('P') == std::string_view::npos && text.find('H') == std::string_view::npos);
}

}  // namespace cobordlab

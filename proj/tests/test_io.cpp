#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "cobordlab/io.hpp"

using namespace cobordlab;

namespace {

std::size_t parse_error_pos(const std::string& text) {
  try {
    parse_expr(text);
  } catch (const ParseError& e) {
    return e.position;
  }
  return std::string::npos;
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove(path);
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("variety expressions") {
  VarietyExpr e = parse_expr("P(4)");
  REQUIRE(e.terms.size() == 1);
  CHECK(e.terms[0].factors == std::vector<Atom>{Atom::projective(4)});

  e = parse_expr(" 2.P(2)*H(2,4) + P(1) ");
  REQUIRE(e.terms.size() == 2);
  CHECK(e.terms[0].multiplicity == 2);
  CHECK(e.terms[0].factors == std::vector<Atom>{Atom::projective(2), Atom::milnor(2, 4)});
  CHECK(e.to_string() == "2.P(2)*H(2,4) + P(1)");

  std::vector<std::string> notes;
  e = parse_expr("H(4,2)", &notes);
  CHECK(e.terms[0].factors[0] == Atom::milnor(2, 4));
  REQUIRE(notes.size() == 1);
  CHECK(notes[0] == "H(4,2) normalized to H(2,4)");
}

TEST_CASE("variety expression errors") {
  CHECK(parse_error_pos("P(4") == 3);
  CHECK(parse_error_pos("Q(1)") == 0);
  CHECK(parse_error_pos("P(2) +") == 6);
  CHECK(parse_error_pos("P(2) P(3)") == 5);
  CHECK(parse_error_pos("H(2)") == 3);
  CHECK(parse_error_pos("P(41)") == 0);
  CHECK_THROWS_AS(parse_expr(""), ParseError);
}

TEST_CASE("raw classes") {
  BPoly x = parse_bpoly("b[2]*b[1]^2 + b[4]", 2, 4);
  CHECK(x.coefficient({2, 1, 1}) == 1);
  CHECK(x.coefficient({4}) == 1);
  CHECK(x.terms().size() == 2);
  CHECK(parse_bpoly("1", 3, 2) == BPoly::one(3, 2));
  CHECK(parse_bpoly("2*b[1] + b[1]", 3, 2).is_zero());
  CHECK_THROWS_AS(parse_bpoly("b[5]", 2, 4), TruncationError);
  CHECK_THROWS_AS(parse_bpoly("b[0]", 2, 4), ParseError);
  CHECK_THROWS_AS(parse_bpoly("b[2", 2, 4), ParseError);
  CHECK(looks_like_bpoly("b[2]"));
  CHECK(looks_like_bpoly("1"));
  CHECK_FALSE(looks_like_bpoly("P(2)*H(2,4)"));
}

TEST_CASE("JSON round trips") {
  BPoly x = chern_numbers(Atom::projective(4), 2, 4);
  Json j = to_json(x);
  CHECK(j.dump() ==
        R"({"p":2,"maxWeight":4,"terms":[{"partition":[4],"coeff":1},{"partition":[2,2],"coeff":1},)"
        R"({"partition":[2,1,1],"coeff":1}]})");
  CHECK(bpoly_from_json(Json::parse(j.dump())) == x);

  GenPoly g = GenPoly::monomial(3, {5, 1}, 2) + GenPoly::monomial(3, {}, 1);
  CHECK(genpoly_from_json(to_json(g)) == g);

  CHECK(to_json(ExtInt::neg_inf()) == Json("-inf"));
  CHECK(to_json(ExtInt(3)) == Json(3));
  CHECK(partition_from_json(to_json(Partition{3, 1, 1})) == Partition{3, 1, 1});

  WeightedVariety a{PAct{{{0}, {1}}}}, h{HAct{{{0}}, {{0}, {1}}}};
  WeightedVariety v{DisjointAct{{{2, WeightedVariety{ProductAct{{a, h}}}}, {1, a}}}};
  Json jv = to_json(v);
  CHECK(jv["type"] == "disjoint");
  WeightedVariety back = weighted_variety_from_json(Json::parse(jv.dump()));
  CHECK(to_json(back) == jv);
  CHECK(fixed_dim(back) == fixed_dim(v));
  CHECK_THROWS_AS(weighted_variety_from_json(Json{{"type", "Q"}}), ParseError);

  BoundReport r;
  r.bound = ExtInt(2);
  r.rho = Rational(2, 5);
  r.certificate = Partition{5};
  Json jr = to_json(r);
  CHECK(jr["bound"] == 2);
  CHECK(jr["rho"] == "2/5");
  CHECK(jr["certificate"] == Json::array({5}));
}

TEST_CASE("generator cache") {
  TempFile f("cobordlab_test_cache.json");
  GeneratorFamily fresh = cached_standard_generators(2, 8, f.path);
  REQUIRE(std::filesystem::exists(f.path));
  GeneratorFamily hit = cached_standard_generators(2, 6, f.path);
  GeneratorFamily direct = standard_generators(2, 6);
  CHECK(hit.classes() == direct.classes());
  CHECK(hit.provenance() == GeneratorFamily::Provenance::Standard);
  CHECK(fresh.classes() == standard_generators(2, 8).classes());

  // Miss on another prime rewrites the file.
  GeneratorFamily three = cached_standard_generators(3, 5, f.path);
  CHECK(three.classes() == standard_generators(3, 5).classes());
  std::ifstream in(f.path);
  CHECK(Json::parse(in)["p"] == 3);

  // Garbage is ignored.
  { std::ofstream(f.path) << "not json"; }
  CHECK(cached_standard_generators(2, 4, f.path).classes() == standard_generators(2, 4).classes());
}

#include <catch_amalgamated.hpp>

#include <functional>
#include <random>

#include "cobordlab/actions.hpp"
#include "cobordlab/bounds.hpp"

using namespace cobordlab;

namespace {

constexpr int kW = 12;

const GeneratorFamily& standard(std::uint32_t p) {
  static std::map<std::uint32_t, GeneratorFamily> cache;
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, standard_generators(p, kW)).first;
  return it->second;
}

// All multiplicity vectors of the group's characters summing to `total`.
void for_each_multiset(const CharacterGroup& g, long total, const std::function<void(const std::vector<long>&)>& f) {
  std::vector<long> m(static_cast<std::size_t>(g.order()), 0);
  std::function<void(std::size_t, long)> rec = [&](std::size_t k, long left) {
    if (k + 1 == m.size()) {
      m[k] = left;
      f(m);
      return;
    }
    for (long c = 0; c <= left; ++c) {
      m[k] = c;
      rec(k + 1, left - c);
    }
  };
  rec(0, total);
}

std::vector<Character> expand(const CharacterGroup& g, const std::vector<long>& m) {
  std::vector<Character> out;
  for (std::size_t k = 0; k < m.size(); ++k)
    for (long j = 0; j < m[k]; ++j) out.push_back(g.character(static_cast<long>(k)));
  return out;
}

BPoly class_of(const WeightedVariety& x, std::uint32_t p) {
  VarietyExpr e = underlying_variety(x);
  return chern_numbers(e, p, std::max(0, e.dimension()));
}

}  // namespace

TEST_CASE("character groups") {
  CharacterGroup g(2, {2, 4});
  CHECK(g.order() == 8);
  CHECK(g.character(0) == Character{0, 0});
  CHECK(g.character(1) == Character{1, 0});
  CHECK(g.character(5) == Character{1, 2});
  CHECK_THROWS_AS(g.character(8), PreconditionError);
  CHECK_THROWS_AS(CharacterGroup(2, {6}), PreconditionError);
}

TEST_CASE("fixed dimensions of explicit actions") {
  CHECK(fixed_dim(PAct{{{0}, {0}, {1}}}) == ExtInt(1));
  CHECK(fixed_dim(PAct{{{0}, {1}, {2}}}) == ExtInt(0));
  CHECK_THROWS_AS(fixed_dim(PAct{}), PreconditionError);
  // V = {0}, W = {0,1}: H(0,1) is a point.
  CHECK(fixed_dim(HAct{{{0}}, {{0}, {1}}}) == ExtInt(0));
  CHECK(fixed_dim(HAct{{{0}}, {{0}}}).is_neg_inf());
  CHECK(fixed_dim(HAct{{{0}, {0}}, {{0}, {0}, {1}}}) == ExtInt(1));
  CHECK_THROWS_AS(fixed_dim(HAct{{{1}}, {{0}}}), PreconditionError);

  WeightedVariety a{PAct{{{0}, {0}, {1}}}}, b{PAct{{{0}, {1}}}};
  CHECK(fixed_dim(WeightedVariety{ProductAct{{a, b}}}) == ExtInt(1));
  CHECK(fixed_dim(WeightedVariety{DisjointAct{{{1, a}, {2, b}}}}) == ExtInt(1));
  CHECK(fixed_dim(WeightedVariety{DisjointAct{{{0, a}, {1, b}}}}) == ExtInt(0));
  CHECK(underlying_variety(WeightedVariety{ProductAct{{a, b}}}).to_string() == "P(2)*P(1)");
}

TEST_CASE("constructed projective actions") {
  for (long q : {2L, 4L, 8L}) {
    CharacterGroup g = CharacterGroup::cyclic(2, q);
    for (long n = 0; n <= 20; ++n) {
      auto x = construct_action_p(n, g);
      CHECK(fixed_dim(x) == ExtInt(n / q));
      CHECK(std::get<PAct>(x.node).weights.size() == static_cast<std::size_t>(n + 1));
    }
  }
  CharacterGroup klein(2, {2, 2});
  for (long n = 0; n <= 12; ++n) CHECK(fixed_dim(construct_action_p(n, klein)) == ExtInt(n / 4));
}

TEST_CASE("constructed projective actions are optimal") {
  for (long q : {2L, 3L, 4L}) {
    CharacterGroup g = CharacterGroup::cyclic(q == 3 ? 3 : 2, q);
    for (long n = 0; n <= 8; ++n) {
      ExtInt best = ExtInt(1000);
      for_each_multiset(g, n + 1, [&](const std::vector<long>& m) {
        best = std::min(best, fixed_dim(PAct{expand(g, m)}));
      });
      CHECK(fixed_dim(construct_action_p(n, g)) == best);
    }
  }
}

TEST_CASE("constructed Milnor hypersurface actions") {
  CharacterGroup g2 = CharacterGroup::cyclic(2, 2);
  CHECK(fixed_dim(construct_action_h(2, 4, g2)) == ExtInt(2));
  CHECK(fixed_dim(construct_action_h(4, 2, g2)) == ExtInt(2));
  CHECK(fixed_dim(construct_action_h(1, 2, g2)) == ExtInt(1));
  CHECK(fixed_dim(construct_action_h(0, 0, g2)).is_neg_inf());
  CHECK(fixed_dim(construct_action_h(0, 3, g2)) == ExtInt(1));
  for (long q : {2L, 3L, 4L}) {
    CharacterGroup g = CharacterGroup::cyclic(q == 3 ? 3 : 2, q);
    for (long n = 0; n <= 6; ++n)
      for (long m = n; m <= 6; ++m) {
        INFO("q=" << q << " H(" << n << "," << m << ")");
        auto x = construct_action_h(n, m, g);
        const auto& h = std::get<HAct>(x.node);
        CHECK(h.v.size() == static_cast<std::size_t>(n + 1));
        CHECK(h.w.size() == static_cast<std::size_t>(m + 1));
        ExtInt best = ExtInt(1000);
        for_each_multiset(g, n + 1, [&](const std::vector<long>& mv) {
          for_each_multiset(g, m + 1, [&](const std::vector<long>& mw) {
            for (std::size_t k = 0; k < mv.size(); ++k)
              if (mv[k] > mw[k]) return;
            best = std::min(best, fixed_dim(HAct{expand(g, mv), expand(g, mw)}));
          });
        });
        CHECK(fixed_dim(x) == best);
        CHECK(class_of(x, g.prime()) == chern_numbers(Atom::milnor(static_cast<int>(n), static_cast<int>(m)),
                                                      g.prime(), static_cast<int>(n + m - 1 < 0 ? 0 : n + m - 1)));
      }
  }
}

TEST_CASE("generator actions") {
  CHECK(fixed_dim(construct_action_l(5, CharacterGroup::cyclic(2, 8))) == ExtInt(0));
  CHECK(fixed_dim(construct_action_l(5, CharacterGroup::cyclic(2, 2))) == ExtInt(2));
  CHECK(fixed_dim(construct_action_l(11, CharacterGroup::cyclic(2, 4))) == ExtInt(2));
  CHECK_THROWS_AS(construct_action_l(3, CharacterGroup::cyclic(2, 2)), PreconditionError);
  for (std::uint32_t p : {2u, 3u})
    for (long q : {static_cast<long>(p), static_cast<long>(p * p)}) {
      CharacterGroup g = CharacterGroup::cyclic(p, q);
      for (int i = 1; i <= kW; ++i) {
        if (!np_contains(i, p)) continue;
        auto x = construct_action_l(i, g);
        CHECK(fixed_dim(x) == ExtInt(i / q));
        CHECK(class_of(x, p) == standard(p).generator(i).truncated(i).with_max_weight(i));
      }
    }
}

TEST_CASE("realization") {
  CharacterGroup g = CharacterGroup::cyclic(2, 2);
  Realization r = realize(standard(2).monomial({5, 2}), g, standard(2));
  CHECK(r.achieved_dim == ExtInt(3));
  CHECK(realize(BPoly::one(2, kW), g, standard(2)).achieved_dim == ExtInt(0));
  CHECK(realize(BPoly(2, kW), g, standard(2)).achieved_dim.is_neg_inf());
  CHECK_THROWS_AS(realize(standard(2).monomial({2}), g, perturbed_generators(standard(2), 1)), PreconditionError);
  CHECK_THROWS_AS(realize(standard(3).monomial({1}), g, standard(3)), PrimeMismatch);
}

TEST_CASE("generator monomials realize pi_q") {
  for (std::uint32_t p : {2u, 3u})
    for (long q : {static_cast<long>(p), static_cast<long>(p * p)}) {
      CharacterGroup g = CharacterGroup::cyclic(p, q);
      for (int n = 1; n <= 9; ++n)
        for (const auto& b : partitions_of(n, IndexSet::np(p))) {
          Realization r = realize(standard(p).monomial(b), g, standard(p));
          CHECK(r.achieved_dim == ExtInt(pi_q(b, q)));
        }
    }
}

TEST_CASE("realized actions respect the main bound") {
  std::mt19937_64 rng(61);
  for (std::uint32_t p : {2u, 3u})
    for (long q : {static_cast<long>(p), static_cast<long>(p * p)}) {
      CharacterGroup g = CharacterGroup::cyclic(p, q);
      for (int k = 0; k < 30; ++k) {
        BPoly x = evaluate_gen_poly(random_gen_poly(p, kW, rng), standard(p));
        Realization r = realize(x, g, standard(p));
        CHECK(r.achieved_dim == main_bound(x, q));
        CHECK(chern_numbers(underlying_variety(r.action), p, kW) == x);
        CHECK(fixed_dim(r.action) >= main_bound(class_of(r.action, p), q));
      }
    }
}

#include <catch_amalgamated.hpp>

#include <random>

#include "cobordlab/bounds.hpp"

using namespace cobordlab;

namespace {

constexpr int kW = 14;

const GeneratorFamily& standard(std::uint32_t p) {
  static std::map<std::uint32_t, GeneratorFamily> cache;
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, standard_generators(p, kW)).first;
  return it->second;
}

BPoly gen(std::uint32_t p, const Partition& b) { return standard(p).monomial(b); }

GenPoly random_homogeneous(std::uint32_t p, int n, std::mt19937_64& rng) {
  GenPoly g(p);
  auto bs = partitions_of(n, IndexSet::np(p));
  if (bs.empty()) return g;
  for (int k = 0; k < 3; ++k) g.add_term(bs[rng() % bs.size()], 1 + static_cast<long long>(rng() % (p - 1)));
  return g;
}

}  // namespace

TEST_CASE("main bound") {
  CHECK(main_bound(gen(2, {5}), 2) == ExtInt(2));
  CHECK(main_bound(gen(2, {4}), 2) == ExtInt(2));
  CHECK(main_bound(gen(2, {5}), 4) == ExtInt(1));
  CHECK(main_bound(gen(2, {2, 5}), 2) == ExtInt(3));
  CHECK(main_bound(BPoly(2, 4), 2).is_neg_inf());
  CHECK_THROWS_AS(main_bound(gen(2, {5}), 3), PreconditionError);
  CHECK_THROWS_AS(main_bound(gen(3, {1}), 6), PreconditionError);
}

TEST_CASE("partition bound") {
  CHECK(partition_bound({{5}, {4, 2, 1}}, 2) == 5);
  CHECK(partition_bound({}, 3) == 0);
}

TEST_CASE("every N_2 monomial of degree n has deg_2 at least 2n/5") {
  auto np = IndexSet::np(2);
  for (int n = 1; n <= 22; ++n)
    for (const auto& b : partitions_of(n, np)) CHECK(5 * pi_q(b, 2) >= 2L * n);
  CHECK(pi_q({5}, 2) * 5 == 2 * 5);  // equality at X_5
}

TEST_CASE("ratio bound") {
  BoundReport r = ratio_bound(gen(2, {5}), IndexSet::empty_set(), 0, 2, standard(2));
  CHECK(r.bound == ExtInt(2));
  CHECK(r.rho == Rational(2, 5));
  REQUIRE(r.certificate);
  CHECK(*r.certificate == Partition{5});
  CHECK(r.n == 5);

  // Every monomial has two factors indexed in {2}, so s = 1 certifies nothing.
  BoundReport none = ratio_bound(gen(2, {2, 2}), IndexSet::explicit_set({2}), 1, 2, standard(2));
  CHECK(none.bound.is_neg_inf());
  CHECK_FALSE(none.certificate);

  CHECK(ratio_bound(BPoly(2, kW), IndexSet::empty_set(), 0, 2, standard(2)).bound.is_neg_inf());
  CHECK_THROWS_AS(ratio_bound(gen(2, {5}), IndexSet::empty_set(), -1, 2, standard(2)), PreconditionError);
  BPoly outside(2, kW);
  outside.add_term({2, 1, 1}, 1);
  CHECK_THROWS_AS(ratio_bound(outside, IndexSet::empty_set(), 0, 2, standard(2)), NotInLpError);
}

TEST_CASE("ratio bound never exceeds the main bound") {
  std::mt19937_64 rng(51);
  for (std::uint32_t p : {2u, 3u})
    for (long q : {p == 2 ? 2L : 3L, p == 2 ? 4L : 9L})
      for (int k = 0; k < 60; ++k) {
        int n = 1 + static_cast<int>(rng() % kW);
        GenPoly g = random_homogeneous(p, n, rng);
        if (g.is_zero()) continue;
        BPoly x = evaluate_gen_poly(g, standard(p));
        ExtInt main = main_bound(x, q);
        BoundReport plain = ratio_bound(x, IndexSet::empty_set(), 0, q, standard(p));
        CHECK(plain.bound == ExtInt(ceil_rational(rho_q(IndexSet::np(p), q) * Rational(n))));
        CHECK(plain.bound <= main);
        for (long s : {0L, 1L, 2L}) {
          BoundReport r = ratio_bound(x, IndexSet::explicit_set({1, 2, 3}), s, q, standard(p));
          CHECK(r.bound <= main);
        }
      }
}

TEST_CASE("small fixed divisibility") {
  // X_1^5 at q = 3: n = 5 >= 5d with d = 1, low parts weigh 5 >= 0.
  CHECK(small_fixed_divisibility(gen(3, {1, 1, 1, 1, 1}), 3, 1, standard(3)));
  // X_5 has no parts <= 1, and n - 5d = 5 > 0 when d = 0.
  CHECK_FALSE(small_fixed_divisibility(gen(3, {5}), 3, 0, standard(3)));
  CHECK_THROWS_AS(small_fixed_divisibility(gen(3, {5}), 3, 2, standard(3)), PreconditionError);
  CHECK_THROWS_AS(small_fixed_divisibility(gen(3, {5}), 2, 0, standard(3)), PreconditionError);

  std::mt19937_64 rng(52);
  long checked = 0;
  for (int k = 0; k < 400; ++k) {
    int n = 1 + static_cast<int>(rng() % kW);
    GenPoly g = random_homogeneous(3, n, rng);
    if (g.is_zero()) continue;
    BPoly x = evaluate_gen_poly(g, standard(3));
    long d = dim_q_direct(x, 3).value();
    if (n < 5 * d) continue;
    ++checked;
    CHECK(small_fixed_divisibility(x, 3, d, standard(3)));
  }
  CHECK(checked > 10);
}

TEST_CASE("X_5 divisibility at p = 2") {
  const auto& f = standard(2);
  CHECK(milnor_divisibility_check(gen(2, {5}), 2, f));
  CHECK(milnor_divisibility_check(gen(2, {5, 2}), 3, f));
  CHECK(milnor_divisibility_check(gen(2, {5, 5}), 4, f));
  // A P^4 class with a one dimensional fixed locus would need an X_5 factor.
  CHECK_FALSE(milnor_divisibility_check(gen(2, {4}), 1, f));
  CHECK_THROWS_AS(milnor_divisibility_check(gen(2, {4}), 2, f), PreconditionError);
  CHECK_THROWS_AS(milnor_divisibility_check(gen(3, {1}), 0, standard(3)), PreconditionError);

  GeneratorFamily pert = perturbed_generators(f, 3);
  if (pert.generator(5) != f.generator(5)) CHECK_THROWS_AS(milnor_divisibility_check(gen(2, {5}), 2, pert), PreconditionError);

  std::mt19937_64 rng(53);
  for (int k = 0; k < 300; ++k) {
    int n = 1 + static_cast<int>(rng() % kW);
    GenPoly g = random_homogeneous(2, n, rng);
    if (g.is_zero()) continue;
    BPoly x = evaluate_gen_poly(g, f);
    long d = dim_q_direct(x, 2).value();
    if (3 * n < 7 * d) continue;
    CHECK(milnor_divisibility_check(x, d, f));
  }
}

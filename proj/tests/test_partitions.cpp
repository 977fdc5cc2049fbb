#include <catch_amalgamated.hpp>

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "cobordlab/partitions.hpp"

using namespace cobordlab;

namespace {

// Independent oracle: does some assignment of parts to blocks hit the targets?
bool refines_brute(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> sums(b.size(), 0);
  std::function<bool(std::size_t)> go = [&](std::size_t k) {
    if (k == a.size()) return sums == b;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (sums[j] + a[k] > b[j]) continue;
      sums[j] += a[k];
      if (go(k + 1)) return true;
      sums[j] -= a[k];
    }
    return false;
  };
  return go(0);
}

Partition random_partition(std::mt19937_64& rng, int max_weight) {
  std::uniform_int_distribution<int> w(0, max_weight);
  auto all = partitions_of(w(rng));
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  return all[pick(rng)];
}

}  // namespace

TEST_CASE("weight and union") {
  CHECK(Partition{}.weight() == 0);
  CHECK(Partition{4, 2, 1}.weight() == 7);
  CHECK(weight(Partition{5, 5}) == 10);
  CHECK(partition_union({3, 1}, {2}) == Partition{3, 2, 1});
  CHECK(partition_union({3, 1}, {}) == Partition{3, 1});
  CHECK(partition_union({2, 1}, {2, 1}) == Partition{2, 2, 1, 1});
  CHECK(Partition{1, 3, 2}.to_string() == "(3,2,1)");
  CHECK_THROWS_AS(Partition({2, 0}), PreconditionError);
}

TEST_CASE("canonical order") {
  std::vector<Partition> want{{4}, {3, 1}, {2, 2}, {2, 1, 1}, {1, 1, 1, 1}};
  CHECK(partitions_of(4) == want);
  CHECK(std::is_sorted(want.begin(), want.end()));
  CHECK(Partition{5} < Partition{1, 1, 1, 1, 1, 1});
  CHECK(partitions_of(0) == std::vector<Partition>{Partition{}});
  CHECK(partitions_of(4, IndexSet::np(2)) == std::vector<Partition>{{4}, {2, 2}});
  CHECK_THROWS_AS(partitions_of(70), PreconditionError);
}

TEST_CASE("partition counts") {
  const std::vector<std::size_t> p{1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231};
  for (int n = 0; n <= 16; ++n) CHECK(partitions_of(n).size() == p[static_cast<std::size_t>(n)]);
  CHECK(partitions_of(20).size() == 627);
}

TEST_CASE("dominance") {
  CHECK(dominates({3, 2}, {2, 2}));
  CHECK_FALSE(dominates({3}, {1, 1}));
  CHECK(dominates({3, 1}, {}));
  CHECK(dominates({}, {}));
}

TEST_CASE("refinement") {
  CHECK(refines({2, 1, 1}, {2, 2}));
  CHECK_FALSE(refines({3}, {2, 1}));
  CHECK(refines({4, 2, 1}, {4, 2, 1}));
  CHECK_FALSE(refines({2, 2}, {3, 1}));
  CHECK(refines({1, 1, 1, 1}, {4}));

  for (int n = 0; n <= 8; ++n) {
    auto ps = partitions_of(n);
    for (const auto& a : ps)
      for (const auto& b : ps)
        CHECK(refines(a, b) == refines_brute({a.begin(), a.end()}, {b.begin(), b.end()}));
  }
}

TEST_CASE("pi_q") {
  CHECK(pi_q({4, 2, 1}, 2) == 3);
  CHECK(pi_q({5, 3, 1}, 3) == 2);
  CHECK(pi_q({}, 7) == 0);
  CHECK_THROWS_AS(pi_q({1}, 0), PreconditionError);
}

TEST_CASE("pi_q properties") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 300; ++k) {
    Partition a = random_partition(rng, 12), b = random_partition(rng, 12);
    for (long q : {1L, 2L, 3L, 4L, 5L}) {
      CHECK(pi_q(partition_union(a, b), q) == pi_q(a, q) + pi_q(b, q));
      if (dominates(b, a)) CHECK(pi_q(b, q) >= pi_q(a, q));
      if (refines(a, b)) CHECK(pi_q(a, q) <= pi_q(b, q));
      CHECK(pi_q(a, q) <= a.weight() / q);
      CHECK(q * pi_q(a, q) >= a.weight() - (q - 1) * static_cast<long>(a.length()));
    }
  }
}

TEST_CASE("rho_q") {
  CHECK(rho_q(IndexSet::np(2), 2) == Rational(2, 5));
  CHECK(rho_q(IndexSet::empty_set(), 3) == Rational(1, 3));
  CHECK(rho_q(IndexSet::explicit_set({6, 8}), 3) == Rational(1, 4));
  CHECK(rho_q(IndexSet::np(3), 3) == Rational(0));  // 1 is in N_3
  CHECK(rho_q(IndexSet::np(2, {5}), 2) == Rational(4, 9));
}

TEST_CASE("rho_q against brute force over a long window") {
  for (std::uint32_t p : {2u, 3u, 5u})
    for (long q : {2L, 3L, 4L, 8L, 9L})
      for (const std::set<long>& excl : {std::set<long>{}, std::set<long>{2, 5}, std::set<long>{1, 4, 9, 13}}) {
        IndexSet s = IndexSet::np(p, excl);
        std::optional<Rational> best;
        for (long i = 1; i <= 5000; ++i)
          if (s.contains(i)) {
            Rational r(i / q, i);
            if (!best || r < *best) best = r;
          }
        INFO("p=" << p << " q=" << q);
        CHECK(rho_q(s, q) == *best);
        CHECK(rho_q(s, q) <= Rational(1, q));
      }
}

TEST_CASE("rho_q lower bound without small indices") {
  for (long q : {2L, 3L, 4L, 5L}) {
    std::set<long> small;
    for (long i = 1; i < q; ++i) small.insert(i);
    for (std::uint32_t p : {2u, 3u})
      CHECK(rho_q(IndexSet::np(p, small), q) >= Rational(1, 2 * q - 1));
  }
}

TEST_CASE("pi_q bounded below by rho_q") {
  auto np = IndexSet::np(2);
  Rational rho = rho_q(np, 2);
  for (int n = 1; n <= 16; ++n)
    for (const auto& a : partitions_of(n, np)) CHECK(Rational(pi_q(a, 2)) >= rho * Rational(n));
}

TEST_CASE("splittings") {
  using P = std::pair<Partition, Partition>;
  CHECK(splittings({2, 2}) == std::vector<P>{{{}, {2, 2}}, {{2}, {2}}, {{2, 2}, {}}});
  CHECK(splittings({}) == std::vector<P>{{{}, {}}});
  CHECK(splittings({2, 1}).size() == 4);

  for (int n = 0; n <= 9; ++n)
    for (const auto& a : partitions_of(n)) {
      auto sp = splittings(a);
      std::set<std::vector<int>> seen;
      // Oracle: sub-multisets via bitmasks over positions, deduplicated.
      for (unsigned mask = 0; mask < (1u << a.length()); ++mask) {
        std::vector<int> sub;
        for (std::size_t j = 0; j < a.length(); ++j)
          if (mask & (1u << j)) sub.push_back(a[j]);
        seen.insert(sub);
      }
      CHECK(sp.size() == seen.size());
      for (const auto& [b, c] : sp) CHECK(partition_union(b, c) == a);
    }
}

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

#include "cobordlab/common.hpp"

namespace cobordlab {

using Rational = boost::rational<long long>;

/// Weakly decreasing tuple of positive integers.
///
/// Ordering is the canonical enumeration order used everywhere in the
/// library: by weight first, then reverse lexicographic within a weight,
/// so that (4) < (3,1) < (2,2) < (2,1,1) < (1,1,1,1).
class Partition {
 public:
  Partition() = default;
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (int v : parts_)
      if (v < 1) throw PreconditionError("partition parts must be positive");
    std::sort(parts_.begin(), parts_.end(), std::greater<>());
    weight_ = std::accumulate(parts_.begin(), parts_.end(), 0);
  }

  std::span<const int> parts() const { return parts_; }
  int weight() const { return weight_; }
  std::size_t length() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }
  int operator[](std::size_t j) const { return parts_[j]; }
  auto begin() const { return parts_.begin(); }
  auto end() const { return parts_.end(); }

  friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    if (auto c = a.weight_ <=> b.weight_; c != 0) return c;
    // Larger leading parts first.
    return std::lexicographical_compare_three_way(b.parts_.begin(), b.parts_.end(),
                                                  a.parts_.begin(), a.parts_.end());
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t j = 0; j < parts_.size(); ++j) {
      if (j) s += ",";
      s += std::to_string(parts_[j]);
    }
    return s + ")";
  }

  /// The partition with one copy of `part` removed; `part` must occur.
  Partition without_part(int part) const {
    Partition r;
    r.parts_ = parts_;
    auto it = std::find(r.parts_.begin(), r.parts_.end(), part);
    if (it == r.parts_.end()) throw PreconditionError("part not present in partition");
    r.parts_.erase(it);
    r.weight_ = weight_ - part;
    return r;
  }

  /// Distinct part values with their multiplicities, largest value first.
  std::vector<std::pair<int, int>> multiplicities() const {
    std::vector<std::pair<int, int>> out;
    for (int v : parts_) {
      if (!out.empty() && out.back().first == v)
        ++out.back().second;
      else
        out.emplace_back(v, 1);
    }
    return out;
  }

 private:
  std::vector<int> parts_;
  int weight_ = 0;
};

struct PartitionHash {
  std::size_t operator()(const Partition& a) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (int v : a) h = (h ^ static_cast<std::size_t>(v)) * 0x100000001b3ull;
    return h;
  }
};

inline int weight(const Partition& a) { return a.weight(); }

inline Partition partition_union(const Partition& a, const Partition& b) {
  std::vector<int> parts;
  parts.reserve(a.length() + b.length());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(parts), std::greater<>());
  return Partition(std::move(parts));
}

/// a >= b: length(a) >= length(b) and a_j >= b_j for j <= length(b).
inline bool dominates(const Partition& a, const Partition& b) {
  if (a.length() < b.length()) return false;
  for (std::size_t j = 0; j < b.length(); ++j)
    if (a[j] < b[j]) return false;
  return true;
}

namespace detail {

// Can the multiset `counts` (counts[v] = copies of part v) be split into
// blocks with weights targets[k..]?
inline bool refine_search(std::vector<int>& counts, const std::vector<int>& targets, std::size_t k,
                          std::map<std::pair<std::size_t, std::vector<int>>, bool>& memo) {
  if (k == targets.size()) return std::all_of(counts.begin(), counts.end(), [](int c) { return c == 0; });
  auto key = std::make_pair(k, counts);
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  // Choose a sub-multiset of weight targets[k], values tried largest first.
  bool found = false;
  std::function<void(int, int)> choose = [&](int value, int remaining) {
    if (found) return;
    if (remaining == 0) {
      found = refine_search(counts, targets, k + 1, memo);
      return;
    }
    for (int v = std::min(value, remaining); v >= 1 && !found; --v) {
      if (counts[v] == 0) continue;
      --counts[v];
      choose(v, remaining - v);
      ++counts[v];
    }
  };
  choose(static_cast<int>(counts.size()) - 1, targets[k]);
  memo.emplace(std::move(key), found);
  return found;
}

}  // namespace detail

/// a refines b: a = a^1 u ... u a^s with |a^i| = b_i.
inline bool refines(const Partition& a, const Partition& b) {
  if (a.weight() != b.weight()) return false;
  if (a.length() < b.length()) return false;
  std::vector<int> counts(static_cast<std::size_t>(a.empty() ? 1 : a[0] + 1), 0);
  for (int v : a) ++counts[v];
  std::vector<int> targets(b.begin(), b.end());
  std::map<std::pair<std::size_t, std::vector<int>>, bool> memo;
  return detail::refine_search(counts, targets, 0, memo);
}

inline long pi_q(const Partition& a, long q) {
  if (q < 1) throw PreconditionError("pi_q requires q >= 1");
  long s = 0;
  for (int v : a) s += v / q;
  return s;
}

// ---------------------------------------------------------------------------
// Index sets
// ---------------------------------------------------------------------------

/// Either an explicit finite set of positive integers, or N_p minus a finite
/// excluded set.
class IndexSet {
 public:
  struct Explicit {
    std::set<long> members;
  };
  struct NpMinus {
    std::uint32_t p;
    std::set<long> excluded;
  };

  static IndexSet explicit_set(std::set<long> members) {
    for (long i : members)
      if (i < 1) throw PreconditionError("index sets contain positive integers only");
    return IndexSet(Explicit{std::move(members)});
  }
  static IndexSet np(std::uint32_t p, std::set<long> excluded = {}) {
    require_prime(p);
    return IndexSet(NpMinus{p, std::move(excluded)});
  }
  static IndexSet empty_set() { return explicit_set({}); }

  bool contains(long i) const {
    if (const auto* e = std::get_if<Explicit>(&kind_)) return e->members.count(i) > 0;
    const auto& n = std::get<NpMinus>(kind_);
    return np_contains(i, n.p) && n.excluded.count(i) == 0;
  }
  bool is_explicit() const { return std::holds_alternative<Explicit>(kind_); }
  bool is_empty() const {
    if (const auto* e = std::get_if<Explicit>(&kind_)) return e->members.empty();
    return false;  // N_p minus a finite set is infinite
  }
  const std::variant<Explicit, NpMinus>& kind() const { return kind_; }

  /// N_p minus this set, for a subset of N_p.
  IndexSet complement_in_np(std::uint32_t p) const {
    if (const auto* e = std::get_if<Explicit>(&kind_)) return np(p, e->members);
    const auto& n = std::get<NpMinus>(kind_);
    if (n.p != p) throw PrimeMismatch("index set over a different prime");
    std::set<long> rest;
    for (long i : n.excluded)
      if (np_contains(i, p)) rest.insert(i);
    return explicit_set(std::move(rest));
  }

 private:
  explicit IndexSet(std::variant<Explicit, NpMinus> k) : kind_(std::move(k)) {}
  std::variant<Explicit, NpMinus> kind_;
};

/// rho_q(I) = inf_{i in I} floor(i/q)/i, and 1/q for the empty set.
///
/// Within a residue class r mod q the ratio a/(aq+r) increases with a, so
/// only the smallest member of each class matters. For N_p-type sets each
/// class is searched upward from its smallest positive representative.
inline Rational rho_q(const IndexSet& set, long q) {
  if (q < 1) throw PreconditionError("rho_q requires q >= 1");
  if (set.is_empty()) return Rational(1, q);

  std::optional<Rational> best;
  auto consider = [&](long i) {
    Rational r(i / q, i);
    if (!best || r < *best) best = r;
  };
  if (const auto* e = std::get_if<IndexSet::Explicit>(&set.kind())) {
    for (long i : e->members) consider(i);
    return *best;
  }
  const auto& n = std::get<IndexSet::NpMinus>(set.kind());
  long max_excluded = n.excluded.empty() ? 0 : *n.excluded.rbegin();
  // Past max_excluded only numbers p^k - 1 are missing, and a window of 64
  // consecutive class members cannot consist of those alone.
  long limit = q * (q + 1) + max_excluded + 64 * q;
  for (long r = 0; r < q; ++r) {
    for (long i = (r == 0 ? q : r); i <= limit; i += q) {
      if (set.contains(i)) {
        consider(i);
        break;
      }
    }
  }
  if (!best) throw InvariantViolation("rho_q: residue scan found no member");
  return *best;
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

inline constexpr int kDefaultPartitionCap = 64;

/// All partitions of n (parts restricted to `allowed` if given), in
/// reverse lexicographic order.
inline std::vector<Partition> partitions_of(int n, const std::optional<IndexSet>& allowed = std::nullopt,
                                            int cap = kDefaultPartitionCap) {
  if (n < 0) throw PreconditionError("partitions_of: negative weight");
  if (n > cap) throw PreconditionError("partitions_of: weight " + std::to_string(n) + " exceeds cap " +
                                       std::to_string(cap));
  std::vector<Partition> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.emplace_back(cur);
      return;
    }
    for (int v = std::min(remaining, max_part); v >= 1; --v) {
      if (allowed && !allowed->contains(v)) continue;
      cur.push_back(v);
      rec(remaining - v, v);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

/// All ordered pairs (b, c) of sub-multisets with b u c = a, each once,
/// sorted by b in canonical order.
inline std::vector<std::pair<Partition, Partition>> splittings(const Partition& a) {
  auto mult = a.multiplicities();
  std::vector<std::pair<Partition, Partition>> out;
  std::vector<int> take(mult.size(), 0);
  while (true) {
    std::vector<int> left, right;
    for (std::size_t k = 0; k < mult.size(); ++k) {
      left.insert(left.end(), take[k], mult[k].first);
      right.insert(right.end(), mult[k].second - take[k], mult[k].first);
    }
    out.emplace_back(Partition(std::move(left)), Partition(std::move(right)));
    std::size_t k = 0;
    while (k < mult.size() && take[k] == mult[k].second) take[k++] = 0;
    if (k == mult.size()) break;
    ++take[k];
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cobordlab

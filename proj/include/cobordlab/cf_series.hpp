#pragma once

#include <concepts>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cobordlab/common.hpp"
#include "cobordlab/partitions.hpp"

namespace cobordlab {

/// All partitions of weight <= W in canonical order, with the lookups the
/// series engine needs.
class PartitionTable {
 public:
  explicit PartitionTable(int max_weight) : max_weight_(max_weight) {
    for (int n = 0; n <= max_weight; ++n) {
      weight_begin_.push_back(parts_.size());
      for (auto& a : partitions_of(n, std::nullopt, max_weight)) parts_.push_back(std::move(a));
    }
    weight_begin_.push_back(parts_.size());
    for (std::size_t i = 0; i < parts_.size(); ++i) ids_.emplace(parts_[i], i);
    removals_.resize(parts_.size());
    for (std::size_t i = 0; i < parts_.size(); ++i)
      for (auto [v, m] : parts_[i].multiplicities()) removals_[i].emplace_back(v, ids_.at(parts_[i].without_part(v)));
  }

  int max_weight() const { return max_weight_; }
  std::size_t size() const { return parts_.size(); }
  const Partition& at(std::size_t id) const { return parts_[id]; }
  std::size_t id(const Partition& a) const { return ids_.at(a); }
  bool contains(const Partition& a) const { return a.weight() <= max_weight_; }
  /// (v, id of a minus one copy of v) for each distinct part v of a.
  const std::vector<std::pair<int, std::size_t>>& removals(std::size_t id) const { return removals_[id]; }
  std::size_t weight_begin(int n) const { return weight_begin_[static_cast<std::size_t>(n)]; }
  std::size_t weight_end(int n) const { return weight_begin_[static_cast<std::size_t>(n) + 1]; }

 private:
  int max_weight_;
  std::vector<Partition> parts_;
  std::vector<std::size_t> weight_begin_;
  std::unordered_map<Partition, std::size_t, PartitionHash> ids_;
  std::vector<std::vector<std::pair<int, std::size_t>>> removals_;
};

/// Shared, lazily built tables; safe to call from several threads.
inline std::shared_ptr<const PartitionTable> partition_table(int max_weight) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const PartitionTable>> cache;
  if (max_weight < 0) max_weight = 0;
  std::lock_guard lock(mu);
  auto& slot = cache[max_weight];
  if (!slot) slot = std::make_shared<const PartitionTable>(max_weight);
  return slot;
}

template <class R>
concept SeriesCoefficient = std::copyable<R> && requires(const R& a, const R& b) {
  { a + b } -> std::convertible_to<R>;
  { a - b } -> std::convertible_to<R>;
  { a * b } -> std::convertible_to<R>;
  { a.zero_like() } -> std::convertible_to<R>;
  { a.one_like() } -> std::convertible_to<R>;
  { a.is_zero() } -> std::convertible_to<bool>;
};

/// A family g = (g_0 = 1, g_1, g_2, ...) of polynomials in x with
/// coefficients in R: family[i][k] is the x^k coefficient of g_i.
template <SeriesCoefficient R>
using Family = std::vector<std::vector<R>>;

/// g_i = x^i, whose generating series yields the Conner-Floyd classes.
template <SeriesCoefficient R>
Family<R> standard_family(const R& one, int max_weight) {
  Family<R> g;
  for (int i = 0; i <= max_weight; ++i) {
    std::vector<R> coeffs(static_cast<std::size_t>(i) + 1, one.zero_like());
    coeffs.back() = one;
    g.push_back(std::move(coeffs));
  }
  return g;
}

/// Power series in b_1, b_2, ... with coefficients in R, truncated by weight.
template <SeriesCoefficient R>
class CFSeries {
 public:
  CFSeries(const R& one, int max_weight)
      : table_(partition_table(max_weight)), max_weight_(max_weight < 0 ? 0 : max_weight),
        coeffs_(table_->size(), one.zero_like()) {
    coeffs_[0] = one;
  }

  int max_weight() const { return max_weight_; }
  const PartitionTable& table() const { return *table_; }

  const R& coefficient(const Partition& a) const {
    if (a.weight() > max_weight_)
      throw TruncationError("series coefficient of " + a.to_string() + " above truncation " +
                            std::to_string(max_weight_));
    return coeffs_[table_->id(a)];
  }
  const R& at(std::size_t id) const { return coeffs_[id]; }
  R& at(std::size_t id) { return coeffs_[id]; }

  /// Multiplies by 1 + sum_{i>=1} single[i] b_i.
  void multiply_single(const std::vector<R>& single) {
    // Descending ids so that lower-weight entries are still the old values.
    for (std::size_t id = coeffs_.size(); id-- > 1;) {
      R acc = coeffs_[id];
      for (auto [v, sub] : table_->removals(id))
        if (static_cast<std::size_t>(v) < single.size()) acc = acc + coeffs_[sub] * single[v];
      coeffs_[id] = std::move(acc);
    }
  }

  /// Divides by 1 + sum_{i>=1} single[i] b_i (always invertible).
  void divide_single(const std::vector<R>& single) {
    for (std::size_t id = 1; id < coeffs_.size(); ++id) {
      R acc = coeffs_[id];
      for (auto [v, sub] : table_->removals(id))
        if (static_cast<std::size_t>(v) < single.size()) acc = acc - coeffs_[sub] * single[v];
      coeffs_[id] = std::move(acc);
    }
  }

  friend CFSeries operator*(const CFSeries& x, const CFSeries& y) {
    int w = std::min(x.max_weight_, y.max_weight_);
    CFSeries r(x.coeffs_[0].one_like(), w);
    for (auto& c : r.coeffs_) c = c.zero_like();
    const auto& t = *r.table_;
    for (std::size_t i = 0; i < t.weight_end(w); ++i) {
      const R& a = x.at(x.table_->id(t.at(i)));
      if (a.is_zero()) continue;
      int rest = w - t.at(i).weight();
      for (std::size_t j = 0; j < t.weight_end(rest); ++j) {
        const R& b = y.at(y.table_->id(t.at(j)));
        if (b.is_zero()) continue;
        std::size_t k = t.id(partition_union(t.at(i), t.at(j)));
        r.coeffs_[k] = r.coeffs_[k] + a * b;
      }
    }
    return r;
  }

  friend bool operator==(const CFSeries& a, const CFSeries& b) {
    if (a.max_weight_ != b.max_weight_) return false;
    for (std::size_t i = 0; i < a.table_->weight_end(a.max_weight_); ++i)
      if (!(a.coeffs_[i] == b.coeffs_[i])) return false;
    return true;
  }

 private:
  std::shared_ptr<const PartitionTable> table_;
  int max_weight_;
  std::vector<R> coeffs_;
};

/// g_i(x) for i = 0..W, by Horner evaluation.
template <SeriesCoefficient R>
std::vector<R> evaluate_family(const Family<R>& g, const R& x, int max_weight) {
  std::vector<R> out;
  for (int i = 0; i <= max_weight && i < static_cast<int>(g.size()); ++i) {
    const auto& coeffs = g[static_cast<std::size_t>(i)];
    R v = x.zero_like();
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
    out.push_back(std::move(v));
  }
  return out;
}

/// A virtual sum of line bundles: (multiplicity, first Chern class) pairs.
/// Trivial summands are omitted since P_g(1) = 1 for families with
/// g_i(0) = 0 (i >= 1).
template <SeriesCoefficient R>
using LineSum = std::vector<std::pair<long, R>>;

/// P_g(E) for E a virtual sum of line bundles, truncated at max_weight.
template <SeriesCoefficient R>
CFSeries<R> generating_series(const LineSum<R>& bundle, const Family<R>& g, const R& one, int max_weight) {
  CFSeries<R> s(one, max_weight);
  for (const auto& [mult, c1] : bundle) {
    auto single = evaluate_family(g, c1, max_weight);
    for (long k = 0; k < (mult < 0 ? -mult : mult); ++k) {
      if (mult > 0)
        s.multiply_single(single);
      else
        s.divide_single(single);
    }
  }
  return s;
}

}  // namespace cobordlab

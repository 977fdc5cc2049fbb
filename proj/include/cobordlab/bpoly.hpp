#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "cobordlab/common.hpp"
#include "cobordlab/partitions.hpp"

namespace cobordlab {

namespace detail {

// "b4 + 2*b2^2" style rendering; `sym` is the variable letter.
template <class Terms>
std::string render_monomials(const Terms& terms, char sym) {
  if (terms.empty()) return "0";
  std::string out;
  for (const auto& [a, c] : terms) {
    if (!out.empty()) out += " + ";
    std::string mono;
    for (auto [v, m] : a.multiplicities()) {
      if (!mono.empty()) mono += "*";
      mono += sym + std::to_string(v);
      if (m > 1) mono += "^" + std::to_string(m);
    }
    if (mono.empty())
      out += std::to_string(c);
    else if (c == 1)
      out += mono;
    else
      out += std::to_string(c) + "*" + mono;
  }
  return out;
}

}  // namespace detail

/// Element of F_p[b_1, b_2, ...], known for all monomials b_a with |a| <=
/// max_weight. Coefficients of higher weight are unknown, not zero.
class BPoly {
 public:
  using Terms = std::map<Partition, std::uint32_t>;

  BPoly(std::uint32_t p, int max_weight) : p_(p), max_weight_(max_weight) { require_prime(p); }

  static BPoly one(std::uint32_t p, int max_weight) { return monomial(p, max_weight, {}, 1); }
  static BPoly monomial(std::uint32_t p, int max_weight, const Partition& a, long long coeff) {
    BPoly x(p, max_weight);
    x.add_term(a, coeff);
    return x;
  }

  std::uint32_t prime() const { return p_; }
  int max_weight() const { return max_weight_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Fp field() const { return Fp{p_}; }

  /// The b_a coefficient; an error if |a| is above the truncation.
  std::uint32_t coefficient(const Partition& a) const {
    if (a.weight() > max_weight_)
      throw TruncationError("coefficient of " + a.to_string() + " unknown: weight " + std::to_string(a.weight()) +
                            " above truncation " + std::to_string(max_weight_));
    auto it = terms_.find(a);
    return it == terms_.end() ? 0 : it->second;
  }

  /// Adds coeff * b_a. Terms above the truncation are dropped.
  void add_term(const Partition& a, long long coeff) {
    if (a.weight() > max_weight_) return;
    std::uint32_t c = field().reduce(coeff);
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(a, c);
    if (!inserted) {
      it->second = field().add(it->second, c);
      if (it->second == 0) terms_.erase(it);
    }
  }

  BPoly truncated(int max_weight) const {
    BPoly r(p_, std::min(max_weight, max_weight_));
    for (const auto& [a, c] : terms_) r.add_term(a, c);
    return r;
  }

  /// Same class, declared known up to a higher weight. Only valid when the
  /// caller knows the higher-weight coefficients vanish (e.g. homogeneous
  /// classes of low weight).
  BPoly with_max_weight(int max_weight) const {
    BPoly r(p_, max_weight);
    for (const auto& [a, c] : terms_) r.add_term(a, c);
    return r;
  }

  BPoly homogeneous_component(int n) const {
    BPoly r(p_, max_weight_);
    for (const auto& [a, c] : terms_)
      if (a.weight() == n) r.terms_.emplace(a, c);
    return r;
  }

  bool is_homogeneous_of(int n) const {
    return std::all_of(terms_.begin(), terms_.end(), [n](const auto& t) { return t.first.weight() == n; });
  }

  BPoly& operator+=(const BPoly& o) {
    check_prime(o);
    max_weight_ = std::min(max_weight_, o.max_weight_);
    std::erase_if(terms_, [&](const auto& t) { return t.first.weight() > max_weight_; });
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
  }
  BPoly& operator-=(const BPoly& o) { return *this += o * (p_ - 1); }
  friend BPoly operator+(BPoly a, const BPoly& b) { return a += b; }
  friend BPoly operator-(BPoly a, const BPoly& b) { return a -= b; }

  friend BPoly operator*(const BPoly& x, long long s) {
    BPoly r(x.p_, x.max_weight_);
    for (const auto& [a, c] : x.terms_) r.add_term(a, static_cast<long long>(c) * (s % x.p_));
    return r;
  }

  /// c_a(xy) = sum over b u c = a of c_b(x) c_c(y).
  friend BPoly operator*(const BPoly& x, const BPoly& y) {
    x.check_prime(y);
    BPoly r(x.p_, std::min(x.max_weight_, y.max_weight_));
    Fp f = x.field();
    for (const auto& [a, ca] : x.terms_) {
      if (a.weight() > r.max_weight_) continue;
      for (const auto& [b, cb] : y.terms_) {
        if (a.weight() + b.weight() > r.max_weight_) continue;
        r.add_term(partition_union(a, b), f.mul(ca, cb));
      }
    }
    return r;
  }

  friend bool operator==(const BPoly&, const BPoly&) = default;

  std::string to_string() const { return detail::render_monomials(terms_, 'b'); }

 private:
  void check_prime(const BPoly& o) const {
    if (o.p_ != p_) throw PrimeMismatch("BPoly over F_" + std::to_string(p_) + " vs F_" + std::to_string(o.p_));
  }

  std::uint32_t p_;
  int max_weight_;
  Terms terms_;
};

/// True iff x and y have the same coefficients in every weight <= w.
inline bool agree_up_to(const BPoly& x, const BPoly& y, int w) {
  if (x.prime() != y.prime()) return false;
  if (w > x.max_weight() || w > y.max_weight()) throw TruncationError("agree_up_to: weight above truncation");
  return x.truncated(w).terms() == y.truncated(w).terms();
}

inline BPoly bpoly_mul(const BPoly& x, const BPoly& y) { return x * y; }

/// Polynomial in the generator variables X_i (i in N_p) over F_p. The
/// monomial X_{b_1} ... X_{b_s} is keyed by the partition b.
class GenPoly {
 public:
  using Terms = std::map<Partition, std::uint32_t>;

  explicit GenPoly(std::uint32_t p) : p_(p) { require_prime(p); }

  static GenPoly monomial(std::uint32_t p, const Partition& b, long long coeff = 1) {
    GenPoly g(p);
    g.add_term(b, coeff);
    return g;
  }

  std::uint32_t prime() const { return p_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  std::uint32_t coefficient(const Partition& b) const {
    auto it = terms_.find(b);
    return it == terms_.end() ? 0 : it->second;
  }

  void add_term(const Partition& b, long long coeff) {
    for (int v : b)
      if (!np_contains(v, p_))
        throw PreconditionError("generator index " + std::to_string(v) + " not in N_" + std::to_string(p_));
    Fp f{p_};
    std::uint32_t c = f.reduce(coeff);
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(b, c);
    if (!inserted) {
      it->second = f.add(it->second, c);
      if (it->second == 0) terms_.erase(it);
    }
  }

  friend GenPoly operator+(GenPoly a, const GenPoly& b) {
    if (a.p_ != b.p_) throw PrimeMismatch("GenPoly prime mismatch");
    for (const auto& [m, c] : b.terms_) a.add_term(m, c);
    return a;
  }
  friend GenPoly operator*(const GenPoly& a, const GenPoly& b) {
    if (a.p_ != b.p_) throw PrimeMismatch("GenPoly prime mismatch");
    GenPoly r(a.p_);
    Fp f{a.p_};
    for (const auto& [m, c] : a.terms_)
      for (const auto& [n, d] : b.terms_) r.add_term(partition_union(m, n), f.mul(c, d));
    return r;
  }

  friend bool operator==(const GenPoly&, const GenPoly&) = default;

  std::string to_string() const { return detail::render_monomials(terms_, 'X'); }

 private:
  std::uint32_t p_;
  Terms terms_;
};

/// Degree with X_i of degree i.
inline ExtInt genpoly_deg(const GenPoly& g) {
  ExtInt d = ExtInt::neg_inf();
  for (const auto& [b, c] : g.terms()) d = max(d, ExtInt(b.weight()));
  return d;
}

/// Degree with X_i of degree floor(i/q).
inline ExtInt genpoly_deg_q(const GenPoly& g, long q) {
  ExtInt d = ExtInt::neg_inf();
  for (const auto& [b, c] : g.terms()) d = max(d, ExtInt(pi_q(b, q)));
  return d;
}

}  // namespace cobordlab

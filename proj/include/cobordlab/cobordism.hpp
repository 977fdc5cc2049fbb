#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cobordlab/bpoly.hpp"
#include "cobordlab/chow.hpp"
#include "cobordlab/common.hpp"
#include "cobordlab/partitions.hpp"

namespace cobordlab {

/// The variety L_i whose class is the standard generator in degree i.
inline Atom generator_atom(int i, std::uint32_t p) {
  if (!np_contains(i, p)) throw PreconditionError(std::to_string(i) + " is not in N_" + std::to_string(p));
  long k = i + 1, ps = 1;
  while (k % p == 0) {
    k /= p;
    ps *= p;
  }
  if (ps == 1) return Atom::projective(i);
  return Atom::milnor(static_cast<int>(ps), static_cast<int>((k - 1) * ps));
}

/// Classes l_i (i in N_p, i <= max_weight) forming polynomial generators of L_p.
class GeneratorFamily {
 public:
  enum class Provenance { Standard, Custom };

  GeneratorFamily(std::uint32_t p, int max_weight, std::map<int, BPoly> classes, Provenance provenance)
      : p_(p), max_weight_(max_weight), provenance_(provenance), cache_(std::make_shared<Cache>()) {
    require_prime(p);
    for (int i = 1; i <= max_weight; ++i) {
      if (!np_contains(i, p)) continue;
      auto it = classes.find(i);
      if (it == classes.end()) throw PreconditionError("generator family lacks degree " + std::to_string(i));
      BPoly l = it->second.with_max_weight(max_weight);
      if (l.prime() != p) throw PrimeMismatch("generator over the wrong prime");
      if (!l.is_homogeneous_of(i)) throw InvariantViolation("generator l_" + std::to_string(i) + " not homogeneous");
      if (l.coefficient(Partition{i}) == 0)
        throw InvariantViolation("generator l_" + std::to_string(i) + " has vanishing c_(" + std::to_string(i) + ")");
      classes_.emplace(i, std::move(l));
    }
  }

  std::uint32_t prime() const { return p_; }
  int max_weight() const { return max_weight_; }
  Provenance provenance() const { return provenance_; }
  const std::map<int, BPoly>& classes() const { return classes_; }

  const BPoly& generator(int i) const {
    auto it = classes_.find(i);
    if (it == classes_.end()) {
      if (i > max_weight_) throw TruncationError("generator l_" + std::to_string(i) + " above family truncation");
      throw PreconditionError(std::to_string(i) + " is not in N_" + std::to_string(p_));
    }
    return it->second;
  }

  /// l_b = prod_j l_{b_j}; memoized, safe to share between threads.
  BPoly monomial(const Partition& b) const {
    if (b.weight() > max_weight_) throw TruncationError("monomial " + b.to_string() + " above family truncation");
    if (b.empty()) return BPoly::one(p_, max_weight_);
    {
      std::lock_guard lock(cache_->mu);
      if (auto it = cache_->monomials.find(b); it != cache_->monomials.end()) return it->second;
    }
    int last = *(b.end() - 1);
    BPoly r = b.length() == 1 ? generator(last) : monomial(b.without_part(last)) * generator(last);
    std::lock_guard lock(cache_->mu);
    cache_->monomials.emplace(b, r);
    return r;
  }

 private:
  struct Cache {
    std::mutex mu;
    std::map<Partition, BPoly> monomials;
  };

  std::uint32_t p_;
  int max_weight_;
  Provenance provenance_;
  std::map<int, BPoly> classes_;
  std::shared_ptr<Cache> cache_;
};

inline GeneratorFamily standard_generators(std::uint32_t p, int max_weight) {
  std::map<int, BPoly> classes;
  for (int i = 1; i <= max_weight; ++i)
    if (np_contains(i, p)) classes.emplace(i, chern_numbers(generator_atom(i, p), p, max_weight));
  return GeneratorFamily(p, max_weight, std::move(classes), GeneratorFamily::Provenance::Standard);
}

/// l_i' = l_i + random decomposables of weight i. Still a generating family
/// since decomposables have vanishing c_(i).
inline GeneratorFamily perturbed_generators(const GeneratorFamily& base, std::uint64_t seed) {
  const std::uint32_t p = base.prime();
  std::mt19937_64 rng(seed);
  std::map<int, BPoly> classes;
  auto np = IndexSet::np(p);
  for (const auto& [i, l] : base.classes()) {
    BPoly v = l;
    std::vector<Partition> decomposables;
    for (auto& b : partitions_of(i, np, base.max_weight()))
      if (b.length() >= 2) decomposables.push_back(std::move(b));
    if (!decomposables.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, decomposables.size() - 1);
      std::uniform_int_distribution<long long> coeff(1, p - 1);
      for (int k = 0; k < 2; ++k) v += base.monomial(decomposables[pick(rng)]) * coeff(rng);
    }
    classes.emplace(i, std::move(v));
  }
  return GeneratorFamily(p, base.max_weight(), std::move(classes), GeneratorFamily::Provenance::Custom);
}

inline BPoly evaluate_gen_poly(const GenPoly& g, const GeneratorFamily& fam) {
  if (g.prime() != fam.prime()) throw PrimeMismatch("GenPoly and family over different primes");
  BPoly out(fam.prime(), fam.max_weight());
  for (const auto& [b, c] : g.terms()) out += fam.monomial(b) * c;
  return out;
}

/// x is not in L_p; `witness` is the first equation (in canonical order)
/// that cannot be satisfied.
struct NotInLp {
  Partition witness;
  friend bool operator==(const NotInLp&, const NotInLp&) = default;
};

using Expression = std::variant<GenPoly, NotInLp>;

struct NotInLpError : Error {
  explicit NotInLpError(NotInLp n) : Error("class is not in L_p (witness " + n.witness.to_string() + ")"), info(n) {}
  NotInLp info;
};

namespace detail {

inline std::vector<Partition> sorted_unknowns(int n, std::uint32_t p, int cap) {
  auto bs = partitions_of(n, IndexSet::np(p), cap);
  std::stable_sort(bs.begin(), bs.end(), [](const Partition& a, const Partition& b) { return a.length() < b.length(); });
  return bs;
}

inline void check_truncation(const BPoly& x, const GeneratorFamily& fam) {
  if (x.prime() != fam.prime()) throw PrimeMismatch("class and family over different primes");
  for (const auto& [a, c] : x.terms())
    if (a.weight() > fam.max_weight())
      throw TruncationError("class has weight " + std::to_string(a.weight()) + " above family truncation " +
                            std::to_string(fam.max_weight()));
}

/// Row-by-row elimination of the weight-n system, rows taken in canonical
/// order. Returns lambda per unknown, or the first inconsistent row.
inline std::variant<std::vector<std::uint32_t>, Partition> gauss_solve(const BPoly& x, int n,
                                                                       const std::vector<Partition>& unknowns,
                                                                       const GeneratorFamily& fam) {
  const Fp f{fam.prime()};
  const std::size_t cols = unknowns.size();
  std::map<Partition, std::vector<std::uint32_t>> rows;  // alpha -> M[alpha][*]
  for (std::size_t j = 0; j < cols; ++j) {
    BPoly m = fam.monomial(unknowns[j]);
    for (const auto& [a, c] : m.terms()) {
      auto& r = rows[a];
      if (r.empty()) r.assign(cols, 0);
      r[j] = c;
    }
  }

  struct Pivot {
    std::size_t col;
    std::vector<std::uint32_t> row;  // normalized, augmented
  };
  std::vector<Pivot> basis;
  for (const auto& a : partitions_of(n, std::nullopt, fam.max_weight())) {
    std::vector<std::uint32_t> v(cols + 1, 0);
    if (auto it = rows.find(a); it != rows.end()) std::copy(it->second.begin(), it->second.end(), v.begin());
    v[cols] = x.coefficient(a);
    for (const auto& pv : basis) {
      std::uint32_t k = v[pv.col];
      if (!k) continue;
      for (std::size_t j = 0; j <= cols; ++j) v[j] = f.sub(v[j], f.mul(k, pv.row[j]));
    }
    auto lead = std::find_if(v.begin(), v.begin() + static_cast<long>(cols), [](std::uint32_t c) { return c != 0; });
    if (lead == v.begin() + static_cast<long>(cols)) {
      if (v[cols]) return a;
      continue;
    }
    std::uint32_t inv = f.inv(*lead);
    for (auto& c : v) c = f.mul(c, inv);
    basis.push_back({static_cast<std::size_t>(lead - v.begin()), std::move(v)});
  }
  if (basis.size() != cols) throw InvariantViolation("generator monomials are linearly dependent in weight " + std::to_string(n));

  std::vector<std::uint32_t> lambda(cols, 0);
  for (auto it = basis.rbegin(); it != basis.rend(); ++it) {
    std::uint32_t v = it->row[cols];
    for (std::size_t j = 0; j < cols; ++j)
      if (j != it->col && it->row[j]) v = f.sub(v, f.mul(it->row[j], lambda[j]));
    lambda[it->col] = v;
  }
  return lambda;
}

/// Unknowns sorted by length; row b of the system only involves unknowns
/// coarser than b, which are already solved.
inline std::vector<std::uint32_t> triangular_solve(const BPoly& x, const std::vector<Partition>& unknowns,
                                                   const GeneratorFamily& fam) {
  const Fp f{fam.prime()};
  std::vector<std::uint32_t> lambda(unknowns.size(), 0);
  std::vector<BPoly> mono;
  mono.reserve(unknowns.size());
  for (const auto& b : unknowns) mono.push_back(fam.monomial(b));
  for (std::size_t k = 0; k < unknowns.size(); ++k) {
    const Partition& b = unknowns[k];
    std::uint32_t v = x.coefficient(b);
    for (std::size_t j = 0; j < k; ++j)
      if (lambda[j]) v = f.sub(v, f.mul(lambda[j], mono[j].coefficient(b)));
    std::uint32_t diag = mono[k].coefficient(b);
    if (!diag) throw InvariantViolation("zero diagonal entry at " + b.to_string());
    lambda[k] = f.mul(v, f.inv(diag));
  }
  return lambda;
}

template <class Solver>
Expression express_by_weight(const BPoly& x, const GeneratorFamily& fam, Solver&& solve) {
  check_truncation(x, fam);
  GenPoly out(fam.prime());
  int top = -1;
  for (const auto& [a, c] : x.terms()) top = std::max(top, a.weight());
  for (int n = 0; n <= top; ++n) {
    BPoly xn = x.homogeneous_component(n).with_max_weight(fam.max_weight());
    if (xn.is_zero()) continue;
    auto unknowns = sorted_unknowns(n, fam.prime(), fam.max_weight());
    auto r = solve(xn, n, unknowns);
    if (auto* w = std::get_if<Partition>(&r)) return NotInLp{*w};
    const auto& lambda = std::get<std::vector<std::uint32_t>>(r);
    for (std::size_t j = 0; j < unknowns.size(); ++j) out.add_term(unknowns[j], lambda[j]);
  }
  return out;
}

}  // namespace detail

/// Coordinates of x in the generator monomials, via the triangular system.
inline Expression express_in_generators(const BPoly& x, const GeneratorFamily& fam) {
  return detail::express_by_weight(x, fam, [&](const BPoly& xn, int n, const std::vector<Partition>& unknowns)
                                               -> std::variant<std::vector<std::uint32_t>, Partition> {
    auto lambda = detail::triangular_solve(xn, unknowns, fam);
    BPoly residual = xn;
    for (std::size_t j = 0; j < unknowns.size(); ++j)
      if (lambda[j]) residual -= fam.monomial(unknowns[j]) * lambda[j];
    if (residual.is_zero()) return lambda;
    // Not a member; the witness comes from the row-ordered elimination.
    auto g = detail::gauss_solve(xn, n, unknowns, fam);
    if (!std::holds_alternative<Partition>(g)) throw InvariantViolation("triangular and full solve disagree");
    return g;
  });
}

/// Same as express_in_generators, by full Gaussian elimination.
inline Expression express_in_generators_gaussian(const BPoly& x, const GeneratorFamily& fam) {
  return detail::express_by_weight(x, fam, [&](const BPoly& xn, int n, const std::vector<Partition>& unknowns) {
    return detail::gauss_solve(xn, n, unknowns, fam);
  });
}

/// A class together with its expression in generators.
struct CobordismClass {
  BPoly value;
  GenPoly certificate;
};

inline CobordismClass certify(const BPoly& x, const GeneratorFamily& fam) {
  auto e = express_in_generators(x, fam);
  if (auto* n = std::get_if<NotInLp>(&e)) throw NotInLpError(*n);
  return {x, std::get<GenPoly>(e)};
}

/// sup of pi_q over the support of x.
inline ExtInt dim_q_direct(const BPoly& x, long q) {
  ExtInt d = ExtInt::neg_inf();
  for (const auto& [a, c] : x.terms()) d = max(d, ExtInt(pi_q(a, q)));
  return d;
}

inline ExtInt dim_q_via_generators(const BPoly& x, long q, const GeneratorFamily& fam) {
  return genpoly_deg_q(certify(x, fam).certificate, q);
}

/// c_(n)(x) != 0 for some n.
inline bool is_indecomposable(const BPoly& x) {
  for (const auto& [a, c] : x.terms())
    if (a.length() == 1) return true;
  return false;
}

/// Random element of L_p of weight <= max_weight: a sum of a few random
/// generator monomials with random coefficients.
inline GenPoly random_gen_poly(std::uint32_t p, int max_weight, std::mt19937_64& rng, int terms = 3,
                               bool homogeneous = false) {
  auto np = IndexSet::np(p);
  std::uniform_int_distribution<int> wdist(1, std::max(1, max_weight));
  std::uniform_int_distribution<long long> cdist(1, p - 1);
  GenPoly g(p);
  int n = wdist(rng);
  for (int k = 0; k < terms; ++k) {
    int w = homogeneous ? n : wdist(rng);
    auto bs = partitions_of(w, np, max_weight);
    if (bs.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, bs.size() - 1);
    g.add_term(bs[pick(rng)], cdist(rng));
  }
  return g;
}

}  // namespace cobordlab

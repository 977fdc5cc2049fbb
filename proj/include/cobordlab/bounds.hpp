#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cobordlab/cobordism.hpp"
#include "cobordlab/common.hpp"
#include "cobordlab/partitions.hpp"

namespace cobordlab {

inline void require_power_of(long q, std::uint32_t p) {
  if (q < 1 || !is_power_of(static_cast<std::uint64_t>(q), p))
    throw PreconditionError("q = " + std::to_string(q) + " is not a power of " + std::to_string(p));
}

inline long ceil_rational(const Rational& r) {
  long long n = r.numerator(), d = r.denominator();  // d > 0
  return static_cast<long>(n >= 0 ? (n + d - 1) / d : -((-n) / d));
}

inline long ceil_div(long a, long b) {
  Rational r(a, b);
  return ceil_rational(r);
}

/// dim X^G >= dim_q [X] for G of order q a power of p.
inline ExtInt main_bound(const BPoly& x, long q) {
  require_power_of(q, x.prime());
  return dim_q_direct(x, q);
}

inline long partition_bound(const std::vector<Partition>& alphas, long q) {
  long s = 0;
  for (const auto& a : alphas) s += pi_q(a, q);
  return s;
}

struct BoundReport {
  ExtInt bound;
  std::string hypothesis;
  std::optional<Partition> certificate;  // generator monomial
  long n = 0;
  long q = 0;
  long s = 0;
  Rational rho{0};
};

namespace detail {

inline int homogeneous_weight(const BPoly& x) {
  if (x.is_zero()) return -1;
  int n = x.terms().begin()->first.weight();
  if (!x.is_homogeneous_of(n)) throw PreconditionError("class is not homogeneous");
  return n;
}

inline GenPoly expression_or_throw(const BPoly& x, const GeneratorFamily& fam) {
  auto e = express_in_generators(x, fam);
  if (auto* n = std::get_if<NotInLp>(&e)) throw NotInLpError(*n);
  return std::get<GenPoly>(e);
}

}  // namespace detail

/// If some monomial of x in generators has at most s factors indexed in A,
/// then d >= rho_q(N_p - A) (n - (q-1)s).
inline BoundReport ratio_bound(const BPoly& x, const IndexSet& a, long s, long q, const GeneratorFamily& fam) {
  if (s < 0) throw PreconditionError("ratio_bound: s must be nonnegative");
  BoundReport rep;
  rep.q = q;
  rep.s = s;
  rep.rho = rho_q(a.complement_in_np(x.prime()), q);
  int n = detail::homogeneous_weight(x);
  if (n < 0) {
    rep.hypothesis = "class is zero";
    return rep;
  }
  rep.n = n;
  GenPoly g = detail::expression_or_throw(x, fam);
  for (const auto& [b, c] : g.terms()) {
    long in_a = 0;
    for (int v : b) in_a += a.contains(v) ? 1 : 0;
    if (in_a <= s) {
      rep.certificate = b;
      rep.bound = ceil_rational(rep.rho * Rational(n - (q - 1) * s));
      rep.hypothesis = "monomial X" + b.to_string() + " has " + std::to_string(in_a) + " <= " + std::to_string(s) +
                       " factors indexed in A";
      return rep;
    }
  }
  rep.hypothesis = "every monomial has more than " + std::to_string(s) + " factors indexed in A";
  return rep;
}

/// If n >= (2q-1)d, every monomial of x carries factors X_i with i <= q-2 of
/// total degree >= n - (2q-1)d.
inline bool small_fixed_divisibility(const BPoly& x, long q, long d, const GeneratorFamily& fam) {
  require_power_of(q, x.prime());
  int n = detail::homogeneous_weight(x);
  if (n < 0) return true;
  if (n < (2 * q - 1) * d)
    throw PreconditionError("small_fixed_divisibility needs n >= (2q-1)d, got n=" + std::to_string(n) +
                            " d=" + std::to_string(d));
  GenPoly g = detail::expression_or_throw(x, fam);
  for (const auto& [b, c] : g.terms()) {
    long low = 0;
    for (int v : b)
      if (v <= q - 2) low += v;
    if (low < n - (2 * q - 1) * d) return false;
  }
  return true;
}

/// p = q = 2: x is divisible by X_5^ceil((3n-7d)/15), where l_5 = [H(2,4)].
inline bool milnor_divisibility_check(const BPoly& x, long d, const GeneratorFamily& fam) {
  if (x.prime() != 2 || fam.prime() != 2) throw PreconditionError("milnor_divisibility_check is for p = 2");
  if (fam.max_weight() >= 5 && fam.generator(5) != chern_numbers(Atom::milnor(2, 4), 2, fam.max_weight()))
    throw PreconditionError("family's degree 5 generator is not [H(2,4)]");
  int n = detail::homogeneous_weight(x);
  if (n < 0) return true;
  if (3L * n < 7 * d) throw PreconditionError("milnor_divisibility_check needs n >= 7d/3");
  long e = ceil_div(3L * n - 7 * d, 15);
  if (e <= 0) return true;
  GenPoly g = detail::expression_or_throw(x, fam);
  for (const auto& [b, c] : g.terms())
    if (std::count(b.begin(), b.end(), 5) < e) return false;
  return true;
}

}  // namespace cobordlab

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "cobordlab/bounds.hpp"
#include "cobordlab/chow.hpp"
#include "cobordlab/cobordism.hpp"
#include "cobordlab/common.hpp"

namespace cobordlab {

/// Residues per invariant factor.
using Character = std::vector<long>;

/// Character group Z/p^{r_1} x ... x Z/p^{r_m} of a diagonalizable p-group.
class CharacterGroup {
 public:
  CharacterGroup(std::uint32_t p, std::vector<long> invariant_factors) : p_(p), factors_(std::move(invariant_factors)) {
    require_prime(p);
    order_ = 1;
    for (long f : factors_) {
      if (f < 1 || !is_power_of(static_cast<std::uint64_t>(f), p))
        throw PreconditionError("invariant factor " + std::to_string(f) + " is not a power of " + std::to_string(p));
      order_ *= f;
    }
  }
  /// Cyclic group of order q.
  static CharacterGroup cyclic(std::uint32_t p, long q) { return CharacterGroup(p, {q}); }

  std::uint32_t prime() const { return p_; }
  long order() const { return order_; }
  const std::vector<long>& invariant_factors() const { return factors_; }

  /// The k-th character in a fixed enumeration (mixed radix, first factor fastest).
  Character character(long k) const {
    if (k < 0 || k >= order_) throw PreconditionError("character index out of range");
    Character c;
    for (long f : factors_) {
      c.push_back(k % f);
      k /= f;
    }
    return c;
  }

 private:
  std::uint32_t p_;
  std::vector<long> factors_;
  long order_;
};

struct WeightedVariety;

/// P(V) with V = sum over the listed characters.
struct PAct {
  std::vector<Character> weights;
};
/// H = P_{P(V)}(Q + W/V), a Milnor hypersurface H(|V|-1, |W|-1).
struct HAct {
  std::vector<Character> v;
  std::vector<Character> w;
};
struct ProductAct {
  std::vector<WeightedVariety> factors;
};
struct DisjointAct {
  std::vector<std::pair<long, WeightedVariety>> parts;
};

struct WeightedVariety {
  std::variant<PAct, HAct, ProductAct, DisjointAct> node;
};

namespace detail {

inline std::map<Character, long> multiset(const std::vector<Character>& xs) {
  std::map<Character, long> m;
  for (const auto& c : xs) ++m[c];
  return m;
}

inline void validate(const PAct& a) {
  if (a.weights.empty()) throw PreconditionError("P(V) needs dim V >= 1");
}

inline void validate(const HAct& h) {
  if (h.v.empty()) throw PreconditionError("H action needs dim V >= 1");
  auto mv = multiset(h.v), mw = multiset(h.w);
  for (const auto& [c, k] : mv) {
    auto it = mw.find(c);
    if (it == mw.end() || it->second < k) throw PreconditionError("H action needs V contained in W");
  }
}

}  // namespace detail

inline ExtInt fixed_dim(const WeightedVariety& x);

inline ExtInt fixed_dim(const PAct& a) {
  detail::validate(a);
  ExtInt d = ExtInt::neg_inf();
  for (const auto& [c, k] : detail::multiset(a.weights)) d = max(d, ExtInt(k - 1));
  return d;
}

/// Components P_{P_c}((Q|P_c + U)(g)) of dimension (mult_V(c)-1) + (r(c,g)-1).
inline ExtInt fixed_dim(const HAct& h) {
  detail::validate(h);
  auto mv = detail::multiset(h.v), mw = detail::multiset(h.w);
  ExtInt d = ExtInt::neg_inf();
  for (const auto& [c, kc] : mv)
    for (const auto& [g, kg] : mw) {
      long r = kg - (g == c ? 1 : 0);
      if (r >= 1) d = max(d, ExtInt(kc - 1 + r - 1));
    }
  return d;
}

inline ExtInt fixed_dim(const WeightedVariety& x) {
  return std::visit(
      [](const auto& n) -> ExtInt {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ProductAct>) {
          ExtInt d(0);
          for (const auto& f : n.factors) d = d + fixed_dim(f);
          return d;
        } else if constexpr (std::is_same_v<T, DisjointAct>) {
          ExtInt d = ExtInt::neg_inf();
          for (const auto& [k, part] : n.parts)
            if (k != 0) d = max(d, fixed_dim(part));
          return d;
        } else {
          return fixed_dim(n);
        }
      },
      x.node);
}

/// The underlying variety, forgetting the action.
inline VarietyExpr underlying_variety(const WeightedVariety& x) {
  return std::visit(
      [](const auto& n) -> VarietyExpr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PAct>) {
          return {{{1, {Atom::projective(static_cast<int>(n.weights.size()) - 1)}}}};
        } else if constexpr (std::is_same_v<T, HAct>) {
          return {{{1, {Atom::milnor(static_cast<int>(n.v.size()) - 1, static_cast<int>(n.w.size()) - 1)}}}};
        } else if constexpr (std::is_same_v<T, ProductAct>) {
          VarietyExpr acc{{{1, {}}}};
          for (const auto& f : n.factors) {
            VarietyExpr e = underlying_variety(f), next;
            for (const auto& s : acc.terms)
              for (const auto& t : e.terms) {
                ProductTerm pt{s.multiplicity * t.multiplicity, s.factors};
                pt.factors.insert(pt.factors.end(), t.factors.begin(), t.factors.end());
                next.terms.push_back(std::move(pt));
              }
            acc = std::move(next);
          }
          return acc;
        } else {
          VarietyExpr out;
          for (const auto& [k, part] : n.parts) {
            if (k == 0) continue;
            for (auto t : underlying_variety(part).terms) {
              t.multiplicity *= k;
              out.terms.push_back(std::move(t));
            }
          }
          return out;
        }
      },
      x.node);
}

namespace detail {

/// n = q a + r - 1 with 1 <= r <= q.
inline std::pair<long, long> split_qa(long n, long q) {
  long a = n / q;
  return {a, n - q * a + 1};
}

/// First r characters get multiplicity a+1, the rest a.
inline std::vector<Character> graded_weights(long a, long r, const CharacterGroup& g) {
  std::vector<Character> w;
  for (long k = 0; k < g.order(); ++k)
    for (long j = 0; j < a + (k < r ? 1 : 0); ++j) w.push_back(g.character(k));
  return w;
}

inline void assert_dim(const WeightedVariety& x, ExtInt expected, const std::string& what) {
  ExtInt got = fixed_dim(x);
  if (got != expected)
    throw InvariantViolation(what + ": fixed locus has dimension " + got.to_string() + ", expected " +
                             expected.to_string());
}

}  // namespace detail

/// Action on P^n with fixed locus of dimension floor(n/q).
inline WeightedVariety construct_action_p(long n, const CharacterGroup& g) {
  if (n < 0) throw PreconditionError("P(n) needs n >= 0");
  auto [a, r] = detail::split_qa(n, g.order());
  WeightedVariety x{PAct{detail::graded_weights(a, r, g)}};
  detail::assert_dim(x, n / g.order(), "action on P(" + std::to_string(n) + ")");
  return x;
}

/// Action on H(n, m) from weight data V in W.
inline WeightedVariety construct_action_h(long n, long m, const CharacterGroup& g) {
  if (n < 0 || m < 0) throw PreconditionError("H(n,m) needs n, m >= 0");
  if (n > m) std::swap(n, m);
  const long q = g.order();
  auto [a, r] = detail::split_qa(n, q);
  auto [b, s] = detail::split_qa(m, q);
  // R and S are initial segments of the enumeration, so R is inside S when s >= r.
  WeightedVariety x{HAct{detail::graded_weights(a, r, g), detail::graded_weights(b, s, g)}};
  long formula = (n % q == 0 && m % q == 0) ? floor_div(m + n - 1, q) : m / q + n / q;
  ExtInt expected = formula < 0 ? ExtInt::neg_inf() : ExtInt(formula);
  detail::assert_dim(x, expected, "action on H(" + std::to_string(n) + "," + std::to_string(m) + ")");
  return x;
}

/// Action on the generator variety L_i with fixed locus of dimension floor(i/q).
inline WeightedVariety construct_action_l(int i, const CharacterGroup& g) {
  Atom atom = generator_atom(i, g.prime());
  WeightedVariety x = atom.kind == Atom::Kind::P ? construct_action_p(atom.n, g) : construct_action_h(atom.n, atom.m, g);
  detail::assert_dim(x, i / g.order(), "action on L_" + std::to_string(i));
  return x;
}

struct Realization {
  WeightedVariety action;
  ExtInt achieved_dim;
};

/// A variety with action whose class is x and whose fixed locus has
/// dimension exactly dim_q x.
inline Realization realize(const BPoly& x, const CharacterGroup& g, const GeneratorFamily& fam) {
  if (fam.provenance() != GeneratorFamily::Provenance::Standard)
    throw PreconditionError("realize needs the standard generator family");
  if (x.prime() != g.prime()) throw PrimeMismatch("class and group over different primes");
  GenPoly poly = certify(x, fam).certificate;
  DisjointAct parts;
  for (const auto& [b, c] : poly.terms()) {
    ProductAct prod;
    if (b.empty()) prod.factors.push_back({PAct{{g.character(0)}}});
    for (int v : b) prod.factors.push_back(construct_action_l(v, g));
    parts.parts.emplace_back(static_cast<long>(c), WeightedVariety{std::move(prod)});
  }
  Realization out{WeightedVariety{std::move(parts)}, ExtInt::neg_inf()};
  out.achieved_dim = fixed_dim(out.action);
  if (out.achieved_dim != dim_q_direct(x, g.order()))
    throw InvariantViolation("realize: achieved " + out.achieved_dim.to_string() + " but dim_q is " +
                             dim_q_direct(x, g.order()).to_string());
  BPoly back = chern_numbers(underlying_variety(out.action), x.prime(), x.max_weight());
  if (!agree_up_to(back, x, x.max_weight())) throw InvariantViolation("realize: class of the realization differs");
  return out;
}

}  // namespace cobordlab

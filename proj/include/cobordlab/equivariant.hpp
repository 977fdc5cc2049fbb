#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cobordlab/box_ring.hpp"
#include "cobordlab/cf_series.hpp"
#include "cobordlab/chow.hpp"
#include "cobordlab/common.hpp"
#include "cobordlab/partitions.hpp"

namespace cobordlab {

/// Polynomial in x and t over F_p (t = c_1 of the standard character of mu_p).
class XtPoly {
 public:
  using Key = std::pair<int, int>;  // (deg x, deg t)

  explicit XtPoly(std::uint32_t p) : p_(p) { require_prime(p); }
  static XtPoly monomial(std::uint32_t p, int dx, int dt, long long c = 1) {
    XtPoly r(p);
    r.add_term(dx, dt, c);
    return r;
  }
  static XtPoly x(std::uint32_t p) { return monomial(p, 1, 0); }
  static XtPoly t(std::uint32_t p) { return monomial(p, 0, 1); }
  static XtPoly constant(std::uint32_t p, long long c) { return monomial(p, 0, 0, c); }

  std::uint32_t prime() const { return p_; }
  const std::map<Key, std::uint32_t>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  std::uint32_t coefficient(int dx, int dt) const {
    auto it = terms_.find({dx, dt});
    return it == terms_.end() ? 0 : it->second;
  }

  void add_term(int dx, int dt, long long c) {
    Fp f{p_};
    std::uint32_t v = f.reduce(c);
    if (!v) return;
    auto [it, inserted] = terms_.try_emplace({dx, dt}, v);
    if (!inserted) {
      it->second = f.add(it->second, v);
      if (!it->second) terms_.erase(it);
    }
  }

  int degree_x() const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, k.first);
    return d;
  }
  /// Largest power of x dividing this polynomial (-1 for zero).
  int x_valuation() const {
    if (terms_.empty()) return -1;
    int v = terms_.begin()->first.first;
    for (const auto& [k, c] : terms_) v = std::min(v, k.first);
    return v;
  }
  bool is_homogeneous_of(int d) const {
    return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) { return t.first.first + t.first.second == d; });
  }

  friend XtPoly operator+(XtPoly a, const XtPoly& b) {
    for (const auto& [k, c] : b.terms_) a.add_term(k.first, k.second, c);
    return a;
  }
  friend XtPoly operator-(XtPoly a, const XtPoly& b) {
    for (const auto& [k, c] : b.terms_) a.add_term(k.first, k.second, -static_cast<long long>(c));
    return a;
  }
  friend XtPoly operator*(const XtPoly& a, const XtPoly& b) {
    XtPoly r(a.p_);
    Fp f{a.p_};
    for (const auto& [k, c] : a.terms_)
      for (const auto& [l, d] : b.terms_) r.add_term(k.first + l.first, k.second + l.second, f.mul(c, d));
    return r;
  }
  friend XtPoly operator*(XtPoly a, long long s) {
    XtPoly r(a.p_);
    for (const auto& [k, c] : a.terms_) r.add_term(k.first, k.second, static_cast<long long>(c) * (s % a.p_));
    return r;
  }
  XtPoly pow(unsigned e) const {
    XtPoly r = constant(p_, 1), base = *this;
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  friend bool operator==(const XtPoly&, const XtPoly&) = default;

  std::string to_string(const std::string& xname = "x") const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      auto [dx, dt] = it->first;
      std::string mono;
      auto put = [&](const std::string& v, int e) {
        if (!e) return;
        if (!mono.empty()) mono += "*";
        mono += v + (e > 1 ? "^" + std::to_string(e) : "");
      };
      put("t", dt);
      put(xname, dx);
      if (!out.empty()) out += " + ";
      if (mono.empty())
        out += std::to_string(it->second);
      else
        out += (it->second == 1 ? "" : std::to_string(it->second) + "*") + mono;
    }
    return out;
  }

 private:
  std::uint32_t p_;
  std::map<Key, std::uint32_t> terms_;
};

/// phi(x) = x (x + t)(x + 2t) ... (x + (p-1)t).
inline XtPoly phi(std::uint32_t p) {
  XtPoly r = XtPoly::x(p);
  for (std::uint32_t c = 1; c < p; ++c) r = r * (XtPoly::x(p) + XtPoly::t(p) * c);
  return r;
}

/// f_i = x^{i - p floor(i/p)} phi^{floor(i/p)}.
inline XtPoly f_poly(std::uint32_t p, int i) {
  if (i < 0) throw PreconditionError("f_poly needs i >= 0");
  return XtPoly::x(p).pow(static_cast<unsigned>(i % static_cast<int>(p))) *
         phi(p).pow(static_cast<unsigned>(i / static_cast<int>(p)));
}

/// Ring of the form A[t] with A = F_p[v_1..v_k]/(v_j^{n_j+1}); t is the last
/// box variable, truncated at t_cap.
inline BoxShapePtr with_t(const BoxShapePtr& base, int t_cap) {
  auto caps = base->caps();
  caps.push_back(t_cap);
  return make_box(base->prime(), caps);
}

/// epsilon_r: A[t] -> A, t -> r.
inline BoxElem epsilon_r(const BoxElem& z, const BoxShapePtr& base, long r) {
  const auto& sh = *z.shape();
  if (sh.variables() != base->variables() + 1) throw PreconditionError("epsilon_r: ring does not have a t variable");
  Fp f{sh.prime()};
  std::uint32_t rr = f.reduce(r);
  BoxElem out(base);
  std::vector<int> e(base->variables());
  for (std::size_t i = 0; i < sh.size(); ++i) {
    if (!z[i]) continue;
    auto ex = sh.exponents(i);
    std::copy(ex.begin(), ex.end() - 1, e.begin());
    std::size_t j = base->index_of(e);
    out[j] = f.add(out[j], f.mul(z[i], f.pow(rr, static_cast<std::uint64_t>(ex.back()))));
  }
  return out;
}

/// epsilon_r(e(E))^{-1} for E = F (x) L_c of rank n: the inverse of
/// sum_k c_k(F) (rc)^{n-k}.
inline BoxElem euler_inverse_eps(const std::vector<BoxElem>& f_chern, const BoxShapePtr& ring, long c, long r) {
  Fp f{ring->prime()};
  std::uint32_t rc = f.reduce(static_cast<long long>(r) * c);
  if (!rc) throw PreconditionError("euler_inverse_eps: rc must be nonzero mod p");
  const std::size_t n = f_chern.size();
  BoxElem u = BoxElem::constant(ring, f.pow(rc, n));
  for (std::size_t k = 1; k <= n; ++k) u += f_chern[k - 1] * static_cast<long long>(f.pow(rc, n - k));
  return u.inverse();
}

/// Class in Ch_{mu_p}(P(V)) = F_p[zeta, t]/prod_j (zeta + sigma w_j t),
/// stored in canonical form (zeta-degree <= n).
class EqProjClass {
 public:
  EqProjClass(std::uint32_t p, std::vector<long> weights, XtPoly element, int sigma = 1)
      : p_(p), weights_(std::move(weights)), sigma_(sigma), element_(XtPoly(p)) {
    if (weights_.empty()) throw PreconditionError("P(V) needs dim V >= 1");
    if (sigma != 1 && sigma != -1) throw PreconditionError("sigma must be +1 or -1");
    element_ = reduce(std::move(element));
  }

  std::uint32_t prime() const { return p_; }
  const std::vector<long>& weights() const { return weights_; }
  int dimension() const { return static_cast<int>(weights_.size()) - 1; }
  const XtPoly& element() const { return element_; }
  int sigma() const { return sigma_; }

  /// prod_j (zeta + sigma w_j t), monic of degree n+1 in zeta.
  XtPoly relation() const {
    XtPoly r = XtPoly::constant(p_, 1);
    for (long w : weights_) r = r * (XtPoly::x(p_) + XtPoly::t(p_) * (sigma_ * w));
    return r;
  }

  XtPoly reduce(XtPoly y) const {
    XtPoly rel = relation();
    const int top = dimension() + 1;
    while (y.degree_x() >= top) {
      // Cancel the leading zeta terms against zeta^{d-top} t^j * relation.
      int d = y.degree_x();
      XtPoly lead(p_);
      for (const auto& [k, c] : y.terms())
        if (k.first == d) lead.add_term(d - top, k.second, c);
      y = y - lead * rel;
    }
    return y;
  }

 private:
  std::uint32_t p_;
  std::vector<long> weights_;
  int sigma_;
  XtPoly element_;
};

struct LocalizationResult {
  std::uint32_t lhs = 0;
  std::uint32_t rhs = 0;
};

namespace detail {

/// Both sides of the localization identity; `restrict_sign` is the sign of
/// c t in the restriction of zeta to the component P(V(c)).
inline LocalizationResult localization_sides(const std::vector<long>& weights, const XtPoly& y, long r, int sigma,
                                             int restrict_sign) {
  if (weights.empty()) throw PreconditionError("localization_check needs at least one weight");
  const std::uint32_t p = y.prime();
  Fp f{p};
  const int n = static_cast<int>(weights.size()) - 1;
  int s = -1;
  for (const auto& [k, c] : y.terms()) s = std::max(s, k.first + k.second);
  if (!y.is_zero() && !y.is_homogeneous_of(s)) throw PreconditionError("localization_check: y is not homogeneous");
  if (s > n) throw PreconditionError("localization_check: degree of y exceeds n");
  if (f.reduce(r) == 0) throw PreconditionError("localization_check: r must be nonzero");

  LocalizationResult out;
  out.lhs = y.coefficient(n, 0);

  std::map<long, long> mult;
  for (long w : weights) ++mult[static_cast<long>(f.reduce(w))];
  for (const auto& [c, mc] : mult) {
    auto ring = make_box(p, {static_cast<int>(mc) - 1});
    BoxElem xi = BoxElem::variable(ring, 0);
    BoxElem one = BoxElem::constant(ring, 1);
    BoxElem euler = one;
    for (const auto& [c2, m2] : mult)
      if (c2 != c) euler *= (xi + one * (sigma * (c2 - c) * r)).pow(static_cast<unsigned>(m2));
    BoxElem zeta = xi + one * (restrict_sign * sigma * c * r);
    BoxElem iy(ring);
    for (const auto& [k, coeff] : y.terms())
      iy += zeta.pow(static_cast<unsigned>(k.first)) * static_cast<long long>(f.mul(coeff, f.pow(f.reduce(r), k.second)));
    out.rhs = f.add(out.rhs, (euler.inverse() * iy)[ring->top_index()]);
  }
  return out;
}

}  // namespace detail

/// deg eps(y) versus the fixed point sum of deg(eps_r(e(-N_c)) eps_r(i_c^* y)).
inline LocalizationResult localization_check(const EqProjClass& y, long r) {
  return detail::localization_sides(y.weights(), y.element(), r, y.sigma(), -1);
}

/// f_alpha(E) for E = sum of line bundles with characters, over A[t].
/// Lines are (c_1 on the base ring, character c).
inline BoxElem f_alpha_class(const std::vector<std::pair<BoxElem, long>>& lines, const BoxShapePtr& base,
                             const Partition& alpha) {
  const std::uint32_t p = base->prime();
  const int w = alpha.weight();
  auto ring = with_t(base, w);
  const BoxElem one = BoxElem::constant(ring, 1);
  const BoxElem t = BoxElem::variable(ring, base->variables());

  Family<BoxElem> g;
  for (int i = 0; i <= w; ++i) {
    XtPoly fi = f_poly(p, i);
    std::vector<BoxElem> coeffs(static_cast<std::size_t>(i) + 1, one.zero_like());
    for (const auto& [k, c] : fi.terms())
      coeffs[static_cast<std::size_t>(k.first)] += t.pow(static_cast<unsigned>(k.second)) * static_cast<long long>(c);
    g.push_back(std::move(coeffs));
  }

  LineSum<BoxElem> eq, plain;
  for (const auto& [c1, ch] : lines) {
    eq.emplace_back(1, detail::embed(c1, ring, 0) + t * ch);
    plain.emplace_back(1, c1);
  }
  BoxElem fa = generating_series(eq, g, one, w).coefficient(alpha);

  BoxElem base_one = BoxElem::constant(base, 1);
  BoxElem ca = generating_series(plain, standard_family(base_one, w), base_one, w).coefficient(alpha);
  if (!(epsilon_r(fa, base, 0) == ca)) throw InvariantViolation("eps(f_alpha(E)) differs from c_alpha(E)");
  return fa;
}

}  // namespace cobordlab

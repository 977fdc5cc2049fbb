#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cobordlab/box_ring.hpp"
#include "cobordlab/bpoly.hpp"
#include "cobordlab/cf_series.hpp"
#include "cobordlab/common.hpp"
#include "cobordlab/partitions.hpp"

namespace cobordlab {

// ---------------------------------------------------------------------------
// Variety expressions
// ---------------------------------------------------------------------------

/// P(n), or the Milnor hypersurface H(n, m) in P^n x P^m (stored with n <= m).
struct Atom {
  enum class Kind { P, H };
  Kind kind = Kind::P;
  int n = 0;
  int m = 0;

  static Atom projective(int n) {
    if (n < 0) throw PreconditionError("P(n) needs n >= 0");
    return {Kind::P, n, 0};
  }
  static Atom milnor(int n, int m) {
    if (n < 0 || m < 0) throw PreconditionError("H(n,m) needs n, m >= 0");
    return {Kind::H, std::min(n, m), std::max(n, m)};
  }

  int dimension() const { return kind == Kind::P ? n : n + m - 1; }
  std::string to_string() const {
    return kind == Kind::P ? "P(" + std::to_string(n) + ")"
                           : "H(" + std::to_string(n) + "," + std::to_string(m) + ")";
  }
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// multiplicity . atom * atom * ...
struct ProductTerm {
  long multiplicity = 1;
  std::vector<Atom> factors;

  int dimension() const {
    int d = 0;
    for (const auto& a : factors) d += a.dimension();
    return d;
  }
  friend bool operator==(const ProductTerm&, const ProductTerm&) = default;
};

/// Disjoint union of products of atoms.
struct VarietyExpr {
  std::vector<ProductTerm> terms;

  std::string to_string() const {
    std::string out;
    for (const auto& t : terms) {
      if (!out.empty()) out += " + ";
      if (t.multiplicity != 1) out += std::to_string(t.multiplicity) + ".";
      for (std::size_t j = 0; j < t.factors.size(); ++j) out += (j ? "*" : "") + t.factors[j].to_string();
    }
    return out.empty() ? "0" : out;
  }
  /// Largest dimension among terms, or -1 for the empty variety.
  int dimension() const {
    int d = -1;
    for (const auto& t : terms) d = std::max(d, t.dimension());
    return d;
  }
  friend bool operator==(const VarietyExpr&, const VarietyExpr&) = default;
};

// ---------------------------------------------------------------------------
// Chow ring models
// ---------------------------------------------------------------------------

/// F_p[h_1..h_k]/(h_j^{n_j+1}) with degree functional deg(z) = top
/// coefficient of multiplier * z.
struct ChowModel {
  BoxShapePtr shape;
  BoxElem multiplier;
  int virtual_dim = 0;

  std::uint32_t prime() const { return shape->prime(); }
  std::uint32_t degree(const BoxElem& z) const { return (multiplier * z)[shape->top_index()]; }
  BoxElem one() const { return BoxElem::constant(shape, 1); }
  BoxElem zero() const { return BoxElem(shape); }
};

inline ChowModel projective_space_model(std::uint32_t p, int n) {
  auto sh = make_box(p, {n});
  return {sh, BoxElem::constant(sh, 1), n};
}

/// H(n,m) modeled on its ambient P^n x P^m with degree twisted by h_1 + h_2.
inline ChowModel milnor_model(std::uint32_t p, int n, int m) {
  auto sh = make_box(p, {n, m});
  const long long ones[] = {1, 1};
  return {sh, BoxElem::linear(sh, ones), n + m - 1};
}

/// Virtual combination of line bundles on a model, plus a trivial rank offset.
class KClass {
 public:
  struct Line {
    long multiplicity;
    std::vector<int> c1;  // first Chern class sum_j c1[j] h_j
  };

  KClass(std::shared_ptr<const ChowModel> model, std::vector<Line> terms, long trivial_rank_offset)
      : model_(std::move(model)), terms_(std::move(terms)), offset_(trivial_rank_offset) {
    for (const auto& t : terms_)
      if (t.c1.size() != model_->shape->variables()) throw PreconditionError("KClass: line form has wrong arity");
  }

  const ChowModel& model() const { return *model_; }
  const std::shared_ptr<const ChowModel>& model_ptr() const { return model_; }
  const std::vector<Line>& terms() const { return terms_; }
  long trivial_rank_offset() const { return offset_; }
  long virtual_rank() const {
    long r = offset_;
    for (const auto& t : terms_) r += t.multiplicity;
    return r;
  }

  BoxElem c1(const Line& l) const {
    std::vector<long long> coeffs(l.c1.begin(), l.c1.end());
    return BoxElem::linear(model_->shape, coeffs);
  }

  LineSum<BoxElem> line_sum() const {
    LineSum<BoxElem> out;
    for (const auto& t : terms_) out.emplace_back(t.multiplicity, c1(t));
    return out;
  }

  friend KClass operator-(const KClass& e) {
    KClass r = e;
    for (auto& t : r.terms_) t.multiplicity = -t.multiplicity;
    r.offset_ = -r.offset_;
    return r;
  }
  friend KClass operator+(const KClass& a, const KClass& b) {
    if (a.model_ != b.model_) throw PreconditionError("KClass: adding classes on different models");
    KClass r = a;
    r.terms_.insert(r.terms_.end(), b.terms_.begin(), b.terms_.end());
    r.offset_ += b.offset_;
    return r;
  }

 private:
  std::shared_ptr<const ChowModel> model_;
  std::vector<Line> terms_;
  long offset_;
};

/// Euler sequence for P^n; ambient tangent minus the O(1,1) normal bundle for H(n,m).
inline KClass tangent_kclass(const Atom& atom, std::uint32_t p) {
  if (atom.kind == Atom::Kind::P) {
    auto model = std::make_shared<const ChowModel>(projective_space_model(p, atom.n));
    return KClass(model, {{atom.n + 1, {1}}}, -1);
  }
  auto model = std::make_shared<const ChowModel>(milnor_model(p, atom.n, atom.m));
  return KClass(model, {{atom.n + 1, {1, 0}}, {atom.m + 1, {0, 1}}, {-1, {1, 1}}}, -2);
}

namespace detail {

inline BoxElem embed(const BoxElem& x, const BoxShapePtr& target, std::size_t offset) {
  BoxElem r(target);
  const auto& src = *x.shape();
  std::vector<int> e(target->variables(), 0);
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (!x[i]) continue;
    auto se = src.exponents(i);
    std::fill(e.begin(), e.end(), 0);
    std::copy(se.begin(), se.end(), e.begin() + static_cast<long>(offset));
    r[target->index_of(e)] = x[i];
  }
  return r;
}

}  // namespace detail

/// Tangent class of a product of atoms on the product of their models.
inline KClass product_tangent_kclass(const std::vector<Atom>& factors, std::uint32_t p) {
  std::vector<KClass> parts;
  std::vector<int> caps;
  for (const auto& a : factors) {
    parts.push_back(tangent_kclass(a, p));
    const auto& c = parts.back().model().shape->caps();
    caps.insert(caps.end(), c.begin(), c.end());
  }
  auto sh = make_box(p, caps);
  BoxElem mult = BoxElem::constant(sh, 1);
  std::vector<KClass::Line> lines;
  long offset = 0;
  int dim = 0;
  std::size_t at = 0;
  for (const auto& k : parts) {
    mult *= detail::embed(k.model().multiplier, sh, at);
    for (const auto& l : k.terms()) {
      std::vector<int> c1(caps.size(), 0);
      std::copy(l.c1.begin(), l.c1.end(), c1.begin() + static_cast<long>(at));
      lines.push_back({l.multiplicity, std::move(c1)});
    }
    offset += k.trivial_rank_offset();
    dim += k.model().virtual_dim;
    at += k.model().shape->variables();
  }
  auto model = std::make_shared<const ChowModel>(ChowModel{sh, mult, dim});
  return KClass(model, std::move(lines), offset);
}

/// P_g(E) with coefficients in the model's Chow ring.
inline CFSeries<BoxElem> cf_series(const KClass& e, const Family<BoxElem>& g, int max_weight) {
  return generating_series(e.line_sum(), g, e.model().one(), max_weight);
}

inline CFSeries<BoxElem> cf_series(const KClass& e, int max_weight) {
  return cf_series(e, standard_family(e.model().one(), max_weight), max_weight);
}

/// Conner-Floyd class c_a(E).
inline BoxElem cf_class(const KClass& e, const Partition& a) {
  return cf_series(e, a.weight()).coefficient(a);
}

namespace detail {

inline BPoly numbers_from_model(const KClass& tangent, int max_weight) {
  const ChowModel& model = tangent.model();
  const std::uint32_t p = model.prime();
  int dim = model.virtual_dim;
  BPoly out(p, max_weight);
  if (dim < 0 || dim > max_weight) return out;
  auto series = cf_series(-tangent, dim);
  const auto& table = series.table();
  for (std::size_t id = table.weight_begin(dim); id < table.weight_end(dim); ++id)
    out.add_term(table.at(id), model.degree(series.at(id)));
  return out;
}

}  // namespace detail

/// Mod-p Chern numbers sum_a deg c_a(-T_X) b_a of an atom.
inline BPoly chern_numbers(const Atom& atom, std::uint32_t p, int max_weight) {
  static std::mutex mu;
  static std::map<std::tuple<Atom, std::uint32_t>, BPoly> memo;
  int dim = atom.dimension();
  if (dim < 0 || dim > max_weight) return BPoly(p, max_weight);
  {
    std::lock_guard lock(mu);
    if (auto it = memo.find({atom, p}); it != memo.end()) return it->second.with_max_weight(max_weight);
  }
  BPoly x = detail::numbers_from_model(tangent_kclass(atom, p), dim);
  std::lock_guard lock(mu);
  memo.emplace(std::make_tuple(atom, p), x);
  return x.with_max_weight(max_weight);
}

/// Classes of products multiply, disjoint unions add.
inline BPoly chern_numbers(const VarietyExpr& expr, std::uint32_t p, int max_weight) {
  BPoly total(p, max_weight);
  for (const auto& term : expr.terms) {
    BPoly prod = BPoly::one(p, max_weight);
    for (const auto& a : term.factors) prod = prod * chern_numbers(a, p, max_weight);
    total += prod * term.multiplicity;
  }
  return total;
}

/// Chern numbers of a product computed in the joint Chow model, without
/// multiplying factor classes.
inline BPoly chern_numbers_direct(const std::vector<Atom>& factors, std::uint32_t p, int max_weight) {
  return detail::numbers_from_model(product_tangent_kclass(factors, p), max_weight);
}

}  // namespace cobordlab

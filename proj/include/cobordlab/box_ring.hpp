#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cobordlab/common.hpp"

namespace cobordlab {

/// Shape of the truncated polynomial ring F_p[v_1..v_k]/(v_j^{cap_j+1}).
///
/// Elements are dense coefficient arrays over the exponent box in mixed
/// radix order, so the index of a product monomial is the sum of indices
/// whenever no exponent overflows its cap.
class BoxShape {
 public:
  BoxShape(std::uint32_t p, std::vector<int> caps) : p_(p), caps_(std::move(caps)) {
    require_prime(p);
    strides_.resize(caps_.size());
    std::size_t s = 1;
    for (std::size_t j = 0; j < caps_.size(); ++j) {
      if (caps_[j] < 0) throw PreconditionError("negative exponent cap");
      strides_[j] = s;
      s *= static_cast<std::size_t>(caps_[j] + 1);
    }
    size_ = s;
    exps_.resize(size_ * caps_.size());
    degree_.resize(size_);
    for (std::size_t i = 0; i < size_; ++i) {
      std::size_t rest = i;
      int d = 0;
      for (std::size_t j = 0; j < caps_.size(); ++j) {
        int e = static_cast<int>(rest % static_cast<std::size_t>(caps_[j] + 1));
        rest /= static_cast<std::size_t>(caps_[j] + 1);
        exps_[i * caps_.size() + j] = e;
        d += e;
      }
      degree_[i] = d;
    }
  }

  std::uint32_t prime() const { return p_; }
  std::size_t variables() const { return caps_.size(); }
  const std::vector<int>& caps() const { return caps_; }
  std::size_t size() const { return size_; }
  std::span<const int> exponents(std::size_t index) const {
    return {exps_.data() + index * caps_.size(), caps_.size()};
  }
  int degree(std::size_t index) const { return degree_[index]; }
  std::size_t stride(std::size_t var) const { return strides_[var]; }
  std::size_t top_index() const { return size_ - 1; }

  /// Index of the monomial with the given exponents, or size() if outside the box.
  std::size_t index_of(std::span<const int> e) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < caps_.size(); ++j) {
      if (e[j] < 0 || e[j] > caps_[j]) return size_;
      idx += static_cast<std::size_t>(e[j]) * strides_[j];
    }
    return idx;
  }

  bool fits(std::size_t a, std::size_t b) const {
    const int* ea = exps_.data() + a * caps_.size();
    const int* eb = exps_.data() + b * caps_.size();
    for (std::size_t j = 0; j < caps_.size(); ++j)
      if (ea[j] + eb[j] > caps_[j]) return false;
    return true;
  }

  friend bool operator==(const BoxShape& a, const BoxShape& b) { return a.p_ == b.p_ && a.caps_ == b.caps_; }

 private:
  std::uint32_t p_;
  std::vector<int> caps_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
  std::vector<int> exps_;
  std::vector<int> degree_;
};

using BoxShapePtr = std::shared_ptr<const BoxShape>;

inline BoxShapePtr make_box(std::uint32_t p, std::vector<int> caps) {
  return std::make_shared<const BoxShape>(p, std::move(caps));
}

/// Element of a BoxShape ring.
class BoxElem {
 public:
  BoxElem() = default;
  explicit BoxElem(BoxShapePtr shape) : shape_(std::move(shape)), c_(shape_->size(), 0) {}

  static BoxElem constant(BoxShapePtr shape, long long v) {
    BoxElem e(std::move(shape));
    e.c_[0] = e.field().reduce(v);
    return e;
  }
  static BoxElem variable(BoxShapePtr shape, std::size_t var) {
    BoxElem e(std::move(shape));
    if (e.shape_->caps()[var] >= 1) e.c_[e.shape_->stride(var)] = 1;
    return e;
  }
  /// Linear form sum_j coeffs[j] * v_j.
  static BoxElem linear(BoxShapePtr shape, std::span<const long long> coeffs) {
    BoxElem e(std::move(shape));
    for (std::size_t j = 0; j < coeffs.size(); ++j)
      if (e.shape_->caps()[j] >= 1) e.c_[e.shape_->stride(j)] = e.field().reduce(coeffs[j]);
    return e;
  }

  const BoxShapePtr& shape() const { return shape_; }
  Fp field() const { return Fp{shape_->prime()}; }
  std::uint32_t operator[](std::size_t i) const { return c_[i]; }
  std::uint32_t& operator[](std::size_t i) { return c_[i]; }
  std::span<const std::uint32_t> coefficients() const { return c_; }

  std::uint32_t coefficient(std::span<const int> e) const {
    std::size_t i = shape_->index_of(e);
    return i == shape_->size() ? 0 : c_[i];
  }

  bool is_zero() const {
    for (auto v : c_)
      if (v) return false;
    return true;
  }

  BoxElem zero_like() const { return BoxElem(shape_); }
  BoxElem one_like() const { return constant(shape_, 1); }

  BoxElem& operator+=(const BoxElem& o) {
    check(o);
    Fp f = field();
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = f.add(c_[i], o.c_[i]);
    return *this;
  }
  BoxElem& operator-=(const BoxElem& o) {
    check(o);
    Fp f = field();
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = f.sub(c_[i], o.c_[i]);
    return *this;
  }
  friend BoxElem operator+(BoxElem a, const BoxElem& b) { return a += b; }
  friend BoxElem operator-(BoxElem a, const BoxElem& b) { return a -= b; }
  friend BoxElem operator-(BoxElem a) {
    Fp f = a.field();
    for (auto& v : a.c_) v = f.neg(v);
    return a;
  }
  friend BoxElem operator*(BoxElem a, long long s) {
    Fp f = a.field();
    std::uint32_t k = f.reduce(s);
    for (auto& v : a.c_) v = f.mul(v, k);
    return a;
  }

  friend BoxElem operator*(const BoxElem& a, const BoxElem& b) {
    a.check(b);
    const BoxShape& sh = *a.shape_;
    BoxElem r(a.shape_);
    std::vector<std::uint64_t> acc(sh.size(), 0);
    const std::uint64_t p = sh.prime();
    for (std::size_t i = 0; i < sh.size(); ++i) {
      if (!a.c_[i]) continue;
      for (std::size_t j = 0; i + j < sh.size(); ++j) {
        if (!b.c_[j] || !sh.fits(i, j)) continue;
        acc[i + j] = (acc[i + j] + static_cast<std::uint64_t>(a.c_[i]) * b.c_[j]) % p;
      }
    }
    for (std::size_t k = 0; k < sh.size(); ++k) r.c_[k] = static_cast<std::uint32_t>(acc[k]);
    return r;
  }
  BoxElem& operator*=(const BoxElem& o) { return *this = *this * o; }

  BoxElem pow(unsigned e) const {
    BoxElem r = one_like(), base = *this;
    while (e) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

  /// Inverse of a unit: nonzero constant term, nilpotent remainder, so
  /// u^{-1} = c^{-1} sum_k (-n/c)^k with n the non-constant part.
  BoxElem inverse() const {
    Fp f = field();
    if (c_[0] == 0) throw PreconditionError("BoxElem::inverse: constant term is zero");
    std::uint32_t cinv = f.inv(c_[0]);
    BoxElem nil = *this * cinv;
    nil.c_[0] = 0;
    nil = -nil;
    BoxElem r = one_like(), term = one_like();
    int max_deg = 0;
    for (int cap : shape_->caps()) max_deg += cap;
    for (int k = 1; k <= max_deg; ++k) {
      term *= nil;
      if (term.is_zero()) break;
      r += term;
    }
    return r * cinv;
  }

  /// Part of total degree d.
  BoxElem homogeneous_part(int d) const {
    BoxElem r(shape_);
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (shape_->degree(i) == d) r.c_[i] = c_[i];
    return r;
  }

  friend bool operator==(const BoxElem& a, const BoxElem& b) { return *a.shape_ == *b.shape_ && a.c_ == b.c_; }

  std::string to_string(const std::vector<std::string>& names = {}) const {
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (!c_[i]) continue;
      std::string mono;
      auto e = shape_->exponents(i);
      for (std::size_t j = 0; j < e.size(); ++j) {
        if (!e[j]) continue;
        if (!mono.empty()) mono += "*";
        mono += j < names.size() ? names[j] : "h" + std::to_string(j + 1);
        if (e[j] > 1) mono += "^" + std::to_string(e[j]);
      }
      if (!out.empty()) out += " + ";
      if (mono.empty())
        out += std::to_string(c_[i]);
      else
        out += (c_[i] == 1 ? "" : std::to_string(c_[i]) + "*") + mono;
    }
    return out.empty() ? "0" : out;
  }

 private:
  void check(const BoxElem& o) const {
    if (shape_ != o.shape_ && !(*shape_ == *o.shape_)) throw PreconditionError("BoxElem: ring mismatch");
  }

  BoxShapePtr shape_;
  std::vector<std::uint32_t> c_;
};

}  // namespace cobordlab

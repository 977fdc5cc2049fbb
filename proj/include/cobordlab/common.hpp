#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace cobordlab {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A coefficient was requested above the weight up to which a series is known.
struct TruncationError : Error {
  using Error::Error;
};

struct PrimeMismatch : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  using Error::Error;
};

/// An internal consistency check failed; indicates a bug, not bad input.
struct InvariantViolation : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& what, std::size_t pos)
      : Error(what + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

// ---------------------------------------------------------------------------
// Integers extended by -infinity (degrees of zero, dimension of empty sets)
// ---------------------------------------------------------------------------

class ExtInt {
 public:
  constexpr ExtInt() = default;  // -inf
  constexpr ExtInt(long v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtInt neg_inf() { return ExtInt(); }

  constexpr bool is_neg_inf() const { return !value_.has_value(); }
  constexpr long value() const {
    if (!value_) throw std::logic_error("ExtInt: -inf has no finite value");
    return *value_;
  }

  friend constexpr bool operator==(const ExtInt&, const ExtInt&) = default;
  friend constexpr std::strong_ordering operator<=>(const ExtInt& a, const ExtInt& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) return !a.is_neg_inf() <=> !b.is_neg_inf();
    return *a.value_ <=> *b.value_;
  }
  friend constexpr ExtInt operator+(const ExtInt& a, const ExtInt& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) return neg_inf();
    return ExtInt(*a.value_ + *b.value_);
  }

  std::string to_string() const { return value_ ? std::to_string(*value_) : "-inf"; }

 private:
  std::optional<long> value_;
};

inline ExtInt max(const ExtInt& a, const ExtInt& b) { return a < b ? b : a; }

// ---------------------------------------------------------------------------
// Small number theory helpers
// ---------------------------------------------------------------------------

inline bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// True iff n = p^k for some k >= 0.
inline bool is_power_of(std::uint64_t n, std::uint32_t p) {
  if (n == 0) return false;
  while (n % p == 0) n /= p;
  return n == 1;
}

/// Membership in N_p = { i >= 1 : i+1 is not a power of p }.
inline bool np_contains(long i, std::uint32_t p) {
  return i >= 1 && !is_power_of(static_cast<std::uint64_t>(i) + 1, p);
}

inline long floor_div(long a, long b) {
  long d = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? d - 1 : d;
}

inline void require_prime(std::uint32_t p) {
  if (!is_prime(p) || p > 65521) throw PreconditionError("not a supported prime: " + std::to_string(p));
}

/// Arithmetic in Z/p on residues in [0, p).
struct Fp {
  std::uint32_t p;

  std::uint32_t reduce(long long v) const {
    long long r = v % static_cast<long long>(p);
    return static_cast<std::uint32_t>(r < 0 ? r + p : r);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t s = a + b;
    return s >= p ? s - p : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return a >= b ? a - b : a + p - b; }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t r = 1 % p;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  std::uint32_t inv(std::uint32_t a) const {
    if (a % p == 0) throw PreconditionError("inverse of zero in F_" + std::to_string(p));
    return pow(a, p - 2);
  }
};

}  // namespace cobordlab

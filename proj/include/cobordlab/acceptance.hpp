#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cobordlab/actions.hpp"
#include "cobordlab/bounds.hpp"
#include "cobordlab/chow.hpp"
#include "cobordlab/cobordism.hpp"
#include "cobordlab/equivariant.hpp"

// Acceptance suite shared by the selftest command and the test binary.

namespace cobordlab::acceptance {

struct Result {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

struct Config {
  std::uint32_t p;
  long q;
};

inline const std::vector<Config>& configs() {
  static const std::vector<Config> c{{2, 2}, {2, 4}, {2, 8}, {3, 3}, {3, 9}};
  return c;
}

/// Families shared across criteria, built once per prime.
class Context {
 public:
  static constexpr int kWeight = 16;
  static constexpr std::uint64_t kPerturbSeed = 0x5eed;

  const GeneratorFamily& standard(std::uint32_t p) {
    auto& slot = standard_[p];
    if (!slot) slot = std::make_unique<GeneratorFamily>(standard_generators(p, kWeight));
    return *slot;
  }
  const GeneratorFamily& perturbed(std::uint32_t p) {
    auto& slot = perturbed_[p];
    if (!slot) slot = std::make_unique<GeneratorFamily>(perturbed_generators(standard(p), kPerturbSeed + p));
    return *slot;
  }

  /// Every action built by the suite, with its group order, for the soundness sweep.
  std::vector<std::pair<WeightedVariety, CharacterGroup>> actions;

 private:
  std::map<std::uint32_t, std::unique_ptr<GeneratorFamily>> standard_, perturbed_;
};

namespace detail {

inline BPoly literal(std::uint32_t p, int w, std::initializer_list<Partition> support) {
  BPoly x(p, w);
  for (const auto& a : support) x.add_term(a, 1);
  return x;
}

// Brute-force fixed-locus dimensions over the whole character group.
inline long brute_count(const std::vector<Character>& ws, const Character& c) {
  long k = 0;
  for (const auto& w : ws) k += (w == c) ? 1 : 0;
  return k;
}

inline ExtInt brute_fixed_dim_p(const PAct& a, const CharacterGroup& g) {
  ExtInt d = ExtInt::neg_inf();
  for (long k = 0; k < g.order(); ++k) {
    long m = brute_count(a.weights, g.character(k));
    if (m >= 1) d = max(d, ExtInt(m - 1));
  }
  return d;
}

inline ExtInt brute_fixed_dim_h(const HAct& h, const CharacterGroup& g) {
  ExtInt d = ExtInt::neg_inf();
  for (long i = 0; i < g.order(); ++i) {
    long mv = brute_count(h.v, g.character(i));
    if (mv < 1) continue;
    for (long j = 0; j < g.order(); ++j) {
      long rank = brute_count(h.w, g.character(j)) - (i == j ? 1 : 0);
      if (rank >= 1) d = max(d, ExtInt((mv - 1) + (rank - 1)));
    }
  }
  return d;
}

inline std::string fmt_fail(const std::string& what, long fails, long total) {
  std::ostringstream s;
  s << what << ": " << (total - fails) << "/" << total << " ok";
  return s.str();
}

}  // namespace detail

inline Result c1_projective_four(Context&) {
  BPoly got = chern_numbers(Atom::projective(4), 2, 4);
  BPoly want = detail::literal(2, 4, {{4}, {2, 2}, {2, 1, 1}});
  return {1, "class of P^4 mod 2 is b4 + b2^2 + b2*b1^2", got == want, "got " + got.to_string(), 0};
}

inline Result c2_projective_top(Context&) {
  long fails = 0, total = 0;
  for (std::uint32_t p : {2u, 3u, 5u, 7u})
    for (int i = 1; i <= 20; ++i) {
      ++total;
      std::uint32_t c = chern_numbers(Atom::projective(i), p, i).coefficient(Partition{i});
      if (c != Fp{p}.reduce(-(i + 1))) ++fails;
    }
  return {2, "c_(i)(P^i) = -(i+1) mod p", fails == 0, detail::fmt_fail("cases", fails, total), 0};
}

inline Result c3_milnor_top(Context&) {
  struct Case {
    std::uint32_t p;
    long k, s;
  };
  long fails = 0, total = 0;
  std::string detail;
  for (auto [p, k, s] : std::vector<Case>{{2, 3, 1}, {2, 3, 2}, {2, 5, 1}, {3, 2, 1}, {3, 4, 1}, {5, 2, 1}}) {
    long ps = 1;
    for (long j = 0; j < s; ++j) ps *= p;
    Atom h = Atom::milnor(static_cast<int>(ps), static_cast<int>((k - 1) * ps));
    int dim = h.dimension();
    std::uint32_t c = chern_numbers(h, p, dim).coefficient(Partition{dim});
    ++total;
    if (c != Fp{p}.reduce(k)) {
      ++fails;
      detail += " " + h.to_string() + " gave " + std::to_string(c);
    }
  }
  return {3, "c_(i)(H(p^s,(k-1)p^s)) = k mod p", fails == 0, detail::fmt_fail("cases", fails, total) + detail, 0};
}

inline Result c4_membership(Context& ctx) {
  const auto& fam = ctx.standard(2);
  const int w = Context::kWeight;
  auto member = [&](const BPoly& x) { return std::holds_alternative<GenPoly>(express_in_generators(x, fam)); };
  bool a = !member(detail::literal(2, w, {{2, 1, 1}}));
  bool b = member(detail::literal(2, w, {{2, 2}}));
  bool c = member(detail::literal(2, w, {{4}, {2, 2}, {2, 1, 1}}));
  std::string d = std::string("b2*b1^2 ") + (a ? "rejected" : "ACCEPTED") + ", b2^2 " + (b ? "member" : "REJECTED") +
                  ", b4+b2^2+b2*b1^2 " + (c ? "member" : "REJECTED");
  return {4, "L_2 membership", a && b && c, d, 0};
}

inline Result c5_dimq_degq(Context& ctx) {
  std::mt19937_64 rng(5);
  long fails = 0, total = 0;
  for (const auto& cfg : configs())
    for (const GeneratorFamily* fam : {&ctx.standard(cfg.p), &ctx.perturbed(cfg.p)})
      for (int k = 0; k < 200; ++k) {
        GenPoly g = random_gen_poly(cfg.p, Context::kWeight, rng);
        BPoly x = evaluate_gen_poly(g, *fam);
        ++total;
        if (dim_q_direct(x, cfg.q) != dim_q_via_generators(x, cfg.q, *fam) ||
            dim_q_direct(x, cfg.q) != genpoly_deg_q(g, cfg.q))
          ++fails;
      }
  return {5, "dim_q direct equals deg_q in generators", fails == 0, detail::fmt_fail("classes", fails, total), 0};
}

inline Result c6_realize(Context& ctx) {
  std::mt19937_64 rng(6);
  long fails = 0, total = 0;
  std::string first;
  for (const auto& cfg : configs()) {
    const auto& fam = ctx.standard(cfg.p);
    CharacterGroup g = CharacterGroup::cyclic(cfg.p, cfg.q);
    for (int k = 0; k < 100; ++k) {
      BPoly x = evaluate_gen_poly(random_gen_poly(cfg.p, Context::kWeight, rng), fam);
      ++total;
      try {
        Realization r = realize(x, g, fam);
        bool ok = r.achieved_dim == dim_q_direct(x, cfg.q) &&
                  chern_numbers(underlying_variety(r.action), cfg.p, x.max_weight()) == x;
        if (!ok) ++fails;
        ctx.actions.emplace_back(std::move(r.action), g);
      } catch (const Error& e) {
        ++fails;
        if (first.empty()) first = std::string(" first error: ") + e.what();
      }
    }
  }
  return {6, "realization achieves dim_q with the right class", fails == 0,
          detail::fmt_fail("classes", fails, total) + first, 0};
}

inline Result c7_boardman(Context&) {
  long fails = 0, total = 0;
  auto np = IndexSet::np(2);
  for (int n = 1; n <= 20; ++n)
    for (const auto& b : partitions_of(n, np)) {
      ++total;
      if (5 * pi_q(b, 2) < 2L * n) ++fails;  // pi_2 >= ceil(2n/5)
    }
  bool rho_ok = rho_q(np, 2) == Rational(2, 5);
  return {7, "N_2 monomials satisfy deg_2 >= (2/5) deg", fails == 0 && rho_ok,
          detail::fmt_fail("monomials", fails, total) + (rho_ok ? ", rho_2(N_2) = 2/5" : ", rho_2(N_2) WRONG"), 0};
}

inline Result c8_localization(Context&) {
  long fails = 0, total = 0;
  for (std::uint32_t p : {2u, 3u})
    for (int len = 1; len <= 5; ++len) {
      std::vector<long> w(static_cast<std::size_t>(len), 0);
      std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == w.size()) {
          const int n = len - 1;
          for (int a = 0; a <= n; ++a)
            for (int b = 0; a + b <= n; ++b)
              for (long r = 1; r < static_cast<long>(p); ++r) {
                auto res = localization_check(EqProjClass(p, w, XtPoly::monomial(p, a, b)), r);
                ++total;
                if (res.lhs != res.rhs) ++fails;
              }
          return;
        }
        for (long c = 0; c < static_cast<long>(p); ++c) {
          w[k] = c;
          rec(k + 1);
        }
      };
      rec(0);
    }
  return {8, "localization identity on P(V)", fails == 0, detail::fmt_fail("cases", fails, total), 0};
}

inline Result c9_phi(Context&) {
  long fails = 0, total = 0;
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    XtPoly closed = XtPoly::monomial(p, static_cast<int>(p), 0) - XtPoly::monomial(p, 1, static_cast<int>(p) - 1);
    ++total;
    if (!(phi(p) == closed)) ++fails;
    for (int i = 0; i <= 30; ++i) {
      XtPoly f = f_poly(p, i);
      ++total;
      if (f.x_valuation() < i / static_cast<int>(p) || !f.is_homogeneous_of(i)) ++fails;
    }
  }
  return {9, "phi closed form and x^floor(i/p) | f_i", fails == 0, detail::fmt_fail("checks", fails, total), 0};
}

inline Result c10_action_formulas(Context& ctx) {
  long fails = 0, total = 0;
  for (long q : {2L, 3L, 4L, 8L, 9L}) {
    CharacterGroup g = CharacterGroup::cyclic(q % 3 == 0 ? 3 : 2, q);
    for (long n = 0; n <= 30; ++n) {
      ++total;
      try {
        WeightedVariety x = construct_action_p(n, g);
        if (detail::brute_fixed_dim_p(std::get<PAct>(x.node), g) != ExtInt(n / q)) ++fails;
        ctx.actions.emplace_back(std::move(x), g);
      } catch (const Error&) {
        ++fails;
      }
    }
  }
  for (long q : {2L, 3L, 4L}) {
    CharacterGroup g = CharacterGroup::cyclic(q == 3 ? 3 : 2, q);
    for (long n = 0; n <= 8; ++n)
      for (long m = 0; m <= n; ++m) {
        ++total;
        long f = (n % q == 0 && m % q == 0) ? floor_div(m + n - 1, q) : m / q + n / q;
        ExtInt want = f < 0 ? ExtInt::neg_inf() : ExtInt(f);
        try {
          WeightedVariety x = construct_action_h(n, m, g);
          if (detail::brute_fixed_dim_h(std::get<HAct>(x.node), g) != want) ++fails;
          ctx.actions.emplace_back(std::move(x), g);
        } catch (const Error&) {
          ++fails;
        }
      }
  }
  return {10, "P^n and H(n,m) action formulas vs brute force", fails == 0, detail::fmt_fail("cases", fails, total), 0};
}

inline Result c11_soundness(Context& ctx) {
  // Include the generator actions as well.
  for (const auto& cfg : configs()) {
    CharacterGroup g = CharacterGroup::cyclic(cfg.p, cfg.q);
    for (int i = 1; i <= Context::kWeight; ++i)
      if (np_contains(i, cfg.p)) ctx.actions.emplace_back(construct_action_l(i, g), g);
  }
  long fails = 0;
  for (const auto& [x, g] : ctx.actions) {
    VarietyExpr e = underlying_variety(x);
    int w = std::max(0, e.dimension());
    BPoly cls = chern_numbers(e, g.prime(), w);
    if (fixed_dim(x) < main_bound(cls, g.order())) ++fails;
  }
  long total = static_cast<long>(ctx.actions.size());
  return {11, "fixed_dim >= main_bound for every constructed action", total > 0 && fails == 0,
          detail::fmt_fail("actions", fails, total), 0};
}

namespace detail {

/// Random homogeneous classes of weight <= 14 with d = dim_q x passing `pre`.
inline std::vector<BPoly> sample_classes(const GeneratorFamily& fam, long q, std::mt19937_64& rng,
                                         const std::function<bool(long n, long d)>& pre, int want) {
  std::vector<BPoly> out;
  auto np = IndexSet::np(fam.prime());
  std::uniform_int_distribution<int> wdist(1, 14);
  std::uniform_int_distribution<long long> cdist(1, fam.prime() - 1);
  for (int tries = 0; tries < 200000 && static_cast<int>(out.size()) < want; ++tries) {
    int n = wdist(rng);
    auto bs = partitions_of(n, np);
    if (bs.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, bs.size() - 1);
    std::uniform_int_distribution<int> count(1, 3);
    GenPoly g(fam.prime());
    for (int k = count(rng); k > 0; --k) g.add_term(bs[pick(rng)], cdist(rng));
    if (g.is_zero()) continue;
    BPoly x = evaluate_gen_poly(g, fam);
    ExtInt d = dim_q_direct(x, q);
    if (pre(n, d.value())) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace detail

inline Result c12_divisibility(Context& ctx) {
  const int want = 50;
  std::mt19937_64 rng(12);
  long fails = 0, total = 0;
  std::string short_samples;

  auto run = [&](const GeneratorFamily& fam, long q, const std::function<bool(long, long)>& pre,
                 const std::function<bool(const BPoly&, long)>& check, const std::string& label) {
    auto xs = detail::sample_classes(fam, q, rng, pre, want);
    if (static_cast<int>(xs.size()) < want) short_samples += " " + label + " only " + std::to_string(xs.size());
    for (const auto& x : xs) {
      ++total;
      if (!check(x, dim_q_direct(x, q).value())) ++fails;
    }
  };

  const auto& f3 = ctx.standard(3);
  run(
      f3, 3, [](long n, long d) { return n >= 5 * d; },
      [&](const BPoly& x, long d) { return small_fixed_divisibility(x, 3, d, f3); }, "q=3");
  const auto& f2 = ctx.standard(2);
  run(
      f2, 4, [](long n, long d) { return n >= 7 * d; },
      [&](const BPoly& x, long d) { return small_fixed_divisibility(x, 4, d, f2); }, "q=4");
  run(
      f2, 2, [](long n, long d) { return 3 * n >= 7 * d; },
      [&](const BPoly& x, long d) { return milnor_divisibility_check(x, d, f2); }, "milnor");

  return {12, "divisibility corollaries at d = dim_q", fails == 0 && short_samples.empty(),
          detail::fmt_fail("classes", fails, total) + short_samples, 0};
}

/// Runs all criteria in order. Exceptions count as failures.
inline std::vector<Result> run_all() {
  Context ctx;
  using Fn = Result (*)(Context&);
  const std::vector<std::pair<int, Fn>> fns{
      {1, c1_projective_four}, {2, c2_projective_top}, {3, c3_milnor_top},   {4, c4_membership},
      {5, c5_dimq_degq},       {6, c6_realize},        {7, c7_boardman},     {8, c8_localization},
      {9, c9_phi},             {10, c10_action_formulas}, {11, c11_soundness}, {12, c12_divisibility}};
  std::vector<Result> out;
  for (auto [id, fn] : fns) {
    auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = fn(ctx);
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what(), 0};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string format(const Result& r) {
  std::ostringstream s;
  s << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << r.detail << "; ";
  s.setf(std::ios::fixed);
  s.precision(2);
  s << r.seconds << "s)";
  return s.str();
}

}  // namespace cobordlab::acceptance

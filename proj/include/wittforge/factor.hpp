#pragma once

// Factorization of univariate polynomials over F_p (Cantor-Zassenhaus) and
// over Q (Zassenhaus: modular factorization, Hensel lifting, recombination).

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "wittforge/poly.hpp"

namespace wittforge {

/// Monic irreducible factor with its multiplicity.
template <class C>
struct FactorPower {
  Poly<C> factor;
  int exponent;
};

template <class C>
struct Factorization {
  C unit;
  std::vector<FactorPower<C>> factors;  // sorted by graded-lex order of the factor
};

namespace detail {

inline FpPoly pth_root(const FpPoly& f) {
  auto ctx = f.context();
  std::vector<Fp> c;
  for (int i = 0; i <= f.degree(); i += static_cast<int>(ctx.p)) c.push_back(f.coeff(i));
  return FpPoly(ctx, std::move(c));
}

inline void squarefree_fp(const FpPoly& f, int mult, std::vector<FactorPower<Fp>>& out) {
  auto ctx = f.context();
  FpPoly one = FpPoly::constant(ctx, Fp(1, ctx.p));
  if (f.degree() <= 0) return;
  FpPoly b = f.derivative();
  if (b.is_zero()) {
    squarefree_fp(pth_root(f), mult * static_cast<int>(ctx.p), out);
    return;
  }
  FpPoly c = gcd(f, b);
  FpPoly w = f / c;
  int i = 1;
  while (w.degree() > 0) {
    FpPoly y = gcd(w, c);
    FpPoly z = w / y;
    if (z.degree() > 0) out.push_back({z.monic(), i * mult});
    ++i;
    w = y;
    c = c / y;
  }
  if (c.degree() > 0) squarefree_fp(pth_root(c.monic()), mult * static_cast<int>(ctx.p), out);
}

inline std::vector<std::pair<FpPoly, int>> distinct_degree(FpPoly f) {
  auto ctx = f.context();
  std::vector<std::pair<FpPoly, int>> out;
  FpPoly x = FpPoly::x(ctx);
  FpPoly h = x;
  int i = 1;
  while (f.degree() >= 2 * i) {
    h = powmod(h, Integer(ctx.p), f);
    FpPoly g = gcd(h - x, f);
    if (g.degree() > 0) {
      out.push_back({g, i});
      f = f / g;
      h = h % f;
    }
    ++i;
  }
  if (f.degree() > 0) out.push_back({f.monic(), f.degree()});
  return out;
}

inline void equal_degree(const FpPoly& g, int d, std::mt19937_64& rng, std::vector<FpPoly>& out) {
  if (g.degree() == d) {
    out.push_back(g.monic());
    return;
  }
  auto ctx = g.context();
  Integer q = ipow(Integer(ctx.p), static_cast<unsigned>(d));
  Integer e = (q - 1) / 2;
  for (;;) {
    std::vector<Fp> c;
    for (int i = 0; i < g.degree(); ++i) c.push_back(Fp(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(ctx.p)), ctx.p));
    FpPoly a(ctx, std::move(c));
    if (a.degree() <= 0) continue;
    FpPoly b = powmod(a, e, g) - FpPoly::constant(ctx, Fp(1, ctx.p));
    FpPoly h = gcd(b, g);
    if (h.degree() > 0 && h.degree() < g.degree()) {
      equal_degree(h, d, rng, out);
      equal_degree((g / h).monic(), d, rng, out);
      return;
    }
  }
}

/// Distinct monic irreducible factors of a squarefree monic polynomial over F_p.
inline std::vector<FpPoly> factor_squarefree_fp(const FpPoly& f) {
  require(f.context().p != 2, ErrorCode::ResidueCharTwo, "polynomial factorization in characteristic 2");
  std::mt19937_64 rng(0xc0ffee);
  std::vector<FpPoly> out;
  for (auto& [g, d] : distinct_degree(f)) equal_degree(g, d, rng, out);
  std::sort(out.begin(), out.end());
  return out;
}

// ---- integer polynomial helpers for Hensel lifting ----

using ZPoly = std::vector<Integer>;

inline void ztrim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
inline ZPoly zreduce(ZPoly a, const Integer& m) {
  for (auto& c : a) c = mod_floor(c, m);
  ztrim(a);
  return a;
}
inline ZPoly zadd(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  ztrim(r);
  return r;
}
inline ZPoly zsub(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  ztrim(r);
  return r;
}
inline ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  ztrim(r);
  return r;
}
/// Division by a polynomial that is monic modulo m.
inline std::pair<ZPoly, ZPoly> zdivmod_monic(ZPoly a, const ZPoly& b, const Integer& m) {
  a = zreduce(a, m);
  int db = static_cast<int>(b.size()) - 1;
  if (static_cast<int>(a.size()) - 1 < db) return {{}, a};
  ZPoly q(a.size() - b.size() + 1);
  for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
    Integer f = mod_floor(a[i], m);
    if (f == 0) continue;
    q[i - db] = f;
    for (int j = 0; j <= db; ++j) a[i - db + j] = mod_floor(a[i - db + j] - f * b[j], m);
  }
  ztrim(q);
  ztrim(a);
  return {zreduce(q, m), zreduce(a, m)};
}

inline ZPoly to_z(const FpPoly& f) {
  ZPoly r;
  for (auto& c : f.coeffs()) r.push_back(c.v);
  return r;
}
inline FpPoly to_fp(const ZPoly& f, std::int64_t p) {
  std::vector<Fp> c;
  for (auto& v : f) c.push_back(Fp::from(v, p));
  return FpPoly({p}, std::move(c));
}

struct HenselState {
  ZPoly g, h, s, t;
};

/// One quadratic Hensel step from modulus m to m^2.
inline HenselState hensel_step(const Integer& m, const ZPoly& f, const HenselState& st) {
  Integer m2 = m * m;
  ZPoly e = zreduce(zsub(f, zmul(st.g, st.h)), m2);
  auto [q, r] = zdivmod_monic(zmul(st.s, e), st.h, m2);
  ZPoly g2 = zreduce(zadd(st.g, zadd(zmul(st.t, e), zmul(q, st.g))), m2);
  ZPoly h2 = zreduce(zadd(st.h, r), m2);
  ZPoly b = zreduce(zsub(zadd(zmul(st.s, g2), zmul(st.t, h2)), ZPoly{1}), m2);
  auto [c, d] = zdivmod_monic(zmul(st.s, b), h2, m2);
  ZPoly s2 = zreduce(zsub(st.s, d), m2);
  ZPoly t2 = zreduce(zsub(zsub(st.t, zmul(st.t, b)), zmul(c, g2)), m2);
  return {g2, h2, s2, t2};
}

/// Lifts f ≡ lc(f) * prod(factors) (mod p) to monic factors modulo p^k.
inline std::vector<ZPoly> multifactor_lift(const ZPoly& f, const std::vector<FpPoly>& factors, std::int64_t p,
                                          int k) {
  Integer pk = ipow(Integer(p), static_cast<unsigned>(k));
  if (factors.size() == 1) {
    Integer lc = mod_floor(f.back(), pk);
    Integer inv = powm(lc, pk / p * (p - 1) - 1, pk);
    ZPoly r = f;
    for (auto& c : r) c = mod_floor(c * inv, pk);
    return {r};
  }
  std::size_t half = factors.size() / 2;
  std::vector<FpPoly> a(factors.begin(), factors.begin() + static_cast<std::ptrdiff_t>(half));
  std::vector<FpPoly> b(factors.begin() + static_cast<std::ptrdiff_t>(half), factors.end());
  FpPoly fp = to_fp(f, p);
  FpPoly g0 = FpPoly::constant({p}, fp.lc()), h0 = FpPoly::constant({p}, Fp(1, p));
  for (auto& x : a) g0 = g0 * x;
  for (auto& x : b) h0 = h0 * x;
  auto [one, s0, t0] = xgcd(g0, h0);
  s0 = s0 % h0;
  t0 = (FpPoly::constant({p}, Fp(1, p)) - s0 * g0) / h0;
  HenselState st{to_z(g0), to_z(h0), to_z(s0), to_z(t0)};
  Integer m = p;
  while (m < pk) {
    st = hensel_step(m, f, st);
    m *= m;
  }
  ZPoly g = zreduce(st.g, pk), h = zreduce(st.h, pk);
  auto left = multifactor_lift(g, a, p, k);
  auto right = multifactor_lift(h, b, p, k);
  left.insert(left.end(), right.begin(), right.end());
  return left;
}

inline Integer zcontent(const ZPoly& f) {
  Integer g = 0;
  for (auto& c : f) g = igcd(g, c);
  return g;
}

inline QPoly to_q(const ZPoly& f) {
  std::vector<Rational> c(f.begin(), f.end());
  return QPoly({}, std::move(c));
}

/// Primitive integer polynomial with positive leading coefficient proportional to f.
inline ZPoly primitive_integer(const QPoly& f) {
  Integer l = 1;
  for (auto& c : f.coeffs()) l = boost::multiprecision::lcm(l, den(c));
  ZPoly z;
  for (auto& c : f.coeffs()) z.push_back(num(c) * (l / den(c)));
  Integer g = zcontent(z);
  if (z.back() < 0) g = -g;
  for (auto& c : z) c /= g;
  return z;
}

inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

/// Irreducible factors (primitive, positive lc) of a squarefree primitive integer polynomial.
inline std::vector<ZPoly> zassenhaus(ZPoly f) {
  int n = static_cast<int>(f.size()) - 1;
  if (n <= 1) return {f};
  Integer lc = f.back();
  // Pick the prime giving the fewest modular factors among a few candidates.
  std::int64_t best_p = 0;
  std::vector<FpPoly> best;
  int tried = 0;
  for (std::int64_t p = 3; tried < 6 && p < 100000; p += 2) {
    if (!is_prime(Integer(p)) || lc % p == 0) continue;
    FpPoly fp = to_fp(f, p);
    if (fp.degree() != n || gcd(fp, fp.derivative()).degree() > 0) continue;
    auto fs = factor_squarefree_fp(fp.monic());
    ++tried;
    if (best_p == 0 || fs.size() < best.size()) {
      best_p = p;
      best = fs;
    }
    if (best.size() == 1) break;
  }
  require(best_p != 0, ErrorCode::InternalInvariant, "no good prime for factorization");
  if (best.size() == 1) return {f};

  Integer maxc = 0;
  for (auto& c : f) maxc = std::max(maxc, iabs(c));
  Integer bound = 2 * (Integer(1) << n) * (n + 1) * maxc * iabs(lc);
  int k = 1;
  Integer pk = best_p;
  while (pk <= bound) {
    pk *= best_p;
    ++k;
  }
  auto lifted = multifactor_lift(f, best, best_p, k);

  std::vector<ZPoly> result;
  std::size_t s = 1;
  while (2 * s <= lifted.size()) {
    bool found = false;
    std::vector<std::size_t> idx(s);
    std::iota(idx.begin(), idx.end(), 0);
    do {
      Integer l = f.back();
      ZPoly g{l};
      for (auto i : idx) g = zreduce(zmul(g, lifted[i]), pk);
      for (auto& c : g)
        if (c > pk / 2) c -= pk;
      Integer cg = zcontent(g);
      if (cg == 0) continue;
      for (auto& c : g) c /= cg;
      if (g.back() < 0)
        for (auto& c : g) c = -c;
      auto [q, r] = divmod(to_q(f), to_q(g));
      bool integral = r.is_zero();
      for (auto& c : q.coeffs()) integral = integral && den(c) == 1;
      if (!integral) continue;
      result.push_back(g);
      f = primitive_integer(q);
      std::vector<ZPoly> rest;
      for (std::size_t i = 0; i < lifted.size(); ++i)
        if (std::find(idx.begin(), idx.end(), i) == idx.end()) rest.push_back(lifted[i]);
      lifted = std::move(rest);
      found = true;
      break;
    } while (next_combination(idx, lifted.size()));
    if (!found) ++s;
  }
  result.push_back(f);
  return result;
}

}  // namespace detail

/// Full factorization over F_p (p odd): unit times monic irreducible powers.
inline Factorization<Fp> factor(const FpPoly& f) {
  require(!f.is_zero(), ErrorCode::ZeroElement, "factorization of zero polynomial");
  Factorization<Fp> out{f.lc(), {}};
  std::vector<FactorPower<Fp>> sqf;
  detail::squarefree_fp(f.monic(), 1, sqf);
  for (auto& [g, e] : sqf)
    for (auto& h : detail::factor_squarefree_fp(g)) out.factors.push_back({h, e});
  std::sort(out.factors.begin(), out.factors.end(), [](auto& a, auto& b) { return a.factor < b.factor; });
  return out;
}

/// Full factorization over Q: unit times monic irreducible powers.
inline Factorization<Rational> factor(const QPoly& f) {
  require(!f.is_zero(), ErrorCode::ZeroElement, "factorization of zero polynomial");
  Factorization<Rational> out{f.lc(), {}};
  QPoly a = f.monic();
  // Yun's squarefree decomposition.
  QPoly b = a.derivative();
  QPoly c = gcd(a, b);
  QPoly w = a / c;
  QPoly y = b / c;
  int i = 1;
  while (w.degree() > 0) {
    QPoly z = y - w.derivative();
    QPoly g = gcd(w, z);
    if (g.degree() > 0)
      for (auto& h : detail::zassenhaus(detail::primitive_integer(g)))
        out.factors.push_back({detail::to_q(h).monic(), i});
    w = w / g;
    y = z / g;
    ++i;
  }
  std::sort(out.factors.begin(), out.factors.end(), [](auto& a, auto& b) { return a.factor < b.factor; });
  return out;
}

template <class C>
bool is_irreducible(const Poly<C>& f) {
  if (f.degree() <= 0) return false;
  auto fac = factor(f);
  return fac.factors.size() == 1 && fac.factors[0].exponent == 1;
}

}  // namespace wittforge

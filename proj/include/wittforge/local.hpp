#pragma once

// Local symbols over the global fields Q and Q(sqrt m): places, Hilbert
// symbols, real signs and local square tests.

#include <algorithm>
#include <vector>

#include "wittforge/fields.hpp"

namespace wittforge {

/// A place of Q or Q(sqrt m). Finite places lie above the rational prime p;
/// `branch` selects one of two primes above a split p or one of two real
/// embeddings (sqrt m -> +/- sqrt m).
struct GlobalPlace {
  bool real = false;
  Integer p = 0;
  int branch = 0;

  friend bool operator==(const GlobalPlace&, const GlobalPlace&) = default;
  friend bool operator<(const GlobalPlace& a, const GlobalPlace& b) {
    if (a.real != b.real) return !a.real;
    if (a.p != b.p) return a.p < b.p;
    return a.branch < b.branch;
  }
};

inline std::string to_string(const GlobalPlace& v) {
  if (v.real) return v.branch ? "inf-" : "inf";
  return v.p.str() + (v.branch ? "'" : "");
}

// ---------------------------------------------------------------------------
// Q

namespace detail {

inline int eps2(const Integer& u) { return static_cast<int>(mod_floor((u - 1) / 2, 2)); }
inline int omega2(const Integer& u) { return static_cast<int>(mod_floor((u * u - 1) / 8, 2)); }

/// Hilbert symbol at 2 for x = 2^a u, y = 2^b w with u, w odd integers.
inline int hilbert2(int a, const Integer& u, int b, const Integer& w) {
  int e = eps2(u) * eps2(w) + a * omega2(w) + b * omega2(u);
  return e % 2 ? -1 : 1;
}

/// Hilbert symbol at an odd prime for x = p^a u, y = p^b w with u, w units mod p.
inline int hilbert_odd(int a, const Integer& u, int b, const Integer& w, const Integer& p) {
  int s = 1;
  if ((a * b) % 2 && mod_floor((p - 1) / 2, 2) == 1) s = -s;
  if (b % 2) s *= legendre(u, p);
  if (a % 2) s *= legendre(w, p);
  return s;
}

/// Odd integer congruent to the 2-adic unit part of r modulo 8.
inline Integer odd_part_mod8(const Rational& r, int v2) {
  Integer n = num(r), d = den(r);
  if (v2 > 0) n /= ipow(2, static_cast<unsigned>(v2));
  if (v2 < 0) d /= ipow(2, static_cast<unsigned>(-v2));
  return mod_floor(n * d, 8);  // d^2 = 1 mod 8
}

}  // namespace detail

/// Hilbert symbol (a, b)_v over Q for v a prime or the real place.
inline int hilbert_q(const Rational& a, const Rational& b, const GlobalPlace& v) {
  require(a != 0 && b != 0, ErrorCode::ZeroElement, "Hilbert symbol of zero");
  if (v.real) return (a < 0 && b < 0) ? -1 : 1;
  int va = rvaluation(a, v.p), vb = rvaluation(b, v.p);
  if (v.p == 2) return detail::hilbert2(va, detail::odd_part_mod8(a, va), vb, detail::odd_part_mod8(b, vb));
  Rational pa = Rational(ipow(v.p, static_cast<unsigned>(std::abs(va))));
  Rational pb = Rational(ipow(v.p, static_cast<unsigned>(std::abs(vb))));
  Rational ua = va >= 0 ? a / pa : a * pa, ub = vb >= 0 ? b / pb : b * pb;
  return detail::hilbert_odd(va, num(ua) * den(ua), vb, num(ub) * den(ub), v.p);
}

/// Square test in Q_p (or R for the real place).
inline bool local_square_q(const Rational& a, const GlobalPlace& v) {
  require(a != 0, ErrorCode::ZeroElement, "square test of zero");
  if (v.real) return a > 0;
  int va = rvaluation(a, v.p);
  if (va % 2) return false;
  if (v.p == 2) return detail::odd_part_mod8(a, va) == 1;
  Rational pa = Rational(ipow(v.p, static_cast<unsigned>(std::abs(va))));
  Rational u = va >= 0 ? a / pa : a * pa;
  return legendre(num(u) * den(u), v.p) == 1;
}

// ---------------------------------------------------------------------------
// Q(sqrt m)

namespace detail {

enum class Splitting { Split, Inert, Ramified };

inline Splitting splitting(const Integer& m, const Integer& p) {
  if (p == 2) {
    Integer r = mod_floor(m, 8);
    if (mod_floor(m, 4) != 1) return Splitting::Ramified;
    return r == 1 ? Splitting::Split : Splitting::Inert;
  }
  int l = legendre(m, p);
  return l == 0 ? Splitting::Ramified : (l == 1 ? Splitting::Split : Splitting::Inert);
}

/// x = (A + B sqrt m) / L with integers A, B, L > 0.
struct IntegralForm {
  Integer A, B, L;
};

inline IntegralForm integral_form(const QuadNum& x) {
  Integer L = boost::multiprecision::lcm(den(x.a), den(x.b));
  return {num(x.a) * (L / den(x.a)), num(x.b) * (L / den(x.b)), L};
}

/// Valuation and unit residue (as an integer mod p^prec) of x at a prime
/// above a split p, using the root r of m modulo p^k.
struct LocalUnit {
  int v;
  Integer u;  // representative of the unit part, p-adically accurate modulo p^prec
  int prec;
};

inline LocalUnit split_local(const QuadNum& x, const Integer& p, int branch, int extra) {
  auto f = integral_form(x);
  Integer N = f.A * f.A - x.m * f.B * f.B;
  int vn = ivaluation(N, p);
  int k = vn + extra + 2;
  Integer pk = ipow(p, static_cast<unsigned>(k));
  Integer r = p == 2 ? sqrt_mod_two_power(x.m, k + 2) : sqrt_mod_prime_power(x.m, p, k);
  if (branch) r = -r;
  Integer z = mod_floor(f.A + f.B * r, pk);
  require(z != 0, ErrorCode::InternalInvariant, "insufficient p-adic precision");
  int vz = ivaluation(z, p);
  int vl = ivaluation(f.L, p);
  Integer lu = f.L / ipow(p, static_cast<unsigned>(vl));
  Integer zu = z / ipow(p, static_cast<unsigned>(vz));
  int prec = k - vz;
  Integer mod = ipow(p, static_cast<unsigned>(prec));
  Integer inv = powm(mod_floor(lu, mod), (p == 2 ? mod / 2 : mod / p * (p - 1)) - 1, mod);
  return {vz - vl, mod_floor(zu * inv, mod), prec};
}

/// Valuation and residue norm (inert) or residue (ramified) at the unique prime above odd p.
struct TameData {
  int v;
  Integer residue;  // in F_p: norm of the residue (inert) or the residue itself (ramified)
};

inline TameData tame_data(const QuadNum& x, const Integer& p, Splitting s) {
  const bool a0 = x.a == 0, b0 = x.b == 0;
  if (s == Splitting::Inert) {
    int va = a0 ? 1 << 28 : rvaluation(x.a, p), vb = b0 ? 1 << 28 : rvaluation(x.b, p);
    int v = std::min(va, vb);
    Rational pv = Rational(ipow(p, static_cast<unsigned>(std::abs(v))));
    Rational a = v >= 0 ? x.a / pv : x.a * pv, b = v >= 0 ? x.b / pv : x.b * pv;
    Rational n = a * a - Rational(x.m) * b * b;
    return {v, num(n) * den(n)};
  }
  // Ramified: pi = sqrt m, pi^2 = m.
  int va = a0 ? 1 << 28 : 2 * rvaluation(x.a, p), vb = b0 ? 1 << 28 : 2 * rvaluation(x.b, p) + 1;
  if (va < vb) {
    int e = va / 2;
    Rational me = Rational(ipow(iabs(x.m), static_cast<unsigned>(std::abs(e)))) * (x.m < 0 && e % 2 ? -1 : 1);
    Rational u = e >= 0 ? x.a / me : x.a * me;
    return {va, num(u) * den(u)};
  }
  int e = (vb - 1) / 2;
  Rational me = Rational(ipow(iabs(x.m), static_cast<unsigned>(std::abs(e)))) * (x.m < 0 && e % 2 ? -1 : 1);
  Rational u = e >= 0 ? x.b / me : x.b * me;
  return {vb, num(u) * den(u)};
}

inline int quad_real_sign_impl(const QuadNum& x, int branch) {
  Rational b = branch ? Rational(-x.b) : x.b;
  int sa = sign(x.a), sb = sign(b);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // a and b*sqrt(m) of opposite signs: compare a^2 with m b^2.
  Rational d = x.a * x.a - Rational(x.m) * b * b;
  return sign(d) > 0 ? sa : sb;
}

}  // namespace detail

/// Sign of x under the real embedding with the given branch (m > 0).
inline int quad_real_sign(const QuadNum& x, int branch) {
  require(x.m > 0, ErrorCode::InvalidArgument, "imaginary quadratic field has no real place");
  require(!(x.a == 0 && x.b == 0), ErrorCode::ZeroElement, "sign of zero");
  return detail::quad_real_sign_impl(x, branch);
}

namespace detail {

inline int quad_hilbert_nondyadic(const QuadNum& x, const QuadNum& y, const GlobalPlace& v) {
  if (v.real) return (quad_real_sign(x, v.branch) < 0 && quad_real_sign(y, v.branch) < 0) ? -1 : 1;
  Splitting s = splitting(x.m, v.p);
  if (s == Splitting::Split) {
    auto lx = split_local(x, v.p, v.branch, 1), ly = split_local(y, v.p, v.branch, 1);
    return hilbert_odd(lx.v, lx.u, ly.v, ly.u, v.p);
  }
  auto tx = tame_data(x, v.p, s), ty = tame_data(y, v.p, s);
  if (s == Splitting::Inert) {
    int r = 1;
    if (ty.v % 2) r *= legendre(tx.residue, v.p);
    if (tx.v % 2) r *= legendre(ty.residue, v.p);
    return r;
  }
  return hilbert_odd(tx.v, tx.residue, ty.v, ty.residue, v.p);
}

inline Rational quad_norm_of(const QuadNum& x) { return qn_norm(x); }

}  // namespace detail

/// All places of Q(sqrt m) at which a Hilbert symbol between the given
/// elements can be nontrivial, plus every dyadic and real place.
inline std::vector<GlobalPlace> quad_relevant_places(const Integer& m, const std::vector<QuadNum>& elems) {
  std::vector<Integer> primes{2};
  for (auto& x : elems) {
    Rational n = detail::qn_norm(x);
    for (auto& p : prime_divisors(num(n) * den(n))) primes.push_back(p);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  std::vector<GlobalPlace> out;
  for (auto& p : primes) {
    out.push_back({false, p, 0});
    if (detail::splitting(m, p) == detail::Splitting::Split) out.push_back({false, p, 1});
  }
  if (m > 0) {
    out.push_back({true, 0, 0});
    out.push_back({true, 0, 1});
  }
  return out;
}

/// Hilbert symbol (x, y)_v over Q(sqrt m).
inline int quad_hilbert(const QuadNum& x, const QuadNum& y, const GlobalPlace& v) {
  require(x.m == y.m, ErrorCode::FieldMismatch, "elements of different quadratic fields");
  if (v.real || v.p != 2) return detail::quad_hilbert_nondyadic(x, y, v);
  if (detail::splitting(x.m, 2) == detail::Splitting::Split) {
    auto lx = detail::split_local(x, 2, v.branch, 3), ly = detail::split_local(y, 2, v.branch, 3);
    return detail::hilbert2(lx.v, mod_floor(lx.u, 8), ly.v, mod_floor(ly.u, 8));
  }
  // Unique dyadic prime: the product formula determines its symbol.
  int prod = 1;
  for (auto& w : quad_relevant_places(x.m, {x, y}))
    if (w.real || w.p != 2) prod *= detail::quad_hilbert_nondyadic(x, y, w);
  return prod;
}

// ---------------------------------------------------------------------------
// Uniform interface over Q and Q(sqrt m)

/// Relevant places for Hilbert symbols among `elems` over K in {Q, Q(sqrt m)}.
inline std::vector<GlobalPlace> relevant_places(const FieldDesc& k, const std::vector<Element>& elems) {
  if (k.kind == FieldDesc::Kind::Rationals) {
    std::vector<Integer> primes{2};
    for (auto& e : elems) {
      const auto& r = in_field(k, e).as<Rational>();
      for (auto& p : prime_divisors(num(r) * den(r))) primes.push_back(p);
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    std::vector<GlobalPlace> out;
    for (auto& p : primes) out.push_back({false, p, 0});
    out.push_back({true, 0, 0});
    return out;
  }
  require(k.kind == FieldDesc::Kind::QuadraticField, ErrorCode::UnsupportedField,
          "local symbols over " + to_string(k));
  std::vector<QuadNum> q;
  for (auto& e : elems) q.push_back(in_field(k, e).as<QuadNum>());
  return quad_relevant_places(k.m, q);
}

inline int hilbert(const FieldDesc& k, const Element& a, const Element& b, const GlobalPlace& v) {
  if (k.kind == FieldDesc::Kind::Rationals)
    return hilbert_q(in_field(k, a).as<Rational>(), in_field(k, b).as<Rational>(), v);
  require(k.kind == FieldDesc::Kind::QuadraticField, ErrorCode::UnsupportedField,
          "Hilbert symbols over " + to_string(k));
  return quad_hilbert(in_field(k, a).as<QuadNum>(), in_field(k, b).as<QuadNum>(), v);
}

/// Sign of a at a real place of Q or Q(sqrt m).
inline int real_sign_at(const FieldDesc& k, const Element& a, const GlobalPlace& v) {
  require(v.real, ErrorCode::InvalidArgument, "sign at a finite place");
  if (k.kind == FieldDesc::Kind::Rationals) return sign(in_field(k, a).as<Rational>());
  return quad_real_sign(in_field(k, a).as<QuadNum>(), v.branch);
}

inline std::vector<GlobalPlace> real_places(const FieldDesc& k) {
  if (k.kind == FieldDesc::Kind::Rationals) return {{true, 0, 0}};
  if (k.kind == FieldDesc::Kind::QuadraticField && k.m > 0) return {{true, 0, 0}, {true, 0, 1}};
  return {};
}

}  // namespace wittforge

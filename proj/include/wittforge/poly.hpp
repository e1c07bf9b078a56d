#pragma once

// Dense univariate polynomials over Q and F_p.

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wittforge/arith.hpp"

namespace wittforge {

template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<Rational> {
  struct Context {
    friend bool operator==(const Context&, const Context&) = default;
  };
  static Rational zero(Context) { return 0; }
  static Rational one(Context) { return 1; }
  static Rational from_int(Context, long long n) { return n; }
  static bool is_zero(const Rational& a) { return a == 0; }
  static Rational inverse(const Rational& a) { return 1 / a; }
  static Context context_of(const Rational&) { return {}; }
  static std::int64_t characteristic(Context) { return 0; }
  static std::strong_ordering compare(const Rational& a, const Rational& b) {
    return a < b ? std::strong_ordering::less : (b < a ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
};

template <>
struct CoeffTraits<Fp> {
  struct Context {
    std::int64_t p = 0;
    friend bool operator==(const Context&, const Context&) = default;
  };
  static Fp zero(Context c) { return Fp(0, c.p); }
  static Fp one(Context c) { return Fp(1, c.p); }
  static Fp from_int(Context c, long long n) { return Fp(n % c.p, c.p); }
  static bool is_zero(const Fp& a) { return a.v == 0; }
  static Fp inverse(const Fp& a) { return a.inverse(); }
  static Context context_of(const Fp& a) { return {a.p}; }
  static std::int64_t characteristic(Context c) { return c.p; }
  static std::strong_ordering compare(const Fp& a, const Fp& b) { return a.v <=> b.v; }
};

/// Polynomial with coefficients c[i] of x^i; no trailing zeros are stored.
template <class C>
class Poly {
 public:
  using Traits = CoeffTraits<C>;
  using Context = typename Traits::Context;

  Poly() = default;
  explicit Poly(Context ctx) : ctx_(ctx) {}
  Poly(Context ctx, std::vector<C> coeffs) : ctx_(ctx), c_(std::move(coeffs)) { trim(); }

  static Poly constant(Context ctx, const C& value) { return Poly(ctx, {value}); }
  static Poly monomial(Context ctx, const C& coeff, int degree) {
    std::vector<C> c(static_cast<std::size_t>(degree) + 1, Traits::zero(ctx));
    c.back() = coeff;
    return Poly(ctx, std::move(c));
  }
  static Poly x(Context ctx) { return monomial(ctx, Traits::one(ctx), 1); }

  const Context& context() const { return ctx_; }
  const std::vector<C>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  C coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : Traits::zero(ctx_); }
  C lc() const { return c_.empty() ? Traits::zero(ctx_) : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == Traits::one(ctx_); }

  Poly monic() const {
    if (is_zero()) return *this;
    C inv = Traits::inverse(lc());
    return *this * inv;
  }

  C eval(const C& at) const {
    C acc = Traits::zero(ctx_);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * at + *it;
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly(ctx_);
    std::vector<C> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * Traits::from_int(ctx_, static_cast<long long>(i)));
    return Poly(ctx_, std::move(d));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<C> r(std::max(a.c_.size(), b.c_.size()), Traits::zero(a.ctx_));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] + b.c_[i];
    return Poly(a.ctx_, std::move(r));
  }
  friend Poly operator-(const Poly& a) {
    std::vector<C> r;
    for (auto& c : a.c_) r.push_back(Traits::zero(a.ctx_) - c);
    return Poly(a.ctx_, std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.ctx_);
    std::vector<C> r(a.c_.size() + b.c_.size() - 1, Traits::zero(a.ctx_));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (Traits::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    }
    return Poly(a.ctx_, std::move(r));
  }
  friend Poly operator*(const Poly& a, const C& s) {
    std::vector<C> r;
    for (auto& c : a.c_) r.push_back(c * s);
    return Poly(a.ctx_, std::move(r));
  }

  /// Euclidean division; the divisor must be nonzero.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    require(!b.is_zero(), ErrorCode::ZeroElement, "polynomial division by zero");
    Poly q(a.ctx_), r = a;
    C inv = Traits::inverse(b.lc());
    std::vector<C> qc(a.c_.size() >= b.c_.size() ? a.c_.size() - b.c_.size() + 1 : 0, Traits::zero(a.ctx_));
    std::vector<C> rc = r.c_;
    for (int i = static_cast<int>(rc.size()) - 1; i >= b.degree(); --i) {
      if (Traits::is_zero(rc[i])) continue;
      C f = rc[i] * inv;
      qc[i - b.degree()] = f;
      for (int j = 0; j <= b.degree(); ++j) rc[i - b.degree() + j] = rc[i - b.degree() + j] - f * b.c_[j];
    }
    return {Poly(a.ctx_, std::move(qc)), Poly(a.ctx_, std::move(rc))};
  }
  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Graded-lex order: degree first, then coefficients from the top down.
  friend std::strong_ordering operator<=>(const Poly& a, const Poly& b) {
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    for (int i = a.degree(); i >= 0; --i)
      if (auto c = Traits::compare(a.c_[i], b.c_[i]); c != 0) return c;
    return std::strong_ordering::equal;
  }

 private:
  void trim() {
    while (!c_.empty() && Traits::is_zero(c_.back())) c_.pop_back();
  }

  Context ctx_{};
  std::vector<C> c_;
};

using QPoly = Poly<Rational>;
using FpPoly = Poly<Fp>;

template <class C>
Poly<C> pow(Poly<C> base, unsigned e) {
  Poly<C> acc = Poly<C>::constant(base.context(), CoeffTraits<C>::one(base.context()));
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

/// Monic gcd (zero when both inputs vanish).
template <class C>
Poly<C> gcd(Poly<C> a, Poly<C> b) {
  while (!b.is_zero()) {
    Poly<C> r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Returns (g, s, t) with s*a + t*b = g monic.
template <class C>
std::tuple<Poly<C>, Poly<C>, Poly<C>> xgcd(const Poly<C>& a, const Poly<C>& b) {
  using T = CoeffTraits<C>;
  auto ctx = a.context();
  Poly<C> r0 = a, r1 = b;
  Poly<C> s0 = Poly<C>::constant(ctx, T::one(ctx)), s1(ctx);
  Poly<C> t0(ctx), t1 = Poly<C>::constant(ctx, T::one(ctx));
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly<C> s2 = s0 - q * s1, t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  C inv = T::inverse(r0.lc());
  return {r0 * inv, s0 * inv, t0 * inv};
}

template <class C>
Poly<C> powmod(Poly<C> base, Integer e, const Poly<C>& mod) {
  Poly<C> acc = Poly<C>::constant(base.context(), CoeffTraits<C>::one(base.context())) % mod;
  base = base % mod;
  while (e > 0) {
    if ((e & 1) != 0) acc = acc * base % mod;
    base = base * base % mod;
    e >>= 1;
  }
  return acc;
}

/// Number of times the nonconstant polynomial f divides a != 0.
template <class C>
int multiplicity(Poly<C> a, const Poly<C>& f) {
  require(!a.is_zero(), ErrorCode::ZeroElement, "multiplicity in zero polynomial");
  int m = 0;
  for (;;) {
    auto [q, r] = divmod(a, f);
    if (!r.is_zero()) return m;
    a = std::move(q);
    ++m;
  }
}

inline std::string coeff_string(const Rational& c) { return to_string(c); }
inline std::string coeff_string(const Fp& c) { return to_string(c); }

/// Renders e.g. "3*t^2-t+1/2".
template <class C>
std::string to_string(const Poly<C>& p, const std::string& var) {
  using T = CoeffTraits<C>;
  if (p.is_zero()) return "0";
  std::string out;
  auto ctx = p.context();
  for (int i = p.degree(); i >= 0; --i) {
    C c = p.coeff(i);
    if (T::is_zero(c)) continue;
    bool negative = false;
    std::string body;
    if constexpr (std::is_same_v<C, Rational>) {
      negative = c < 0;
      if (negative) c = -c;
    }
    bool unit = c == T::one(ctx);
    if (i == 0) {
      body = coeff_string(c);
    } else {
      std::string mono = var + (i > 1 ? "^" + std::to_string(i) : "");
      body = unit ? mono : coeff_string(c) + "*" + mono;
    }
    if (out.empty()) {
      out = (negative ? "-" : "") + body;
    } else {
      out += (negative ? "-" : "+") + body;
    }
  }
  return out;
}

}  // namespace wittforge

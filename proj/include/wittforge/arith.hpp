#pragma once

// Exact integer and rational arithmetic, integer factorization, and the
// prime-field element type used throughout the library.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include "wittforge/errors.hpp"

namespace wittforge {

using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline Integer num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline int sign(const Integer& n) { return n.sign(); }
inline int sign(const Rational& r) { return r.sign(); }

inline Integer iabs(const Integer& n) { return n < 0 ? Integer(-n) : n; }

inline Integer igcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(iabs(a), iabs(b));
}

/// Floor of the square root of a non-negative integer.
inline Integer isqrt(const Integer& n) {
  require(n >= 0, ErrorCode::InvalidArgument, "isqrt of negative integer");
  return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const Integer& n) {
  if (n < 0) return false;
  Integer r = isqrt(n);
  return r * r == n;
}

inline bool is_perfect_square(const Rational& r) {
  return r >= 0 && is_perfect_square(num(r)) && is_perfect_square(den(r));
}

/// Exponent of the prime p in the nonzero integer n.
inline int ivaluation(Integer n, const Integer& p) {
  require(n != 0, ErrorCode::ZeroElement, "valuation of zero");
  n = iabs(n);
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline int rvaluation(const Rational& r, const Integer& p) {
  require(r != 0, ErrorCode::ZeroElement, "valuation of zero");
  return ivaluation(num(r), p) - ivaluation(den(r), p);
}

inline Integer powm(Integer base, Integer exp, const Integer& mod) {
  return boost::multiprecision::powm(base, exp, mod);
}

inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

inline Integer ipow(const Integer& base, unsigned exp) { return boost::multiprecision::pow(base, exp); }

inline bool is_prime(const Integer& n) {
  if (n < 2) return false;
  static const int small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (int p : small) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  // Deterministic seed keeps every result reproducible across runs.
  std::mt19937_64 gen(0x5eed);
  return boost::multiprecision::miller_rabin_test(n, 32, gen);
}

namespace detail {

inline Integer pollard_brent(const Integer& n) {
  if (n % 2 == 0) return 2;
  std::mt19937_64 gen(0xfac7);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Integer y = Integer(gen()) % n;
    Integer c = Integer(gen()) % (n - 1) + 1;
    Integer m = 64;
    Integer g = 1, r = 1, q = 1, x, ys;
    auto f = [&](const Integer& v) { return (v * v + c) % n; };
    do {
      x = y;
      for (Integer i = 0; i < r; ++i) y = f(y);
      Integer k = 0;
      do {
        ys = y;
        for (Integer i = 0, lim = std::min(m, Integer(r - k)); i < lim; ++i) {
          y = f(y);
          q = (q * iabs(x - y)) % n;
        }
        g = igcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = igcd(iabs(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
  fail(ErrorCode::InternalInvariant, "integer factorization did not converge");
}

inline void factor_into(Integer n, std::map<Integer, int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  Integer d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

/// Prime factorization of |n| for n != 0, as ascending (prime, exponent) pairs.
inline std::vector<std::pair<Integer, int>> factor_integer(const Integer& n_in) {
  require(n_in != 0, ErrorCode::ZeroElement, "factorization of zero");
  Integer n = iabs(n_in);
  std::map<Integer, int> found;
  for (unsigned p = 2; p < 2000 && Integer(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      n /= p;
      ++found[p];
    }
  }
  if (n > 1) detail::factor_into(n, found);
  return {found.begin(), found.end()};
}

inline std::vector<Integer> prime_divisors(const Integer& n) {
  std::vector<Integer> out;
  for (auto& [p, e] : factor_integer(n)) out.push_back(p);
  return out;
}

/// Signed squarefree integer in the square class of a nonzero rational.
inline Integer squarefree_class(const Rational& r) {
  require(r != 0, ErrorCode::ZeroElement, "square class of zero");
  Integer n = num(r) * den(r);
  Integer out = n < 0 ? Integer(-1) : Integer(1);
  for (auto& [p, e] : factor_integer(n))
    if (e % 2) out *= p;
  return out;
}

/// Legendre symbol (a/p) for an odd prime p; returns 0 when p | a.
inline int legendre(const Integer& a, const Integer& p) {
  Integer r = mod_floor(a, p);
  if (r == 0) return 0;
  Integer e = powm(r, (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

inline int legendre(const Rational& a, const Integer& p) {
  return legendre(num(a), p) * legendre(den(a), p);
}

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
inline Integer sqrt_mod_prime(const Integer& a_in, const Integer& p) {
  Integer a = mod_floor(a_in, p);
  if (a == 0) return 0;
  require(legendre(a, p) == 1, ErrorCode::InvalidArgument, "sqrt of a non-residue");
  if (p % 4 == 3) return powm(a, (p + 1) / 4, p);
  Integer q = p - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  Integer z = 2;
  while (legendre(z, p) != -1) ++z;
  Integer m = s;
  Integer c = powm(z, q, p);
  Integer t = powm(a, q, p);
  Integer r = powm(a, (q + 1) / 2, p);
  while (t != 1) {
    int i = 0;
    Integer tt = t;
    while (tt != 1) {
      tt = tt * tt % p;
      ++i;
    }
    Integer b = c;
    for (Integer j = 0; j < m - i - 1; ++j) b = b * b % p;
    m = i;
    c = b * b % p;
    t = t * c % p;
    r = r * b % p;
  }
  return r;
}

/// Lift a simple square root of a modulo an odd prime p to modulo p^k.
inline Integer sqrt_mod_prime_power(const Integer& a, const Integer& p, int k) {
  Integer r = sqrt_mod_prime(a, p);
  Integer mod = p;
  for (int i = 1; i < k; ++i) {
    mod *= p;
    // r <- r - (r^2 - a) / (2r)  (mod p^{i+1})
    Integer inv2r = powm(mod_floor(2 * r, mod), mod / p * (p - 1) - 1, mod);
    r = mod_floor(r - (r * r - a) * inv2r, mod);
  }
  return r;
}

/// Square root of an odd a ≡ 1 (mod 8) in Z/2^k.
inline Integer sqrt_mod_two_power(const Integer& a, int k) {
  require(mod_floor(a, 8) == 1, ErrorCode::InvalidArgument, "not a 2-adic square unit");
  Integer r = 1;
  for (int i = 3; i < k; ++i) {
    // r^2 ≡ a mod 2^i; adjust bit i-1 to get mod 2^{i+1}.
    Integer m = Integer(1) << (i + 1);
    if (mod_floor(r * r - a, m) != 0) r += Integer(1) << (i - 1);
  }
  return mod_floor(r, Integer(1) << k);
}

inline std::string to_string(const Rational& r) {
  if (den(r) == 1) return num(r).str();
  return num(r).str() + "/" + den(r).str();
}

/// Element of a prime field F_p. The modulus travels with the value so that
/// polynomials over F_p are self-describing.
struct Fp {
  std::int64_t v = 0;
  std::int64_t p = 0;

  Fp() = default;
  Fp(std::int64_t value, std::int64_t modulus)
      : v(modulus == 0 ? value : ((value % modulus) + modulus) % modulus), p(modulus) {}
  static Fp from(const Integer& value, std::int64_t modulus) {
    Integer r = mod_floor(value, modulus);
    return Fp(static_cast<std::int64_t>(r), modulus);
  }
  static Fp from(const Rational& value, std::int64_t modulus) {
    Fp d = from(den(value), modulus);
    require(d.v != 0, ErrorCode::NotAUnit, "denominator divisible by the characteristic");
    return from(num(value), modulus) / d;
  }

  bool is_zero() const { return v == 0; }

  friend Fp operator+(Fp a, Fp b) { return Fp((a.v + b.v) % a.p, a.p); }
  friend Fp operator-(Fp a, Fp b) { return Fp((a.v - b.v + a.p) % a.p, a.p); }
  friend Fp operator-(Fp a) { return Fp((a.p - a.v) % a.p, a.p); }
  friend Fp operator*(Fp a, Fp b) {
    return Fp(static_cast<std::int64_t>(static_cast<__int128>(a.v) * b.v % a.p), a.p);
  }
  Fp pow(std::uint64_t e) const {
    Fp base = *this, acc(1, p);
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }
  Fp inverse() const {
    require(v != 0, ErrorCode::ZeroElement, "inverse of zero in F_p");
    return pow(static_cast<std::uint64_t>(p - 2));
  }
  friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }
  friend bool operator==(Fp a, Fp b) { return a.v == b.v && a.p == b.p; }
  friend bool operator!=(Fp a, Fp b) { return !(a == b); }
  friend bool operator<(Fp a, Fp b) { return a.v < b.v; }

  /// Euler criterion; zero counts as a square.
  bool is_square() const {
    if (v == 0 || p == 2) return true;
    return pow(static_cast<std::uint64_t>((p - 1) / 2)).v == 1;
  }
};

inline std::string to_string(const Fp& a) { return std::to_string(a.v); }

}  // namespace wittforge

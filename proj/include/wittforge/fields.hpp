#pragma once

// Supported fields, their elements, discrete places, valuations, residue maps
// and square classes.
//
// Base fields are Q, F_p, Q(t) and F_p(t). Residue fields of places add
// Q(sqrt m), F_{p^d} and opaque number fields of degree >= 3.

#include <cctype>
#include <compare>
#include <limits>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wittforge/factor.hpp"

namespace wittforge {

/// a + b*sqrt(m) with m a squarefree integer different from 0 and 1.
struct QuadNum {
  Rational a, b;
  Integer m;
};

/// Residue class of a polynomial modulo a fixed irreducible modulus.
template <class C>
struct PolyMod {
  Poly<C> value, modulus;
};

/// Reduced fraction num/den with monic den.
template <class C>
struct RatFunc {
  Poly<C> num, den;
};

using GFElem = PolyMod<Fp>;
using NFElem = PolyMod<Rational>;
using QFunc = RatFunc<Rational>;
using FpFunc = RatFunc<Fp>;

struct FieldDesc {
  enum class Kind { Rationals, PrimeField, QuadraticField, GaloisField, NumberField, RationalFunction };

  Kind kind = Kind::Rationals;
  std::int64_t p = 0;  ///< PrimeField, GaloisField; base characteristic for RationalFunction (0 = Q)
  Integer m = 0;       ///< QuadraticField
  FpPoly gf_modulus;   ///< GaloisField
  QPoly nf_modulus;    ///< NumberField
  std::string var = "t";

  static FieldDesc rationals() { return {}; }
  static FieldDesc prime_field(std::int64_t p) {
    require(is_prime(Integer(p)), ErrorCode::InvalidArgument, "F_p needs a prime p");
    FieldDesc k;
    k.kind = Kind::PrimeField;
    k.p = p;
    return k;
  }
  static FieldDesc quadratic(const Integer& m) {
    FieldDesc k;
    k.kind = Kind::QuadraticField;
    k.m = m;
    return k;
  }
  static FieldDesc galois(const FpPoly& modulus) {
    FieldDesc k;
    k.kind = Kind::GaloisField;
    k.p = modulus.context().p;
    k.gf_modulus = modulus;
    return k;
  }
  static FieldDesc number_field(const QPoly& modulus) {
    FieldDesc k;
    k.kind = Kind::NumberField;
    k.nf_modulus = modulus;
    return k;
  }
  static FieldDesc function_field(std::int64_t base_p = 0, std::string var = "t") {
    require(base_p == 0 || is_prime(Integer(base_p)), ErrorCode::InvalidArgument, "F_p(t) needs a prime p");
    FieldDesc k;
    k.kind = Kind::RationalFunction;
    k.p = base_p;
    k.var = std::move(var);
    return k;
  }

  bool is_function_field() const { return kind == Kind::RationalFunction; }
  bool is_finite() const { return kind == Kind::PrimeField || kind == Kind::GaloisField; }
  std::int64_t characteristic() const {
    switch (kind) {
      case Kind::PrimeField:
      case Kind::GaloisField:
      case Kind::RationalFunction: return p;
      default: return 0;
    }
  }
  /// Constant field of a function field.
  FieldDesc base() const {
    require(is_function_field(), ErrorCode::InvalidArgument, "base() of a non-function field");
    return p == 0 ? rationals() : prime_field(p);
  }

  friend bool operator==(const FieldDesc& a, const FieldDesc& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::Rationals: return true;
      case Kind::PrimeField: return a.p == b.p;
      case Kind::QuadraticField: return a.m == b.m;
      case Kind::GaloisField: return a.gf_modulus == b.gf_modulus;
      case Kind::NumberField: return a.nf_modulus == b.nf_modulus;
      case Kind::RationalFunction: return a.p == b.p && a.var == b.var;
    }
    return false;
  }
};

inline std::string to_string(const FieldDesc& k) {
  switch (k.kind) {
    case FieldDesc::Kind::Rationals: return "Q";
    case FieldDesc::Kind::PrimeField: return "F_" + std::to_string(k.p);
    case FieldDesc::Kind::QuadraticField: return "Q(sqrt(" + k.m.str() + "))";
    case FieldDesc::Kind::GaloisField:
      return "F_" + std::to_string(k.p) + "[x]/(" + to_string(k.gf_modulus, "x") + ")";
    case FieldDesc::Kind::NumberField: return "Q[x]/(" + to_string(k.nf_modulus, "x") + ")";
    case FieldDesc::Kind::RationalFunction:
      return (k.p == 0 ? std::string("Q") : "F_" + std::to_string(k.p)) + "(" + k.var + ")";
  }
  return "?";
}

/// Rejects fields of characteristic two for form-theoretic work.
inline void require_odd_characteristic(const FieldDesc& k) {
  require(k.characteristic() != 2, ErrorCode::ResidueCharTwo, "characteristic 2 field " + to_string(k));
}

// ---------------------------------------------------------------------------
// Element-level arithmetic per representation

namespace detail {

inline QuadNum qn_add(const QuadNum& x, const QuadNum& y) { return {x.a + y.a, x.b + y.b, x.m}; }
inline QuadNum qn_neg(const QuadNum& x) { return {-x.a, -x.b, x.m}; }
inline QuadNum qn_mul(const QuadNum& x, const QuadNum& y) {
  return {x.a * y.a + Rational(x.m) * x.b * y.b, x.a * y.b + x.b * y.a, x.m};
}
inline Rational qn_norm(const QuadNum& x) { return x.a * x.a - Rational(x.m) * x.b * x.b; }
inline QuadNum qn_inv(const QuadNum& x) {
  Rational n = qn_norm(x);
  require(n != 0, ErrorCode::ZeroElement, "inverse of zero");
  return {x.a / n, -x.b / n, x.m};
}

template <class C>
PolyMod<C> pm_make(Poly<C> v, const Poly<C>& mod) {
  return {v % mod, mod};
}
template <class C>
PolyMod<C> pm_inv(const PolyMod<C>& x) {
  require(!x.value.is_zero(), ErrorCode::ZeroElement, "inverse of zero");
  auto [g, s, t] = xgcd(x.value, x.modulus);
  require(g.degree() == 0, ErrorCode::InternalInvariant, "modulus is not irreducible");
  return {s % x.modulus, x.modulus};
}

template <class C>
RatFunc<C> rf_make(Poly<C> n, Poly<C> d) {
  using T = CoeffTraits<C>;
  require(!d.is_zero(), ErrorCode::ZeroElement, "division by zero");
  auto ctx = d.context();
  if (n.is_zero()) return {Poly<C>(ctx), Poly<C>::constant(ctx, T::one(ctx))};
  Poly<C> g = gcd(n, d);
  if (g.degree() > 0) {
    n = n / g;
    d = d / g;
  }
  C inv = T::inverse(d.lc());
  return {n * inv, d * inv};
}
template <class C>
RatFunc<C> rf_const(typename Poly<C>::Context ctx, const C& c) {
  return rf_make(Poly<C>::constant(ctx, c), Poly<C>::constant(ctx, CoeffTraits<C>::one(ctx)));
}

template <class C>
std::strong_ordering poly_cmp(const Poly<C>& a, const Poly<C>& b) {
  return a <=> b;
}

}  // namespace detail

/// An element of one of the supported fields. The representation is
/// canonical, so structural equality is field equality.
class Element {
 public:
  using Value = std::variant<Rational, Fp, QuadNum, GFElem, NFElem, QFunc, FpFunc>;

  Element() : v_(Rational(0)) {}
  Element(long long n) : v_(Rational(n)) {}  // NOLINT(google-explicit-constructor)
  Element(int n) : v_(Rational(n)) {}        // NOLINT(google-explicit-constructor)
  Element(Rational r) : v_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Element(Integer n) : v_(Rational(n)) {}    // NOLINT(google-explicit-constructor)
  Element(Fp a) : v_(a) {}                   // NOLINT(google-explicit-constructor)
  Element(QuadNum x) : v_(std::move(x)) {}   // NOLINT(google-explicit-constructor)
  Element(GFElem x) : v_(detail::pm_make(x.value, x.modulus)) {}  // NOLINT(google-explicit-constructor)
  Element(NFElem x) : v_(detail::pm_make(x.value, x.modulus)) {}  // NOLINT(google-explicit-constructor)
  Element(QFunc f) : v_(detail::rf_make(f.num, f.den)) {}          // NOLINT(google-explicit-constructor)
  Element(FpFunc f) : v_(detail::rf_make(f.num, f.den)) {}         // NOLINT(google-explicit-constructor)

  const Value& value() const { return v_; }
  template <class T>
  bool holds() const {
    return std::holds_alternative<T>(v_);
  }
  template <class T>
  const T& as() const {
    require(holds<T>(), ErrorCode::FieldMismatch, "element has an unexpected representation");
    return std::get<T>(v_);
  }

  bool is_zero() const {
    return std::visit(
        [](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Rational>) return x == 0;
          else if constexpr (std::is_same_v<T, Fp>) return x.v == 0;
          else if constexpr (std::is_same_v<T, QuadNum>) return x.a == 0 && x.b == 0;
          else if constexpr (std::is_same_v<T, GFElem> || std::is_same_v<T, NFElem>) return x.value.is_zero();
          else return x.num.is_zero();
        },
        v_);
  }
  bool is_one() const { return *this == like(1); }

  /// The integer n viewed in the same field as this element.
  Element like(long long n) const { return coerce(Rational(n), *this); }
  Element like(const Rational& r) const { return coerce(r, *this); }

  Element inverse() const {
    require(!is_zero(), ErrorCode::ZeroElement, "inverse of zero");
    return std::visit(
        [](const auto& x) -> Element {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Rational>) return Rational(1 / x);
          else if constexpr (std::is_same_v<T, Fp>) return x.inverse();
          else if constexpr (std::is_same_v<T, QuadNum>) return detail::qn_inv(x);
          else if constexpr (std::is_same_v<T, GFElem> || std::is_same_v<T, NFElem>) return detail::pm_inv(x);
          else return T{x.den, x.num};
        },
        v_);
  }

  Element pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    Element acc = like(1), base = *this;
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  friend Element operator+(const Element& x, const Element& y) { return combine(x, y, Op::Add); }
  friend Element operator-(const Element& x, const Element& y) { return combine(x, y, Op::Sub); }
  friend Element operator*(const Element& x, const Element& y) { return combine(x, y, Op::Mul); }
  friend Element operator/(const Element& x, const Element& y) { return x * y.inverse(); }
  friend Element operator-(const Element& x) { return x.like(0) - x; }

  friend bool operator==(const Element& x, const Element& y) { return (x <=> y) == 0; }

  /// Total order: representation first, then value (graded-lex for polynomials).
  friend std::strong_ordering operator<=>(const Element& x, const Element& y) {
    if (auto c = x.v_.index() <=> y.v_.index(); c != 0) {
      if (x.holds<Rational>() || y.holds<Rational>()) {
        // Compare a rational constant against its image in the other representation.
        Element cx = x.holds<Rational>() ? coerce(x.as<Rational>(), y) : x;
        Element cy = y.holds<Rational>() ? coerce(y.as<Rational>(), x) : y;
        if (cx.v_.index() == cy.v_.index()) return cx <=> cy;
      }
      return c;
    }
    return std::visit(
        [&](const auto& a) -> std::strong_ordering {
          using T = std::decay_t<decltype(a)>;
          const T& b = std::get<T>(y.v_);
          if constexpr (std::is_same_v<T, Rational>) {
            return a < b ? std::strong_ordering::less
                         : (b < a ? std::strong_ordering::greater : std::strong_ordering::equal);
          } else if constexpr (std::is_same_v<T, Fp>) {
            if (auto c = a.p <=> b.p; c != 0) return c;
            return a.v <=> b.v;
          } else if constexpr (std::is_same_v<T, QuadNum>) {
            auto rc = [](const Rational& u, const Rational& v) {
              return u < v ? std::strong_ordering::less
                           : (v < u ? std::strong_ordering::greater : std::strong_ordering::equal);
            };
            if (auto c = rc(Rational(a.m), Rational(b.m)); c != 0) return c;
            if (auto c = rc(a.b, b.b); c != 0) return c;
            return rc(a.a, b.a);
          } else if constexpr (std::is_same_v<T, GFElem> || std::is_same_v<T, NFElem>) {
            if (auto c = a.modulus <=> b.modulus; c != 0) return c;
            return a.value <=> b.value;
          } else {
            if (auto c = a.num <=> b.num; c != 0) return c;
            return a.den <=> b.den;
          }
        },
        x.v_);
  }

  /// Image of a rational constant in the representation used by `like`.
  static Element coerce(const Rational& r, const Element& like) {
    return std::visit(
        [&](const auto& x) -> Element {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Rational>) return r;
          else if constexpr (std::is_same_v<T, Fp>) return Fp::from(r, x.p);
          else if constexpr (std::is_same_v<T, QuadNum>) return QuadNum{r, 0, x.m};
          else if constexpr (std::is_same_v<T, GFElem>)
            return GFElem{FpPoly::constant(x.modulus.context(), Fp::from(r, x.modulus.context().p)), x.modulus};
          else if constexpr (std::is_same_v<T, NFElem>) return NFElem{QPoly::constant({}, r), x.modulus};
          else if constexpr (std::is_same_v<T, QFunc>) return detail::rf_const<Rational>({}, r);
          else return detail::rf_const<Fp>(x.den.context(), Fp::from(r, x.den.context().p));
        },
        like.v_);
  }

 private:
  enum class Op { Add, Sub, Mul };

  static Element promote(const Element& x, const Element& like) {
    if (x.v_.index() == like.v_.index()) return x;
    if (x.holds<Rational>()) return coerce(x.as<Rational>(), like);
    if (x.holds<Fp>()) {
      const Fp& a = x.as<Fp>();
      if (like.holds<GFElem>()) {
        auto& mod = like.as<GFElem>().modulus;
        return GFElem{FpPoly::constant(mod.context(), a), mod};
      }
      if (like.holds<FpFunc>()) return detail::rf_const<Fp>({a.p}, a);
    }
    return x;
  }

  template <class T>
  static T apply(const T& a, const T& b, Op op) {
    if constexpr (std::is_same_v<T, Rational>) {
      return op == Op::Add ? T(a + b) : op == Op::Sub ? T(a - b) : T(a * b);
    } else if constexpr (std::is_same_v<T, Fp>) {
      require(a.p == b.p, ErrorCode::FieldMismatch, "elements of different prime fields");
      return op == Op::Add ? a + b : op == Op::Sub ? a - b : a * b;
    } else if constexpr (std::is_same_v<T, QuadNum>) {
      require(a.m == b.m, ErrorCode::FieldMismatch, "elements of different quadratic fields");
      return op == Op::Add ? detail::qn_add(a, b) : op == Op::Sub ? detail::qn_add(a, detail::qn_neg(b)) : detail::qn_mul(a, b);
    } else if constexpr (std::is_same_v<T, GFElem> || std::is_same_v<T, NFElem>) {
      require(a.modulus == b.modulus, ErrorCode::FieldMismatch, "elements of different extension fields");
      auto v = op == Op::Add ? a.value + b.value : op == Op::Sub ? a.value - b.value : a.value * b.value;
      return detail::pm_make(v, a.modulus);
    } else {
      require(a.den.context() == b.den.context(), ErrorCode::FieldMismatch, "elements of different function fields");
      if (op == Op::Mul) return detail::rf_make(a.num * b.num, a.den * b.den);
      auto n = op == Op::Add ? a.num * b.den + b.num * a.den : a.num * b.den - b.num * a.den;
      return detail::rf_make(n, a.den * b.den);
    }
  }

  static Element combine(const Element& x0, const Element& y0, Op op) {
    Element x = promote(x0, y0), y = promote(y0, x);
    require(x.v_.index() == y.v_.index(), ErrorCode::FieldMismatch, "elements of different fields");
    return std::visit(
        [&](const auto& a) -> Element {
          using T = std::decay_t<decltype(a)>;
          return Element(apply(a, std::get<T>(y.v_), op));
        },
        x.v_);
  }

  Value v_;
};

// ---------------------------------------------------------------------------
// Constructors in a given field

inline Element from_rational(const FieldDesc& k, const Rational& r) {
  switch (k.kind) {
    case FieldDesc::Kind::Rationals: return r;
    case FieldDesc::Kind::PrimeField: return Fp::from(r, k.p);
    case FieldDesc::Kind::QuadraticField: return QuadNum{r, 0, k.m};
    case FieldDesc::Kind::GaloisField:
      return GFElem{FpPoly::constant(k.gf_modulus.context(), Fp::from(r, k.p)), k.gf_modulus};
    case FieldDesc::Kind::NumberField: return NFElem{QPoly::constant({}, r), k.nf_modulus};
    case FieldDesc::Kind::RationalFunction:
      if (k.p == 0) return detail::rf_const<Rational>({}, r);
      return detail::rf_const<Fp>({k.p}, Fp::from(r, k.p));
  }
  fail(ErrorCode::UnsupportedField, "unknown field");
}

/// The image of an integer in K.
inline Element from_int(const FieldDesc& k, long long n) { return from_rational(k, Rational(n)); }

/// Generator: t for k(t), sqrt(m) for Q(sqrt m), x for F_p[x]/(f) and Q[x]/(f).
inline Element generator(const FieldDesc& k) {
  switch (k.kind) {
    case FieldDesc::Kind::QuadraticField: return QuadNum{0, 1, k.m};
    case FieldDesc::Kind::GaloisField: return GFElem{FpPoly::x(k.gf_modulus.context()), k.gf_modulus};
    case FieldDesc::Kind::NumberField: return NFElem{QPoly::x({}), k.nf_modulus};
    case FieldDesc::Kind::RationalFunction:
      if (k.p == 0) return QFunc{QPoly::x({}), QPoly::constant({}, 1)};
      return FpFunc{FpPoly::x({k.p}), FpPoly::constant({k.p}, Fp(1, k.p))};
    default: fail(ErrorCode::InvalidArgument, "field " + to_string(k) + " has no generator");
  }
}

/// Interprets a polynomial over the constant field as an element of k(t).
inline Element from_poly(const QPoly& f) { return QFunc{f, QPoly::constant({}, 1)}; }
inline Element from_poly(const FpPoly& f) {
  return FpFunc{f, FpPoly::constant(f.context(), Fp(1, f.context().p))};
}

/// True iff the element's representation belongs to K.
inline bool belongs_to(const FieldDesc& k, const Element& a) {
  switch (k.kind) {
    case FieldDesc::Kind::Rationals: return a.holds<Rational>();
    case FieldDesc::Kind::PrimeField: return a.holds<Fp>() && a.as<Fp>().p == k.p;
    case FieldDesc::Kind::QuadraticField: return a.holds<QuadNum>() && a.as<QuadNum>().m == k.m;
    case FieldDesc::Kind::GaloisField: return a.holds<GFElem>() && a.as<GFElem>().modulus == k.gf_modulus;
    case FieldDesc::Kind::NumberField: return a.holds<NFElem>() && a.as<NFElem>().modulus == k.nf_modulus;
    case FieldDesc::Kind::RationalFunction:
      return k.p == 0 ? a.holds<QFunc>() : (a.holds<FpFunc>() && a.as<FpFunc>().den.context().p == k.p);
  }
  return false;
}

/// Moves a into K (rational constants are embedded); FieldMismatch otherwise.
inline Element in_field(const FieldDesc& k, const Element& a) {
  if (belongs_to(k, a)) return a;
  if (a.holds<Rational>()) return from_rational(k, a.as<Rational>());
  if (a.holds<Fp>() && k.characteristic() == a.as<Fp>().p) return from_int(k, 1) * a;
  fail(ErrorCode::FieldMismatch, "element does not belong to " + to_string(k));
}

// ---------------------------------------------------------------------------
// Formatting and parsing

namespace detail {

inline bool single_term(const std::string& s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] == '+' || s[i] == '-') return false;
  return true;
}

}  // namespace detail

inline std::string to_string(const Element& a, const std::string& var = "t") {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Rational>) return to_string(x);
        else if constexpr (std::is_same_v<T, Fp>) return to_string(x);
        else if constexpr (std::is_same_v<T, QuadNum>) {
          std::string r = "sqrt(" + x.m.str() + ")";
          if (x.b == 0) return to_string(x.a);
          std::string bpart = x.b == 1 ? r : x.b == -1 ? "-" + r : to_string(x.b) + "*" + r;
          if (x.a == 0) return bpart;
          return to_string(x.a) + (bpart[0] == '-' ? "" : "+") + bpart;
        } else if constexpr (std::is_same_v<T, GFElem> || std::is_same_v<T, NFElem>) {
          return to_string(x.value, "x");
        } else {
          std::string n = to_string(x.num, var);
          if (x.den.degree() == 0) return n;
          std::string d = to_string(x.den, var);
          if (!detail::single_term(n)) n = "(" + n + ")";
          if (!detail::single_term(d) || d.find('*') != std::string::npos)
            d = "(" + d + ")";
          return n + "/" + d;
        }
      },
      a.value());
}

inline std::string format(const FieldDesc& k, const Element& a) { return to_string(a, k.var); }

namespace detail {

class ElementParser {
 public:
  ElementParser(const FieldDesc& k, std::string s) : k_(k), s_(normalize(std::move(s))) {}

  Element parse() {
    Element e = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  static std::string normalize(std::string s) {
    // Accept U+2212 MINUS SIGN as '-'.
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 && static_cast<unsigned char>(s[i + 1]) == 0x88 &&
          static_cast<unsigned char>(s[i + 2]) == 0x92) {
        out += '-';
        i += 2;
      } else {
        out += s[i];
      }
    }
    return out;
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ParseError, "cannot parse '" + s_ + "' in " + to_string(k_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  Element expr() {
    Element acc = term();
    for (;;) {
      if (accept('+')) acc = acc + term();
      else if (accept('-')) acc = acc - term();
      else return acc;
    }
  }
  bool starts_atom() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return c == '(' || std::isdigit(static_cast<unsigned char>(c)) || std::isalpha(static_cast<unsigned char>(c));
  }
  Element term() {
    Element acc = unary();
    for (;;) {
      if (accept('*')) acc = acc * unary();
      else if (accept('/')) {
        Element d = unary();
        if (d.is_zero()) error("division by zero");
        acc = acc / d;
      } else if (starts_atom()) acc = acc * power();  // implicit product, e.g. 2t
      else return acc;
    }
  }
  Element unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }
  Element power() {
    Element base = atom();
    if (accept('^')) {
      bool neg = accept('-');
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) error("expected exponent");
      long long e = std::stoll(s_.substr(start, pos_ - start));
      if (neg && base.is_zero()) error("zero to a negative power");
      return base.pow(neg ? -e : e);
    }
    return base;
  }
  Element atom() {
    skip();
    if (accept('(')) {
      Element e = expr();
      if (!accept(')')) error("expected ')'");
      return e;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return from_rational(k_, Rational(Integer(s_.substr(start, pos_ - start))));
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string name = s_.substr(start, pos_ - start);
    if (name.empty()) error("expected a number, variable or '('");
    if (k_.is_function_field() && name == k_.var) return generator(k_);
    if ((k_.kind == FieldDesc::Kind::GaloisField || k_.kind == FieldDesc::Kind::NumberField) && name == "x")
      return generator(k_);
    if (k_.kind == FieldDesc::Kind::QuadraticField && name == "sqrt") {
      if (!accept('(')) error("expected '(' after sqrt");
      Element inner = expr();
      if (!accept(')')) error("expected ')'");
      if (inner != from_rational(k_, Rational(k_.m))) error("only sqrt of the field discriminant is available");
      return generator(k_);
    }
    error("unknown symbol '" + name + "'");
  }

  const FieldDesc& k_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses strings such as "-3/2", "t^2+1" or "(t^2+1)/(t-1)".
inline Element parse_element(const FieldDesc& k, const std::string& text) {
  return detail::ElementParser(k, text).parse();
}

/// Parses a polynomial over the constant field of k(t) (or over Q / F_p directly).
inline QPoly parse_qpoly(const std::string& text, const std::string& var = "t") {
  Element e = parse_element(FieldDesc::function_field(0, var), text);
  const auto& f = e.as<QFunc>();
  require(f.den.degree() == 0, ErrorCode::ParseError, "'" + text + "' is not a polynomial");
  return f.num;
}
inline FpPoly parse_fppoly(std::int64_t p, const std::string& text, const std::string& var = "t") {
  Element e = parse_element(FieldDesc::function_field(p, var), text);
  const auto& f = e.as<FpFunc>();
  require(f.den.degree() == 0, ErrorCode::ParseError, "'" + text + "' is not a polynomial");
  return f.num;
}

/// Parses "Q", "F_p"/"Fp"/"GF(p)", "Q(sqrt(m))", "Q(i)", "Q(t)", "F_p(t)".
inline FieldDesc parse_field(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto function_var = [&](std::string& base) -> std::optional<std::string> {
    auto open = base.rfind('(');
    if (open == std::string::npos || base.back() != ')') return std::nullopt;
    std::string var = base.substr(open + 1, base.size() - open - 2);
    if (var.empty() || !std::isalpha(static_cast<unsigned char>(var[0]))) return std::nullopt;
    base = base.substr(0, open);
    return var;
  };
  auto prime_of = [&](const std::string& b) -> std::optional<std::int64_t> {
    std::string digits;
    if (b.rfind("F_", 0) == 0) digits = b.substr(2);
    else if (b.rfind("GF(", 0) == 0 && b.back() == ')') digits = b.substr(3, b.size() - 4);
    else if (b.size() > 1 && b[0] == 'F') digits = b.substr(1);
    else return std::nullopt;
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    return std::stoll(digits);
  };
  std::string base = s;
  auto var = function_var(base);
  if (var && (base == "Q" || prime_of(base))) {
    return FieldDesc::function_field(base == "Q" ? 0 : *prime_of(base), *var);
  }
  if (s == "Q") return FieldDesc::rationals();
  if (auto p = prime_of(s)) return FieldDesc::prime_field(*p);
  if (s == "Q(i)") return FieldDesc::quadratic(-1);
  if (s.rfind("Q(sqrt(", 0) == 0 && s.size() > 9 && s.substr(s.size() - 2) == "))") {
    std::string digits = s.substr(7, s.size() - 9);
    if (!digits.empty() && digits.find_first_not_of("-0123456789") == std::string::npos) {
      Integer m(digits);
      require(m != 1 && m != 0 && squarefree_class(Rational(m)) == m, ErrorCode::ParseError,
              "Q(sqrt(m)) needs a squarefree m != 0, 1");
      return FieldDesc::quadratic(m);
    }
  }
  fail(ErrorCode::ParseError, "unknown field '" + text + "'");
}

// ---------------------------------------------------------------------------
// Places

struct Place {
  enum class Kind { FinitePrime, Irreducible, GaussPrime, Degree, Real };

  Kind kind = Kind::Real;
  Integer prime = 0;                                // FinitePrime, GaussPrime
  std::variant<std::monostate, QPoly, FpPoly> poly;  // Irreducible

  static Place finite(const Integer& p) { return {Kind::FinitePrime, p, {}}; }
  static Place real() { return {Kind::Real, 0, {}}; }
  static Place degree() { return {Kind::Degree, 0, {}}; }
  static Place gauss(const Integer& p) { return {Kind::GaussPrime, p, {}}; }
  static Place irreducible(const QPoly& f) { return {Kind::Irreducible, 0, f.monic()}; }
  static Place irreducible(const FpPoly& f) { return {Kind::Irreducible, 0, f.monic()}; }

  bool archimedean() const { return kind == Kind::Real; }
  int poly_degree() const {
    if (auto* q = std::get_if<QPoly>(&poly)) return q->degree();
    if (auto* f = std::get_if<FpPoly>(&poly)) return f->degree();
    return 0;
  }

  friend bool operator==(const Place& a, const Place& b) { return (a <=> b) == 0; }
  /// Canonical order: primes numerically, polynomials graded-lex, Gauss primes,
  /// then the degree place, then the real place.
  friend std::strong_ordering operator<=>(const Place& a, const Place& b) {
    if (auto c = static_cast<int>(a.kind) <=> static_cast<int>(b.kind); c != 0) return c;
    if (a.kind == Kind::FinitePrime || a.kind == Kind::GaussPrime)
      return a.prime < b.prime ? std::strong_ordering::less
                               : (b.prime < a.prime ? std::strong_ordering::greater : std::strong_ordering::equal);
    if (a.kind == Kind::Irreducible) {
      if (auto c = a.poly.index() <=> b.poly.index(); c != 0) return c;
      if (auto* q = std::get_if<QPoly>(&a.poly)) return *q <=> std::get<QPoly>(b.poly);
      if (auto* f = std::get_if<FpPoly>(&a.poly)) return *f <=> std::get<FpPoly>(b.poly);
    }
    return std::strong_ordering::equal;
  }
};

inline std::string to_string(const Place& v, const std::string& var = "t") {
  switch (v.kind) {
    case Place::Kind::FinitePrime: return v.prime.str();
    case Place::Kind::GaussPrime: return "gauss(" + v.prime.str() + ")";
    case Place::Kind::Degree: return "deg";
    case Place::Kind::Real: return "inf";
    case Place::Kind::Irreducible:
      if (auto* q = std::get_if<QPoly>(&v.poly)) return to_string(*q, var);
      return to_string(std::get<FpPoly>(v.poly), var);
  }
  return "?";
}

/// Checks that v is a valid place of K (monic irreducible polynomials, etc.).
inline void validate_place(const FieldDesc& k, const Place& v) {
  using K = Place::Kind;
  switch (v.kind) {
    case K::FinitePrime:
      require(k.kind == FieldDesc::Kind::Rationals, ErrorCode::InvalidArgument, "prime places belong to Q");
      require(is_prime(v.prime), ErrorCode::InvalidArgument, v.prime.str() + " is not prime");
      return;
    case K::Real:
      require(k.kind == FieldDesc::Kind::Rationals, ErrorCode::InvalidArgument, "the real place belongs to Q");
      return;
    case K::Degree:
      require(k.is_function_field(), ErrorCode::InvalidArgument, "the degree place belongs to k(t)");
      return;
    case K::GaussPrime:
      require(k.is_function_field() && k.p == 0, ErrorCode::InvalidArgument, "Gauss primes belong to Q(t)");
      require(is_prime(v.prime), ErrorCode::InvalidArgument, v.prime.str() + " is not prime");
      return;
    case K::Irreducible:
      require(k.is_function_field(), ErrorCode::InvalidArgument, "polynomial places belong to k(t)");
      if (k.p == 0) {
        const auto* f = std::get_if<QPoly>(&v.poly);
        require(f && f->is_monic() && is_irreducible(*f), ErrorCode::InvalidArgument,
                "place polynomial must be monic irreducible over Q");
      } else {
        const auto* f = std::get_if<FpPoly>(&v.poly);
        require(f && f->context().p == k.p && f->is_monic(), ErrorCode::InvalidArgument,
                "place polynomial must be monic over F_p");
        require(f->degree() == 1 || is_irreducible(*f), ErrorCode::InvalidArgument,
                "place polynomial must be irreducible");
      }
      return;
  }
}

/// Parses a place given as the text of a polynomial, a prime, "inf" or "deg".
inline Place place_for_poly_text(const FieldDesc& k, const std::string& text) {
  if (k.p == 0) return Place::irreducible(parse_qpoly(text, k.var));
  return Place::irreducible(parse_fppoly(k.p, text, k.var));
}

// ---------------------------------------------------------------------------
// Valuations

namespace detail {

inline int gauss_valuation(const QPoly& f, const Integer& p) {
  int best = 0;
  bool first = true;
  for (auto& c : f.coeffs()) {
    if (c == 0) continue;
    int v = rvaluation(c, p);
    if (first || v < best) best = v;
    first = false;
  }
  return best;
}

template <class C>
int poly_valuation(const Poly<C>& f, const Place& v) {
  return multiplicity(f, std::get<Poly<C>>(v.poly));
}

}  // namespace detail

/// Normalized discrete valuation v(a).
inline int valuation(const FieldDesc& k, const Place& v, const Element& a_in) {
  require(!v.archimedean(), ErrorCode::ArchimedeanPlace, "valuation at the real place");
  Element a = in_field(k, a_in);
  require(!a.is_zero(), ErrorCode::ZeroElement, "valuation of zero");
  switch (v.kind) {
    case Place::Kind::FinitePrime: return rvaluation(a.as<Rational>(), v.prime);
    case Place::Kind::GaussPrime: {
      const auto& f = a.as<QFunc>();
      return detail::gauss_valuation(f.num, v.prime) - detail::gauss_valuation(f.den, v.prime);
    }
    case Place::Kind::Degree:
      if (k.p == 0) return a.as<QFunc>().den.degree() - a.as<QFunc>().num.degree();
      return a.as<FpFunc>().den.degree() - a.as<FpFunc>().num.degree();
    case Place::Kind::Irreducible:
      if (k.p == 0) {
        const auto& f = a.as<QFunc>();
        return detail::poly_valuation(f.num, v) - detail::poly_valuation(f.den, v);
      } else {
        const auto& f = a.as<FpFunc>();
        return detail::poly_valuation(f.num, v) - detail::poly_valuation(f.den, v);
      }
    case Place::Kind::Real: break;
  }
  fail(ErrorCode::ArchimedeanPlace, "valuation at the real place");
}

/// Canonical uniformizer: p, the place polynomial, 1/t, or p for a Gauss prime.
inline Element uniformizer(const FieldDesc& k, const Place& v) {
  switch (v.kind) {
    case Place::Kind::FinitePrime: return Rational(v.prime);
    case Place::Kind::GaussPrime: return from_rational(k, Rational(v.prime));
    case Place::Kind::Degree: return generator(k).inverse();
    case Place::Kind::Irreducible:
      if (auto* q = std::get_if<QPoly>(&v.poly)) return from_poly(*q);
      return from_poly(std::get<FpPoly>(v.poly));
    case Place::Kind::Real: break;
  }
  fail(ErrorCode::ArchimedeanPlace, "no uniformizer at the real place");
}

/// Residue field of a non-archimedean place.
inline FieldDesc residue_field(const FieldDesc& k, const Place& v) {
  switch (v.kind) {
    case Place::Kind::FinitePrime:
      require(v.prime <= Integer(std::numeric_limits<std::int32_t>::max()), ErrorCode::UnsupportedField,
              "residue field of a very large prime");
      return FieldDesc::prime_field(static_cast<std::int64_t>(v.prime));
    case Place::Kind::GaussPrime: return FieldDesc::function_field(static_cast<std::int64_t>(v.prime), k.var);
    case Place::Kind::Degree: return k.base();
    case Place::Kind::Irreducible: {
      if (auto* q = std::get_if<QPoly>(&v.poly)) {
        if (q->degree() == 1) return FieldDesc::rationals();
        if (q->degree() == 2) {
          Rational c = q->coeff(1), d = q->coeff(0);
          return FieldDesc::quadratic(squarefree_class(c * c - 4 * d));
        }
        return FieldDesc::number_field(*q);
      }
      const auto& f = std::get<FpPoly>(v.poly);
      if (f.degree() == 1) return FieldDesc::prime_field(f.context().p);
      return FieldDesc::galois(f);
    }
    case Place::Kind::Real: break;
  }
  fail(ErrorCode::ArchimedeanPlace, "no residue field at the real place");
}

namespace detail {

/// Root of the monic quadratic t^2 + c t + d in Q(sqrt m).
inline QuadNum quadratic_root(const QPoly& q) {
  Rational c = q.coeff(1), d = q.coeff(0);
  Rational disc = c * c - 4 * d;
  Integer m = squarefree_class(disc);
  Rational k2 = disc / Rational(m);
  Integer kn = isqrt(num(k2)), kd = isqrt(den(k2));
  return QuadNum{-c / 2, Rational(kn, kd) / 2, m};
}

template <class C>
Element eval_in(const Poly<C>& f, const Element& at) {
  Element acc = at.like(0);
  for (int i = f.degree(); i >= 0; --i) acc = acc * at + Element(f.coeff(i));
  return acc;
}

}  // namespace detail

/// Image of a unit (v(a) = 0) in the residue field.
inline Element residue_image(const FieldDesc& k, const Place& v, const Element& a_in) {
  Element a = in_field(k, a_in);
  require(valuation(k, v, a) == 0, ErrorCode::NotAUnit, "residue image of a non-unit");
  switch (v.kind) {
    case Place::Kind::FinitePrime: return Fp::from(a.as<Rational>(), static_cast<std::int64_t>(v.prime));
    case Place::Kind::GaussPrime: {
      const auto& f = a.as<QFunc>();
      std::int64_t p = static_cast<std::int64_t>(v.prime);
      auto reduce = [&](const QPoly& g) {
        Rational scale = 1;
        int e = detail::gauss_valuation(g, v.prime);
        Rational pe = Rational(ipow(v.prime, static_cast<unsigned>(std::abs(e))));
        scale = e >= 0 ? 1 / pe : pe;
        std::vector<Fp> c;
        for (auto& x : g.coeffs()) c.push_back(Fp::from(x * scale, p));
        return FpPoly({p}, std::move(c));
      };
      return FpFunc{reduce(f.num), reduce(f.den)};
    }
    case Place::Kind::Degree:
      if (k.p == 0) return Rational(a.as<QFunc>().num.lc() / a.as<QFunc>().den.lc());
      return a.as<FpFunc>().num.lc() / a.as<FpFunc>().den.lc();
    case Place::Kind::Irreducible: {
      if (auto* q = std::get_if<QPoly>(&v.poly)) {
        const auto& f = a.as<QFunc>();
        if (q->degree() == 1) return Rational(f.num.eval(-q->coeff(0)) / f.den.eval(-q->coeff(0)));
        if (q->degree() == 2) {
          Element r = detail::quadratic_root(*q);
          return detail::eval_in(f.num, r) / detail::eval_in(f.den, r);
        }
        return Element(NFElem{f.num, *q}) / Element(NFElem{f.den, *q});
      }
      const auto& P = std::get<FpPoly>(v.poly);
      const auto& f = a.as<FpFunc>();
      if (P.degree() == 1) return f.num.eval(-P.coeff(0)) / f.den.eval(-P.coeff(0));
      return Element(GFElem{f.num, P}) / Element(GFElem{f.den, P});
    }
    case Place::Kind::Real: break;
  }
  fail(ErrorCode::ArchimedeanPlace, "no residue map at the real place");
}

/// a = pi^v(a) * u; returns u.
inline Element unit_part(const FieldDesc& k, const Place& v, const Element& a) {
  return in_field(k, a) * uniformizer(k, v).pow(-valuation(k, v, a));
}

/// Sign of a nonzero rational at the real place.
inline int real_sign(const Element& a) {
  require(a.holds<Rational>() && !a.is_zero(), ErrorCode::InvalidArgument, "real sign of a non-rational");
  return sign(a.as<Rational>());
}

/// Places of k(t) (or Q) where a has nonzero valuation, excluding the degree
/// place; for Q these are the prime divisors of numerator and denominator.
inline std::vector<Place> finite_support(const FieldDesc& k, const Element& a_in) {
  Element a = in_field(k, a_in);
  require(!a.is_zero(), ErrorCode::ZeroElement, "support of zero");
  std::vector<Place> out;
  if (k.kind == FieldDesc::Kind::Rationals) {
    const auto& r = a.as<Rational>();
    for (auto& p : prime_divisors(num(r) * den(r))) out.push_back(Place::finite(p));
  } else if (k.is_function_field() && k.p == 0) {
    const auto& f = a.as<QFunc>();
    for (const QPoly* g : {&f.num, &f.den})
      if (g->degree() > 0)
        for (auto& fp : factor(*g).factors) out.push_back(Place::irreducible(fp.factor));
  } else if (k.is_function_field()) {
    const auto& f = a.as<FpFunc>();
    for (const FpPoly* g : {&f.num, &f.den})
      if (g->degree() > 0)
        for (auto& fp : factor(*g).factors) out.push_back(Place::irreducible(fp.factor));
  } else {
    fail(ErrorCode::UnsupportedField, "support over " + to_string(k));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Squares

namespace detail {

inline bool rational_square(const Rational& r) { return is_perfect_square(r); }

inline Rational rational_sqrt(const Rational& r) { return Rational(isqrt(num(r)), isqrt(den(r))); }

/// Square test in Q(sqrt m).
inline bool quad_is_square(const QuadNum& x) {
  if (x.a == 0 && x.b == 0) return true;
  if (x.b == 0) return rational_square(x.a) || rational_square(x.a / Rational(x.m));
  Rational n = qn_norm(x);
  if (!rational_square(n)) return false;
  Rational s = rational_sqrt(n);
  for (Rational c2 : {(x.a + s) / 2, (x.a - s) / 2}) {
    if (c2 > 0 && rational_square(c2)) return true;  // c = sqrt(c2), d = b / (2c)
  }
  return false;
}

inline bool gf_is_square(const GFElem& x) {
  if (x.value.is_zero()) return true;
  Integer q = ipow(Integer(x.modulus.context().p), static_cast<unsigned>(x.modulus.degree()));
  auto r = powmod(x.value, (q - 1) / 2, x.modulus);
  return r.degree() == 0 && r.coeff(0).v == 1;
}

template <class C>
bool func_is_square(const RatFunc<C>& f, const FieldDesc& base) {
  if (f.num.is_zero()) return true;
  for (const Poly<C>* g : {&f.num, &f.den}) {
    if (g->degree() <= 0) continue;
    for (auto& fp : factor(*g).factors)
      if (fp.exponent % 2) return false;
  }
  C unit = f.num.lc();  // den is monic
  if constexpr (std::is_same_v<C, Rational>) return rational_square(unit);
  else {
    (void)base;
    return unit.is_square();
  }
}

}  // namespace detail

/// True iff a is a square in K (zero counts as a square).
inline bool is_square(const FieldDesc& k, const Element& a_in) {
  Element a = in_field(k, a_in);
  switch (k.kind) {
    case FieldDesc::Kind::Rationals: return detail::rational_square(a.as<Rational>());
    case FieldDesc::Kind::PrimeField: return a.as<Fp>().is_square();
    case FieldDesc::Kind::QuadraticField: return detail::quad_is_square(a.as<QuadNum>());
    case FieldDesc::Kind::GaloisField: return detail::gf_is_square(a.as<GFElem>());
    case FieldDesc::Kind::NumberField:
      fail(ErrorCode::UnsupportedField, "square test over " + to_string(k));
    case FieldDesc::Kind::RationalFunction:
      if (k.p == 0) return detail::func_is_square(a.as<QFunc>(), k.base());
      return detail::func_is_square(a.as<FpFunc>(), k.base());
  }
  fail(ErrorCode::UnsupportedField, "square test over " + to_string(k));
}

/// True iff a/b is a square in K.
inline bool square_class_equal(const FieldDesc& k, const Element& a, const Element& b) {
  require(!a.is_zero() && !b.is_zero(), ErrorCode::ZeroElement, "square class of zero");
  return is_square(k, in_field(k, a) / in_field(k, b));
}

namespace detail {

inline Element first_nonsquare(const FieldDesc& k) {
  if (k.kind == FieldDesc::Kind::PrimeField) {
    for (std::int64_t c = 2;; ++c)
      if (!Fp(c, k.p).is_square()) return Fp(c, k.p);
  }
  // Enumerate F_p[x]/(f) in increasing order of the integer encoding.
  std::int64_t p = k.p;
  int d = k.gf_modulus.degree();
  for (std::int64_t code = 2;; ++code) {
    std::vector<Fp> c;
    std::int64_t r = code;
    for (int i = 0; i < d; ++i) {
      c.push_back(Fp(r % p, p));
      r /= p;
    }
    GFElem x{FpPoly({p}, c), k.gf_modulus};
    if (!x.value.is_zero() && !gf_is_square(x)) return x;
  }
}

}  // namespace detail

/// Canonical representative of the square class of a nonzero a: squarefree
/// integers over Q; 1 or the least non-square over finite fields; unit times
/// product of odd-multiplicity monic irreducibles over k(t). Quadratic and
/// higher number fields return a unchanged.
inline Element square_class_rep(const FieldDesc& k, const Element& a_in) {
  Element a = in_field(k, a_in);
  require(!a.is_zero(), ErrorCode::ZeroElement, "square class of zero");
  switch (k.kind) {
    case FieldDesc::Kind::Rationals: return Rational(squarefree_class(a.as<Rational>()));
    case FieldDesc::Kind::PrimeField:
    case FieldDesc::Kind::GaloisField:
      return is_square(k, a) ? from_int(k, 1) : detail::first_nonsquare(k);
    case FieldDesc::Kind::QuadraticField:
    case FieldDesc::Kind::NumberField: return a;
    case FieldDesc::Kind::RationalFunction: {
      auto rep = [&](const auto& f) -> Element {
        using C = std::decay_t<decltype(f.num.lc())>;
        auto ctx = f.den.context();
        Poly<C> acc = Poly<C>::constant(ctx, CoeffTraits<C>::one(ctx));
        for (const Poly<C>* g : {&f.num, &f.den}) {
          if (g->degree() <= 0) continue;
          for (auto& fp : factor(*g).factors)
            if (fp.exponent % 2) acc = acc * fp.factor;
        }
        Element unit = square_class_rep(k.base(), Element(f.num.lc()));
        return from_poly(acc) * unit;
      };
      if (k.p == 0) return rep(a.as<QFunc>());
      return rep(a.as<FpFunc>());
    }
  }
  return a;
}

}  // namespace wittforge

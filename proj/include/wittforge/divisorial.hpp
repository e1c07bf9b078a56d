#pragma once

// Divisorial valuation sets, principal divisors, ideles and Pic(V) for the
// configurations that admit an elementary certificate.

#include <map>
#include <string>
#include <vector>

#include "wittforge/fields.hpp"

namespace wittforge {

struct ValuationSet {
  enum class Kind { AllPrimesExcept, GeometricAffine, GeometricProjective, DivisorialQt };

  FieldDesc field;
  Kind kind = Kind::AllPrimesExcept;
  std::vector<Integer> excluded;  ///< S, sorted

  static ValuationSet all_primes_except(std::vector<Integer> s) {
    for (auto& p : s) require(is_prime(p), ErrorCode::InvalidArgument, p.str() + " is not prime");
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return {FieldDesc::rationals(), Kind::AllPrimesExcept, std::move(s)};
  }
  static ValuationSet geometric_affine(const FieldDesc& k) {
    require(k.is_function_field(), ErrorCode::InvalidArgument, "geometric places need k(t)");
    return {k, Kind::GeometricAffine, {}};
  }
  static ValuationSet geometric_projective(const FieldDesc& k) {
    require(k.is_function_field(), ErrorCode::InvalidArgument, "geometric places need k(t)");
    return {k, Kind::GeometricProjective, {}};
  }
  static ValuationSet divisorial_qt(std::vector<Integer> s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return {FieldDesc::function_field(0), Kind::DivisorialQt, std::move(s)};
  }

  bool excludes(const Integer& p) const { return std::binary_search(excluded.begin(), excluded.end(), p); }

  bool contains(const Place& v) const {
    switch (kind) {
      case Kind::AllPrimesExcept: return v.kind == Place::Kind::FinitePrime && !excludes(v.prime);
      case Kind::GeometricAffine: return v.kind == Place::Kind::Irreducible;
      case Kind::GeometricProjective: return v.kind == Place::Kind::Irreducible || v.kind == Place::Kind::Degree;
      case Kind::DivisorialQt:
        return v.kind == Place::Kind::Irreducible || (v.kind == Place::Kind::GaussPrime && !excludes(v.prime));
    }
    return false;
  }

  /// Condition (B): every place of V has odd residue characteristic.
  bool odd_residue_characteristic() const {
    switch (kind) {
      case Kind::AllPrimesExcept:
      case Kind::DivisorialQt: return excludes(2);
      default: return field.characteristic() != 2;
    }
  }

  friend bool operator==(const ValuationSet& a, const ValuationSet& b) {
    return a.kind == b.kind && a.field == b.field && a.excluded == b.excluded;
  }
};

inline std::string to_string(ValuationSet::Kind k) {
  switch (k) {
    case ValuationSet::Kind::AllPrimesExcept: return "all_primes_except";
    case ValuationSet::Kind::GeometricAffine: return "geometric_affine";
    case ValuationSet::Kind::GeometricProjective: return "geometric_projective";
    case ValuationSet::Kind::DivisorialQt: return "divisorial_qt";
  }
  return "?";
}

inline std::string to_string(const ValuationSet& vs) {
  std::string s = to_string(vs.kind) + " over " + to_string(vs.field);
  if (!vs.excluded.empty()) {
    s += " S={";
    for (std::size_t i = 0; i < vs.excluded.size(); ++i) s += (i ? "," : "") + vs.excluded[i].str();
    s += "}";
  }
  return s;
}

/// Places of V where a has nonzero valuation, in canonical order.
inline std::vector<Place> support_in(const ValuationSet& vs, const Element& a_in) {
  Element a = in_field(vs.field, a_in);
  require(!a.is_zero(), ErrorCode::ZeroElement, "support of zero");
  std::vector<Place> out;
  for (auto& v : finite_support(vs.field, a))
    if (vs.contains(v)) out.push_back(v);
  if (vs.kind == ValuationSet::Kind::GeometricProjective && valuation(vs.field, Place::degree(), a) != 0)
    out.push_back(Place::degree());
  if (vs.kind == ValuationSet::Kind::DivisorialQt) {
    const auto& f = a.as<QFunc>();
    Integer acc = 1;
    for (const QPoly* g : {&f.num, &f.den})
      for (auto& c : g->coeffs())
        if (c != 0) acc *= num(c) * den(c);
    for (auto& p : prime_divisors(acc)) {
      Place g = Place::gauss(p);
      if (vs.contains(g) && valuation(vs.field, g, a) != 0) out.push_back(g);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Places of V up to a height bound: primes <= h; over k(t), monic
/// irreducibles of degree <= 2 with integer coefficients in [-h, h] (all of
/// them over F_p, bounded by degree h), plus the degree place when present.
inline std::vector<Place> enumerate_places(const ValuationSet& vs, int height) {
  std::vector<Place> out;
  const FieldDesc& k = vs.field;
  if (vs.kind == ValuationSet::Kind::AllPrimesExcept) {
    for (int p = 2; p <= height; ++p)
      if (is_prime(Integer(p)) && !vs.excludes(p)) out.push_back(Place::finite(p));
    return out;
  }
  if (k.p == 0) {
    for (int a = -height; a <= height; ++a) out.push_back(Place::irreducible(QPoly({}, {Rational(-a), Rational(1)})));
    for (int b = -height; b <= height; ++b)
      for (int c = -height; c <= height; ++c) {
        QPoly f({}, {Rational(c), Rational(b), Rational(1)});
        if (is_irreducible(f)) out.push_back(Place::irreducible(f));
      }
  } else {
    int p = static_cast<int>(k.p);
    for (int d = 1; d <= std::max(1, std::min(height, 3)); ++d) {
      std::vector<Fp> c(d + 1, Fp{0, p});
      c[d] = Fp{1, p};
      long long total = 1;
      for (int i = 0; i < d; ++i) total *= p;
      for (long long idx = 0; idx < total; ++idx) {
        long long x = idx;
        for (int i = 0; i < d; ++i, x /= p) c[i] = Fp{x % p, p};
        FpPoly f({p}, c);
        if (d == 1 || is_irreducible(f)) out.push_back(Place::irreducible(f));
      }
    }
  }
  if (vs.kind == ValuationSet::Kind::GeometricProjective) out.push_back(Place::degree());
  if (vs.kind == ValuationSet::Kind::DivisorialQt)
    for (int p = 2; p <= height; ++p)
      if (is_prime(Integer(p)) && !vs.excludes(p)) out.push_back(Place::gauss(p));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Divisors

struct Divisor {
  ValuationSet vset;
  std::map<Place, long long> mult;  ///< no zero multiplicities

  void add(const Place& v, long long m) {
    require(vset.contains(v), ErrorCode::InvalidArgument, "place " + to_string(v, vset.field.var) + " is not in V");
    if (m == 0) return;
    long long& x = mult[v];
    x += m;
    if (x == 0) mult.erase(v);
  }
  bool is_zero() const { return mult.empty(); }

  friend Divisor operator+(Divisor a, const Divisor& b) {
    require(a.vset == b.vset, ErrorCode::InvalidArgument, "divisors on different valuation sets");
    for (auto& [v, m] : b.mult) a.add(v, m);
    return a;
  }
  friend Divisor operator-(Divisor a, const Divisor& b) {
    require(a.vset == b.vset, ErrorCode::InvalidArgument, "divisors on different valuation sets");
    for (auto& [v, m] : b.mult) a.add(v, -m);
    return a;
  }
  friend bool operator==(const Divisor& a, const Divisor& b) { return a.vset == b.vset && a.mult == b.mult; }
};

inline std::string to_string(const Divisor& d) {
  if (d.mult.empty()) return "0";
  std::string s;
  for (auto& [v, m] : d.mult) {
    if (!s.empty()) s += " + ";
    s += std::to_string(m) + "*[" + to_string(v, d.vset.field.var) + "]";
  }
  return s;
}

/// (a) = sum over v in V of v(a) v.
inline Divisor principal_divisor(const ValuationSet& vs, const Element& a) {
  require(!a.is_zero(), ErrorCode::ZeroElement, "principal divisor of zero");
  Divisor d{vs, {}};
  for (auto& v : support_in(vs, a)) d.add(v, valuation(vs.field, v, a));
  return d;
}

/// Degree of a place of k(t): the polynomial degree, 1 for the degree place.
inline int place_degree(const Place& v) {
  require(v.kind == Place::Kind::Irreducible || v.kind == Place::Kind::Degree, ErrorCode::InvalidArgument,
          "place degree is defined for geometric places");
  return v.kind == Place::Kind::Degree ? 1 : v.poly_degree();
}

inline long long total_degree(const Divisor& d) {
  long long s = 0;
  for (auto& [v, m] : d.mult) s += m * place_degree(v);
  return s;
}

// ---------------------------------------------------------------------------
// Pic(V)

struct PicReport {
  enum class Structure { Trivial, InfiniteCyclic };

  ValuationSet vset;
  Structure structure = Structure::Trivial;
  long long pic2_order = 1;
  std::string certificate;
};

inline std::string to_string(PicReport::Structure s) {
  return s == PicReport::Structure::Trivial ? "trivial" : "infinite_cyclic_by_degree";
}

inline PicReport pic(const ValuationSet& vs) {
  using K = ValuationSet::Kind;
  switch (vs.kind) {
    case K::AllPrimesExcept:
      return {vs, PicReport::Structure::Trivial, 1,
              "Z[1/S] is a principal ideal domain: sum m_p [p] is the divisor of prod p^m_p"};
    case K::GeometricAffine:
      return {vs, PicReport::Structure::Trivial, 1,
              "k[t] is a principal ideal domain: sum m_P [P] is the divisor of prod P^m_P"};
    case K::GeometricProjective:
      return {vs, PicReport::Structure::InfiniteCyclic, 2,
              "degree map Pic(P^1) -> Z is an isomorphism; [deg] has degree 1"};
    case K::DivisorialQt: break;
  }
  fail(ErrorCode::UnsupportedConfiguration, "Pic is not certified for " + to_string(vs));
}

/// An element whose principal divisor is d, when d is principal.
inline Element principal_generator(const Divisor& d) {
  const ValuationSet& vs = d.vset;
  const FieldDesc& k = vs.field;
  pic(vs);
  if (vs.kind == ValuationSet::Kind::GeometricProjective)
    require(total_degree(d) == 0, ErrorCode::InvalidArgument, "divisor of nonzero degree is not principal");
  Element a = from_int(k, 1);
  for (auto& [v, m] : d.mult) {
    if (v.kind == Place::Kind::Degree) continue;  // determined by the finite part
    a = a * uniformizer(k, v).pow(m);
  }
  return a;
}

// ---------------------------------------------------------------------------
// Ideles

/// Finitely many explicit components; the component is a unit elsewhere.
/// Unit components carry no class information and are dropped on insertion.
struct Idele {
  ValuationSet vset;
  std::map<Place, Element> comp;

  void set(const Place& v, const Element& x) {
    require(vset.contains(v), ErrorCode::InvalidArgument, "component outside V");
    require(!x.is_zero(), ErrorCode::ZeroElement, "zero idele component");
    Element y = in_field(vset.field, x);
    if (valuation(vset.field, v, y) == 0)
      comp.erase(v);
    else
      comp.insert_or_assign(v, y);
  }

  friend Idele operator*(const Idele& a, const Idele& b) {
    require(a.vset == b.vset, ErrorCode::InvalidArgument, "ideles on different valuation sets");
    Idele out = a;
    for (auto& [v, x] : b.comp) {
      auto it = a.comp.find(v);
      out.set(v, it == a.comp.end() ? x : it->second * x);
    }
    return out;
  }
};

/// The principal idele of a (its non-unit components).
inline Idele principal_idele(const ValuationSet& vs, const Element& a) {
  Idele x{vs, {}};
  for (auto& v : support_in(vs, a)) x.set(v, a);
  return x;
}

/// nu(x) = sum v(x_v) v.
inline Divisor idele_divisor(const Idele& x) {
  Divisor d{x.vset, {}};
  for (auto& [v, a] : x.comp) d.add(v, valuation(x.vset.field, v, a));
  return d;
}

/// An idele with divisor d: uniformizer powers at the support.
inline Idele idele_of_divisor(const Divisor& d) {
  Idele x{d.vset, {}};
  for (auto& [v, m] : d.mult) x.set(v, uniformizer(d.vset.field, v).pow(m));
  return x;
}

/// Class of an idele in I/I_0 K^x = Pic(V): 0 for trivial Pic, the total
/// degree otherwise.
inline long long idele_class(const Idele& x) {
  PicReport r = pic(x.vset);
  if (r.structure == PicReport::Structure::Trivial) return 0;
  return total_degree(idele_divisor(x));
}

/// Label of the coset in I / I^2 I_0 K^x = Pic(V)/2Pic(V).
inline long long pic2_coset(const Idele& x) {
  long long c = idele_class(x);
  long long n = pic(x.vset).pic2_order;
  return ((c % n) + n) % n;
}

}  // namespace wittforge

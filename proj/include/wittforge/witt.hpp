#pragma once

// Diagonal quadratic forms and their Witt classes: Pfister forms, first and
// second residue maps, and decision procedures for hyperbolicity, Witt
// equivalence, isotropy and membership in powers of the fundamental ideal.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "wittforge/symbols.hpp"

namespace wittforge {

/// Diagonal form <a_1, ..., a_n>. Residue computations may produce the empty form.
struct QForm {
  FieldDesc field;
  std::vector<Element> entries;

  int dim() const { return static_cast<int>(entries.size()); }
};

inline QForm make_form(const FieldDesc& k, const std::vector<Element>& entries) {
  QForm q{k, {}};
  for (auto& a : entries) {
    require(!a.is_zero(), ErrorCode::ZeroElement, "zero diagonal entry");
    q.entries.push_back(in_field(k, a));
  }
  return q;
}

inline QForm parse_form(const FieldDesc& k, const std::vector<std::string>& entries) {
  std::vector<Element> e;
  for (auto& s : entries) e.push_back(parse_element(k, s));
  require(!e.empty(), ErrorCode::InvalidArgument, "a form needs at least one entry");
  return make_form(k, e);
}

inline std::string to_string(const QForm& q) {
  std::string out = "<";
  for (std::size_t i = 0; i < q.entries.size(); ++i) out += (i ? "," : "") + format(q.field, q.entries[i]);
  return out + ">";
}

struct PfisterSpec {
  std::vector<Element> slots;
};

/// <<a_1, ..., a_d>> = <1,-a_1> (x) ... (x) <1,-a_d>, expanded in tensor order.
inline QForm pfister(const FieldDesc& k, const PfisterSpec& spec) {
  require(!spec.slots.empty(), ErrorCode::InvalidArgument, "Pfister form needs at least one slot");
  std::vector<Element> e{from_int(k, 1)};
  for (auto& a0 : spec.slots) {
    require(!a0.is_zero(), ErrorCode::ZeroSlot, "zero Pfister slot");
    Element a = in_field(k, a0);
    std::size_t n = e.size();
    for (std::size_t i = 0; i < n; ++i) e.push_back(-(e[i] * a));
  }
  return QForm{k, e};
}

inline QForm direct_sum(const QForm& a, const QForm& b) {
  require(a.field == b.field, ErrorCode::FieldMismatch, "forms over different fields");
  QForm out = a;
  out.entries.insert(out.entries.end(), b.entries.begin(), b.entries.end());
  return out;
}

inline QForm scale(const Element& lambda, const QForm& q) {
  require(!lambda.is_zero(), ErrorCode::ZeroScalar, "scaling by zero");
  Element l = in_field(q.field, lambda);
  QForm out{q.field, {}};
  for (auto& a : q.entries) out.entries.push_back(l * a);
  return out;
}

inline QForm tensor(const QForm& a, const QForm& b) {
  require(a.field == b.field, ErrorCode::FieldMismatch, "forms over different fields");
  QForm out{a.field, {}};
  for (auto& x : a.entries)
    for (auto& y : b.entries) out.entries.push_back(x * y);
  return out;
}

inline QForm negate(const QForm& q) { return scale(from_int(q.field, -1), q); }

/// (-1)^{n(n-1)/2} a_1 ... a_n.
inline Element signed_discriminant(const QForm& q) {
  Element d = from_int(q.field, 1);
  for (auto& a : q.entries) d = d * a;
  long long n = q.dim();
  if ((n * (n - 1) / 2) % 2) d = -d;
  return d;
}

/// Signature over Q.
inline int signature(const QForm& q) {
  require(q.field.kind == FieldDesc::Kind::Rationals, ErrorCode::UnsupportedField, "signature over " + to_string(q.field));
  int s = 0;
  for (auto& a : q.entries) s += sign(a.as<Rational>());
  return s;
}

// ---------------------------------------------------------------------------
// Residue maps

struct ResidueSplit {
  QForm first;           ///< d_1: unit entries
  QForm second;          ///< d_2: entries carrying an odd power of the uniformizer
  Element scaling_used;  ///< the uniformizer relative to which d_2 is taken
};

inline ResidueSplit residue_split(const FieldDesc& k, const Place& v, const QForm& q) {
  require_tame(k, v);
  FieldDesc kv = residue_field(k, v);
  Element pi = uniformizer(k, v);
  ResidueSplit out{{kv, {}}, {kv, {}}, pi};
  for (auto& a : q.entries) {
    int e = valuation(k, v, a);
    Element u = a * pi.pow(-e);
    // a lies in the square class of pi^(e mod 2) u
    (e % 2 ? out.second : out.first).entries.push_back(residue_image(k, v, u));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Clifford invariant

/// Pairs (x, y) with e_2 = sum of (x, y). For even n the form is written as
/// <<X_m>> + sum_{k>=2} <<X_{k-1}, x_k>> - sum_i <<a_{2i-1}, x_i>> with
/// x_i = -a_{2i-1} a_{2i} and X_k = x_1 ... x_k; odd forms get <-delta>
/// appended so that the signed discriminant becomes trivial.
inline std::vector<std::pair<Element, Element>> clifford_pairs(const QForm& q0) {
  QForm q = q0;
  if (q.dim() % 2) {
    // With c = (-1)^k a_1...a_n and 2k = n + 1, q + <c> has square signed discriminant.
    Element c = from_int(q.field, 1);
    for (auto& a : q.entries) c = c * a;
    if (((q.dim() + 1) / 2) % 2) c = -c;
    q.entries.push_back(c);
  }
  std::vector<std::pair<Element, Element>> out;
  Element X = from_int(q.field, 1);
  for (int i = 0; 2 * i + 1 < q.dim(); ++i) {
    Element x = -(q.entries[2 * i] * q.entries[2 * i + 1]);
    if (i > 0) out.push_back({X, x});
    out.push_back({q.entries[2 * i], x});
    X = X * x;
  }
  return out;
}

/// e_2 of the form (its Clifford invariant as a class in H^2).
inline SymbolSum clifford_invariant(const QForm& q) {
  SymbolSum s{q.field, 2, {}};
  for (auto& [x, y] : clifford_pairs(q)) s.symbols.push_back(Symbol{{x, y}});
  return canonicalize(s);
}

// ---------------------------------------------------------------------------
// Deciders

namespace detail {

inline bool hyperbolic_global(const QForm& q);

inline bool hyperbolic_number_field(const QForm& q) {
  const FieldDesc& k = q.field;
  std::vector<Element> elems;
  auto pairs = clifford_pairs(q);
  for (auto& [x, y] : pairs) {
    elems.push_back(x);
    elems.push_back(y);
  }
  for (auto& v : real_places(k)) {
    int s = 0;
    for (auto& a : q.entries) s += real_sign_at(k, a, v);
    if (s != 0) return false;
  }
  for (auto& v : relevant_places(k, elems)) {
    int h = 1;
    for (auto& [x, y] : pairs) h *= hilbert(k, x, y, v);
    if (h != 1) return false;
  }
  return true;
}

inline bool hyperbolic_function_field(const QForm& q) {
  const FieldDesc& k = q.field;
  std::vector<Place> places;
  for (auto& a : q.entries)
    for (auto& v : finite_support(k, a)) places.push_back(v);
  std::sort(places.begin(), places.end());
  places.erase(std::unique(places.begin(), places.end()), places.end());
  for (auto& v : places) {
    auto split = residue_split(k, v, q);
    if (!split.second.entries.empty() && !hyperbolic_global(split.second)) return false;
  }
  Place v0 = specialization_place(k, q.entries);
  return hyperbolic_global(residue_split(k, v0, q).first);
}

inline bool hyperbolic_global(const QForm& q) {
  if (q.entries.empty()) return true;
  if (q.dim() % 2) return false;
  require_odd_characteristic(q.field);
  if (q.field.kind == FieldDesc::Kind::NumberField)
    fail(ErrorCode::UnsupportedField, "Witt classes over " + to_string(q.field));
  if (!is_square(q.field, signed_discriminant(q))) return false;
  switch (q.field.kind) {
    case FieldDesc::Kind::PrimeField:
    case FieldDesc::Kind::GaloisField: return true;
    case FieldDesc::Kind::Rationals:
    case FieldDesc::Kind::QuadraticField: return hyperbolic_number_field(q);
    case FieldDesc::Kind::RationalFunction: return hyperbolic_function_field(q);
    case FieldDesc::Kind::NumberField: break;
  }
  fail(ErrorCode::UnsupportedField, "Witt classes over " + to_string(q.field));
}

/// Local anisotropic dimension over Q_p or R.
inline int anisotropic_dimension_q_local(const QForm& q, const GlobalPlace& v) {
  if (q.entries.empty()) return 0;
  if (v.real) return std::abs(signature(q));
  int c = 1;
  for (auto& [x, y] : clifford_pairs(q)) c *= hilbert_q(x.as<Rational>(), y.as<Rational>(), v);
  if (q.dim() % 2) return c == 1 ? 1 : 3;
  if (!local_square_q(signed_discriminant(q).as<Rational>(), v)) return 2;
  return c == 1 ? 0 : 4;
}

inline int anisotropic_dimension_global(const QForm& q) {
  if (q.entries.empty()) return 0;
  require_odd_characteristic(q.field);
  switch (q.field.kind) {
    case FieldDesc::Kind::PrimeField:
    case FieldDesc::Kind::GaloisField:
      if (q.dim() % 2) return 1;
      return is_square(q.field, signed_discriminant(q)) ? 0 : 2;
    case FieldDesc::Kind::Rationals: {
      int best = 0;
      for (auto& v : relevant_places(q.field, q.entries)) best = std::max(best, anisotropic_dimension_q_local(q, v));
      return best;
    }
    default: fail(ErrorCode::UnsupportedField, "anisotropic dimension over " + to_string(q.field));
  }
}

}  // namespace detail

inline bool is_hyperbolic(const QForm& q) { return detail::hyperbolic_global(q); }

inline bool witt_equivalent(const QForm& a, const QForm& b) {
  require(a.field == b.field, ErrorCode::FieldMismatch, "forms over different fields");
  return is_hyperbolic(direct_sum(a, negate(b)));
}

/// Dimension of the anisotropic kernel (Q and finite fields; k(t) is unsupported).
inline int anisotropic_dimension(const QForm& q) { return detail::anisotropic_dimension_global(q); }

inline bool is_isotropic(const QForm& q) { return anisotropic_dimension(q) < q.dim(); }

// Local versions over the completion K_v. For k(t) they use
// W(K_v) = W(k_v) + W(k_v) through (d_1, d_2).

inline bool is_hyperbolic_local(const Place& v, const QForm& q) {
  if (q.entries.empty()) return true;
  if (q.field.kind == FieldDesc::Kind::Rationals) {
    GlobalPlace g = global_place(v);
    if (g.real) return signature(q) == 0;
    return detail::anisotropic_dimension_q_local(q, g) == 0;
  }
  require(q.field.is_function_field(), ErrorCode::UnsupportedField, "local Witt classes over " + to_string(q.field));
  auto split = residue_split(q.field, v, q);
  return is_hyperbolic(split.first) && is_hyperbolic(split.second);
}

inline bool witt_equivalent_local(const Place& v, const QForm& a, const QForm& b) {
  require(a.field == b.field, ErrorCode::FieldMismatch, "forms over different fields");
  return is_hyperbolic_local(v, direct_sum(a, negate(b)));
}

inline int anisotropic_dimension_local(const Place& v, const QForm& q) {
  if (q.field.kind == FieldDesc::Kind::Rationals) return detail::anisotropic_dimension_q_local(q, global_place(v));
  require(q.field.is_function_field(), ErrorCode::UnsupportedField, "local anisotropy over " + to_string(q.field));
  auto split = residue_split(q.field, v, q);  // Springer's theorem
  return anisotropic_dimension(split.first) + anisotropic_dimension(split.second);
}

inline bool is_isotropic_local(const Place& v, const QForm& q) { return anisotropic_dimension_local(v, q) < q.dim(); }

// ---------------------------------------------------------------------------
// Powers of the fundamental ideal

/// [q] in I^d for d in {1,2,3}.
inline bool in_fundamental_power(const QForm& q, int d) {
  require(d >= 1 && d <= 3, ErrorCode::UnsupportedDegree, "membership in I^d is decided for d <= 3");
  if (q.dim() % 2) return false;
  if (d == 1) return true;
  if (!is_square(q.field, signed_discriminant(q))) return false;
  if (d == 2) return true;
  return is_trivial_or_throw(clifford_invariant(q));
}

inline bool in_fundamental_power_local(const Place& v, const QForm& q, int d) {
  require(d >= 1 && d <= 3, ErrorCode::UnsupportedDegree, "membership in I^d is decided for d <= 3");
  if (q.dim() % 2) return false;
  if (d == 1) return true;
  SymbolSum disc = single(q.field, Symbol{{signed_discriminant(q)}});
  auto t = is_trivial_local(v, disc);
  require(t.has_value(), ErrorCode::Undecided, "local discriminant");
  if (!*t) return false;
  if (d == 2) return true;
  auto c = is_trivial_local(v, clifford_invariant(q));
  require(c.has_value(), ErrorCode::Undecided, "local Clifford invariant");
  return *c;
}

/// q + (-lambda q) = <1,-lambda> (x) q.
inline QForm lemma_shift_delta(const QForm& q, const Element& lambda) {
  require(!lambda.is_zero(), ErrorCode::ZeroScalar, "shift by zero");
  return direct_sum(q, scale(-in_field(q.field, lambda), q));
}

/// 2^(floor(log2 n) + 2).
inline long long arason_pfister_floor(long long n) {
  require(n >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  int l = 0;
  while ((2LL << l) <= n) ++l;
  return 1LL << (l + 2);
}

// ---------------------------------------------------------------------------
// Invariants gamma_d

/// gamma_d: I^d / I^{d+1} -> H^d for d <= 3. Degree 3 uses an explicit
/// presentation as a sum of 3-fold Pfister forms, or the signature over Q.
inline SymbolSum gamma(const QForm& q, int d, const std::vector<PfisterSpec>* presentation = nullptr) {
  require(d >= 1 && d <= 3, ErrorCode::UnsupportedDegree, "gamma is implemented for d <= 3");
  require(in_fundamental_power(q, d), ErrorCode::NotInIdealPower, "form is not in I^" + std::to_string(d));
  const FieldDesc& k = q.field;
  if (d == 1) return single(k, Symbol{{signed_discriminant(q)}});
  if (d == 2) return clifford_invariant(q);
  if (presentation) {
    SymbolSum s{k, 3, {}};
    for (auto& spec : *presentation) {
      require(spec.slots.size() == 3, ErrorCode::DegreeMismatch, "presentation needs 3-fold Pfister forms");
      s.symbols.push_back(cup(k, spec.slots));
    }
    return canonicalize(s);
  }
  require(k.kind == FieldDesc::Kind::Rationals, ErrorCode::NoPfisterPresentation,
          "gamma_3 over " + to_string(k) + " needs a Pfister presentation");
  int sg = signature(q);
  if (((sg % 16) + 16) % 16 == 8) return single(k, cup(k, {-1, -1, -1}));
  return zero_sum(k, 3);
}

// ---------------------------------------------------------------------------
// Canonical form and Gram ingestion

/// Sorted square-class representatives with hyperbolic pairs stripped greedily.
inline QForm canonical_form(const QForm& q) {
  std::vector<Element> reps;
  for (auto& a : q.entries) reps.push_back(square_class_rep(q.field, a));
  std::sort(reps.begin(), reps.end());
  std::vector<bool> used(reps.size(), false);
  std::vector<Element> out;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (used[i]) continue;
    Element neg = square_class_rep(q.field, -reps[i]);
    bool paired = false;
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      if (!used[j] && reps[j] == neg) {
        used[j] = true;
        paired = true;
        break;
      }
    }
    used[i] = true;
    if (!paired) out.push_back(reps[i]);
  }
  return QForm{q.field, out};
}

/// Diagonalizes a nondegenerate symmetric Gram matrix by congruence.
inline QForm diagonalize(const FieldDesc& k, std::vector<std::vector<Element>> g) {
  require_odd_characteristic(k);
  std::size_t n = g.size();
  for (auto& row : g) {
    require(row.size() == n, ErrorCode::InvalidArgument, "Gram matrix must be square");
    for (auto& x : row) x = in_field(k, x);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      require(g[i][j] == g[j][i], ErrorCode::InvalidArgument, "Gram matrix must be symmetric");
  QForm out{k, {}};
  for (std::size_t s = 0; s < n; ++s) {
    if (g[s][s].is_zero()) {
      std::size_t piv = n;
      for (std::size_t i = s + 1; i < n && piv == n; ++i)
        if (!g[i][i].is_zero()) piv = i;
      if (piv != n) {
        std::swap(g[s], g[piv]);
        for (auto& row : g) std::swap(row[s], row[piv]);
      } else {
        std::size_t j = n;
        for (std::size_t i = s + 1; i < n && j == n; ++i)
          if (!g[s][i].is_zero()) j = i;
        require(j != n, ErrorCode::InvalidArgument, "degenerate Gram matrix");
        // e_s <- e_s + e_j
        for (std::size_t i = 0; i < n; ++i) g[s][i] = g[s][i] + g[j][i];
        for (std::size_t i = 0; i < n; ++i) g[i][s] = g[i][s] + g[i][j];
      }
    }
    Element d = g[s][s];
    out.entries.push_back(d);
    auto next = g;
    for (std::size_t i = s + 1; i < n; ++i)
      for (std::size_t j = s + 1; j < n; ++j) next[i][j] = g[i][j] - g[i][s] * g[s][j] / d;
    for (std::size_t i = s + 1; i < n; ++i) next[i][s] = next[s][i] = from_int(k, 0);
    g = std::move(next);
  }
  return out;
}

/// A Witt class with equality decided by witt_equivalent.
struct WittClass {
  QForm representative;

  friend bool operator==(const WittClass& a, const WittClass& b) {
    return witt_equivalent(a.representative, b.representative);
  }
  friend WittClass operator+(const WittClass& a, const WittClass& b) {
    return {direct_sum(a.representative, b.representative)};
  }
  friend WittClass operator*(const WittClass& a, const WittClass& b) {
    return {tensor(a.representative, b.representative)};
  }
};

}  // namespace wittforge

#pragma once

// Mod-2 Galois symbols: cup products of square classes, formal sums in
// H^d(F, mu_2), tame residues at discrete places and triviality deciders.

#include <algorithm>
#include <optional>
#include <vector>

#include "wittforge/local.hpp"

namespace wittforge {

/// Cup product chi_{a_1} u ... u chi_{a_d}; degree = slots.size().
struct Symbol {
  std::vector<Element> slots;

  int degree() const { return static_cast<int>(slots.size()); }
  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend bool operator<(const Symbol& a, const Symbol& b) { return a.slots < b.slots; }
};

/// Sum of symbols of a common degree, reduced modulo 2.
struct SymbolSum {
  FieldDesc field;
  int degree = 0;
  std::vector<Symbol> symbols;
};

/// Square-class reduction of slots, slot sorting, removal of symbols with a
/// square slot and mod-2 cancellation. Steinberg relations are not applied.
inline SymbolSum canonicalize(SymbolSum s) {
  std::vector<Symbol> kept;
  for (auto& sym : s.symbols) {
    require(sym.degree() == s.degree, ErrorCode::DegreeMismatch, "symbol degree differs from the sum");
    bool zero = false;
    for (auto& a : sym.slots) {
      require(!a.is_zero(), ErrorCode::ZeroSlot, "zero slot in a symbol");
      a = square_class_rep(s.field, a);
      if (is_square(s.field, a)) zero = true;
    }
    if (zero) continue;
    std::sort(sym.slots.begin(), sym.slots.end());
    kept.push_back(std::move(sym));
  }
  std::sort(kept.begin(), kept.end());
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < kept.size();) {
    std::size_t j = i;
    while (j < kept.size() && kept[j] == kept[i]) ++j;
    if ((j - i) % 2) out.push_back(kept[i]);
    i = j;
  }
  s.symbols = std::move(out);
  return s;
}

/// The symbol (a_1, ..., a_d) over K.
inline Symbol cup(const FieldDesc& k, const std::vector<Element>& slots) {
  Symbol s;
  for (auto& a : slots) {
    require(!a.is_zero(), ErrorCode::ZeroSlot, "zero slot in a symbol");
    s.slots.push_back(in_field(k, a));
  }
  return s;
}

inline SymbolSum single(const FieldDesc& k, const Symbol& s) { return canonicalize({k, s.degree(), {s}}); }

inline SymbolSum zero_sum(const FieldDesc& k, int degree) { return {k, degree, {}}; }

inline SymbolSum add(const SymbolSum& a, const SymbolSum& b) {
  require(a.field == b.field, ErrorCode::FieldMismatch, "symbol sums over different fields");
  require(a.degree == b.degree, ErrorCode::DegreeMismatch, "symbol sums of different degree");
  SymbolSum out = a;
  out.symbols.insert(out.symbols.end(), b.symbols.begin(), b.symbols.end());
  return canonicalize(out);
}

inline bool is_zero_sum(const SymbolSum& s) { return canonicalize(s).symbols.empty(); }

// ---------------------------------------------------------------------------
// Normalization at a place and tame residues

/// A symbol rewritten as (u_1, ..., u_{d-1}, pi^e u_d) with units u_i and e in {0,1}.
struct NormalizedSymbol {
  std::vector<Element> units;
  bool ramified = false;
};

inline void require_tame(const FieldDesc& k, const Place& v) {
  require(!v.archimedean(), ErrorCode::ArchimedeanPlace, "residue at the real place");
  require(residue_field(k, v).characteristic() != 2, ErrorCode::ResidueCharTwo,
          "residue characteristic 2 at " + to_string(v, k.var));
}

/// Uses {x, y} = {x, -xy} to leave at most one slot carrying the uniformizer,
/// then moves that slot last.
inline NormalizedSymbol normalize_at(const FieldDesc& k, const Place& v, const Symbol& s) {
  require_tame(k, v);
  Element pi = uniformizer(k, v);
  std::vector<Element> units;
  std::vector<bool> odd;
  for (auto& a : s.slots) {
    int e = valuation(k, v, a);
    units.push_back(in_field(k, a) * pi.pow(-e));
    odd.push_back(e % 2 != 0);
  }
  int first = -1;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (!odd[i]) continue;
    if (first < 0) {
      first = static_cast<int>(i);
      continue;
    }
    units[i] = -(units[static_cast<std::size_t>(first)] * units[i]);
    odd[i] = false;
  }
  NormalizedSymbol out;
  for (std::size_t i = 0; i < units.size(); ++i)
    if (static_cast<int>(i) != first) out.units.push_back(units[i]);
  if (first >= 0) {
    out.units.push_back(units[static_cast<std::size_t>(first)]);
    out.ramified = true;
  }
  for (auto& u : out.units)
    if (valuation(k, v, u) != 0) fail(ErrorCode::NormalizationFailure, "slot did not become a unit");
  return out;
}

/// Tame residue of a symbol sum at v: a sum of degree d-1 over the residue field.
inline SymbolSum symbol_residue(const FieldDesc& k, const Place& v, const SymbolSum& s) {
  require(s.degree >= 1, ErrorCode::DegreeMismatch, "residue of a degree-0 class");
  FieldDesc kv = residue_field(k, v);
  SymbolSum out{kv, s.degree - 1, {}};
  for (auto& sym : s.symbols) {
    auto n = normalize_at(k, v, sym);
    if (!n.ramified) continue;
    Symbol r;
    for (std::size_t i = 0; i + 1 < n.units.size(); ++i) r.slots.push_back(residue_image(k, v, n.units[i]));
    out.symbols.push_back(r);
  }
  return canonicalize(out);
}

/// Unramified component at v for the canonical uniformizer: the sum of the
/// residue images of all normalized slots.
inline SymbolSum unit_component(const FieldDesc& k, const Place& v, const SymbolSum& s) {
  FieldDesc kv = residue_field(k, v);
  SymbolSum out{kv, s.degree, {}};
  for (auto& sym : s.symbols) {
    auto n = normalize_at(k, v, sym);
    Symbol r;
    for (auto& u : n.units) r.slots.push_back(residue_image(k, v, u));
    out.symbols.push_back(r);
  }
  return canonicalize(out);
}

// ---------------------------------------------------------------------------
// Triviality

namespace detail {

inline Element slot_product(const SymbolSum& s) {
  Element acc = from_int(s.field, 1);
  for (auto& sym : s.symbols) acc = acc * sym.slots[0];
  return acc;
}

/// Places of k(t) where some slot of s has nonzero valuation.
inline std::vector<Place> ramification_candidates(const SymbolSum& s) {
  std::vector<Place> out;
  for (auto& sym : s.symbols)
    for (auto& a : sym.slots)
      for (auto& v : finite_support(s.field, a)) out.push_back(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// The place t - a for the least non-negative integer a at which every given
/// element is a unit (a = 0 when no such point exists in F_p).
inline Place specialization_place(const FieldDesc& k, const std::vector<Element>& elems) {
  long long limit = k.p == 0 ? 1'000'000 : k.p;
  auto make = [&](long long a) {
    if (k.p == 0) return Place::irreducible(QPoly({}, {Rational(-a), Rational(1)}));
    return Place::irreducible(FpPoly({k.p}, {Fp(-a, k.p), Fp(1, k.p)}));
  };
  for (long long a = 0; a < limit; ++a) {
    Place v = make(a);
    bool ok = true;
    for (auto& e : elems)
      if (valuation(k, v, e) != 0) {
        ok = false;
        break;
      }
    if (ok) return v;
  }
  return make(0);
}

inline bool decide_trivial(const SymbolSum& s0);

inline bool decide_function_field(const SymbolSum& s) {
  const FieldDesc& k = s.field;
  if (k.p != 0 && s.degree >= 3) return true;  // cd(F_p(t)) = 2
  for (auto& v : ramification_candidates(s))
    if (!decide_trivial(symbol_residue(k, v, s))) return false;
  std::vector<Element> all;
  for (auto& sym : s.symbols) all.insert(all.end(), sym.slots.begin(), sym.slots.end());
  Place v0 = specialization_place(k, all);
  return decide_trivial(unit_component(k, v0, s));
}

inline bool decide_number_field(const SymbolSum& s) {
  const FieldDesc& k = s.field;
  if (s.degree == 2) {
    std::vector<Element> elems;
    for (auto& sym : s.symbols) elems.insert(elems.end(), sym.slots.begin(), sym.slots.end());
    auto places = relevant_places(k, elems);
    int nontrivial = 0;
    bool trivial = true;
    for (auto& v : places) {
      int h = 1;
      for (auto& sym : s.symbols) h *= hilbert(k, sym.slots[0], sym.slots[1], v);
      if (h == -1) {
        trivial = false;
        ++nontrivial;
      }
    }
    require(nontrivial % 2 == 0, ErrorCode::InternalInvariant, "Hilbert reciprocity violated");
    return trivial;
  }
  // Degree >= 3: only the real places carry cohomology.
  for (auto& v : real_places(k)) {
    int count = 0;
    for (auto& sym : s.symbols) {
      bool all_negative = true;
      for (auto& a : sym.slots) all_negative = all_negative && real_sign_at(k, a, v) < 0;
      count += all_negative;
    }
    if (count % 2) return false;
  }
  return true;
}

inline bool decide_trivial(const SymbolSum& s0) {
  SymbolSum s = canonicalize(s0);
  if (s.symbols.empty()) return true;
  if (s.degree == 0) return false;
  require_odd_characteristic(s.field);
  if (s.degree == 1) return is_square(s.field, slot_product(s));
  switch (s.field.kind) {
    case FieldDesc::Kind::PrimeField:
    case FieldDesc::Kind::GaloisField: return true;
    case FieldDesc::Kind::Rationals:
    case FieldDesc::Kind::QuadraticField: return decide_number_field(s);
    case FieldDesc::Kind::RationalFunction: return decide_function_field(s);
    case FieldDesc::Kind::NumberField: break;
  }
  fail(ErrorCode::UnsupportedField, "symbol triviality over " + to_string(s.field));
}

}  // namespace detail

/// Triviality of a class in H^d(F, mu_2); nullopt means Undecided.
inline std::optional<bool> is_trivial(const SymbolSum& s) {
  try {
    return detail::decide_trivial(s);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnsupportedField) return std::nullopt;
    throw;
  }
}

/// Like is_trivial but raises Undecided instead of returning nullopt.
inline bool is_trivial_or_throw(const SymbolSum& s) {
  auto r = is_trivial(s);
  require(r.has_value(), ErrorCode::Undecided, "symbol triviality over " + to_string(s.field));
  return *r;
}

/// Conversion between library places of Q and the GlobalPlace of the local layer.
inline GlobalPlace global_place(const Place& v) {
  if (v.kind == Place::Kind::Real) return {true, 0, 0};
  require(v.kind == Place::Kind::FinitePrime, ErrorCode::InvalidArgument, "not a place of Q");
  return {false, v.prime, 0};
}

/// Triviality of the image of s in H^d(K_v, mu_2).
inline std::optional<bool> is_trivial_local(const Place& v, const SymbolSum& s0) {
  SymbolSum s = canonicalize(s0);
  if (s.symbols.empty()) return true;
  if (s.degree == 0) return false;
  const FieldDesc& k = s.field;
  if (k.kind == FieldDesc::Kind::Rationals) {
    GlobalPlace g = global_place(v);
    if (g.real) {
      int count = 0;
      for (auto& sym : s.symbols) {
        bool neg = true;
        for (auto& a : sym.slots) neg = neg && sign(a.as<Rational>()) < 0;
        count += neg;
      }
      return count % 2 == 0;
    }
    if (s.degree == 1) return local_square_q(detail::slot_product(s).as<Rational>(), g);
    if (s.degree == 2) {
      int h = 1;
      for (auto& sym : s.symbols) h *= hilbert_q(sym.slots[0].as<Rational>(), sym.slots[1].as<Rational>(), g);
      return h == 1;
    }
    return true;
  }
  require(k.is_function_field(), ErrorCode::UnsupportedField, "local symbols over " + to_string(k));
  auto r = is_trivial(symbol_residue(k, v, s));
  if (!r || !*r) return r;
  return is_trivial(unit_component(k, v, s));
}

}  // namespace wittforge

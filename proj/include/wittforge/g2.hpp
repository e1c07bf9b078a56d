#pragma once

// Octonion algebras O(a, b, c), their invariant (a) u (b) u (c), residue
// quaternion algebras and the genus obstruction map to residue tuples.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wittforge/reduction.hpp"

namespace wittforge {

struct OctonionDesc {
  FieldDesc field;
  std::array<Element, 3> triple;

  static OctonionDesc make(const FieldDesc& k, const Element& a, const Element& b, const Element& c) {
    for (const Element* e : {&a, &b, &c}) require(!e->is_zero(), ErrorCode::ZeroSlot, "zero octonion slot");
    return {k, {in_field(k, a), in_field(k, b), in_field(k, c)}};
  }

  QForm norm_form() const { return pfister(field, PfisterSpec{{triple[0], triple[1], triple[2]}}); }
};

/// Quaternion algebra over a residue field: split, or (a, b).
struct QuaternionDesc {
  FieldDesc field;
  bool split_tag = false;
  Element a, b;
};

inline std::string to_string(const QuaternionDesc& q) {
  if (q.split_tag) return "split";
  return "(" + format(q.field, q.a) + ", " + format(q.field, q.b) + ")";
}

inline Symbol lambda_class(const OctonionDesc& o) {
  return cup(o.field, {o.triple[0], o.triple[1], o.triple[2]});
}

inline bool octonion_isomorphic(const OctonionDesc& x, const OctonionDesc& y) {
  require(x.field == y.field, ErrorCode::FieldMismatch, "octonion algebras over different fields");
  return is_trivial_or_throw(add(single(x.field, lambda_class(x)), single(y.field, lambda_class(y))));
}

/// Good reduction of the G_2 group Aut(O): the norm form has trivial second
/// residue at v. Pfister forms represent 1, so no scaling is available.
inline ReductionVerdict g2_good_reduction(const FieldDesc& k, const Place& v, const OctonionDesc& o) {
  validate_place(k, v);
  require(o.field == k, ErrorCode::FieldMismatch, "octonion algebra is not over " + to_string(k));
  require_tame(k, v);
  ResidueSplit rs = residue_split(k, v, o.norm_form());
  if (is_hyperbolic(rs.second))
    return {v, ReductionVerdict::Status::GoodAsIs, from_int(k, 1), "norm form has trivial second residue"};
  return {v, ReductionVerdict::Status::Bad, std::nullopt, "norm form has nontrivial second residue"};
}

inline QuaternionDesc residue_quaternion(const FieldDesc& k, const Place& v, const OctonionDesc& o) {
  validate_place(k, v);
  NormalizedSymbol n = normalize_at(k, v, lambda_class(o));
  FieldDesc kv = residue_field(k, v);
  if (!n.ramified) return {kv, true, from_int(kv, 1), from_int(kv, 1)};
  return {kv, false, residue_image(k, v, n.units[0]), residue_image(k, v, n.units[1])};
}

/// Isomorphism of residue quaternion algebras; nullopt when undecidable.
inline std::optional<bool> quaternion_isomorphic(const QuaternionDesc& x, const QuaternionDesc& y) {
  require(x.field == y.field, ErrorCode::FieldMismatch, "quaternion algebras over different fields");
  SymbolSum s = zero_sum(x.field, 2);
  if (!x.split_tag) s = add(s, single(x.field, cup(x.field, {x.a, x.b})));
  if (!y.split_tag) s = add(s, single(y.field, cup(y.field, {y.a, y.b})));
  return is_trivial(s);
}

struct GenusReport {
  std::vector<Place> bad_places;                        ///< V_0
  std::vector<std::vector<QuaternionDesc>> residues;    ///< per catalog member, per place of V_0
  std::vector<std::vector<std::size_t>> fibers;         ///< member indices
  std::vector<std::pair<std::size_t, std::size_t>> undecided;  ///< (member, place index)
};

/// Partitions a catalog of octonion algebras by their tuples of residue
/// quaternion algebras along the union of the bad-reduction loci. Slots whose
/// comparison is undecidable are excluded from the refinement and reported.
inline GenusReport genus_obstruction(const std::vector<OctonionDesc>& catalog, const ValuationSet& vs) {
  const FieldDesc& k = vs.field;
  GenusReport rep;
  for (auto& o : catalog) {
    require(o.field == k, ErrorCode::FieldMismatch, "octonion algebra is not over " + to_string(k));
    std::vector<Place> cand = dyadic_places(vs);
    for (auto& a : o.triple)
      for (auto& v : support_in(vs, a)) cand.push_back(v);
    for (auto& v : cand) {
      require(!detail::refuse_wild(k, v), ErrorCode::ResidueCharTwo,
              "genus obstruction needs odd residue characteristic on V");
      if (g2_good_reduction(k, v, o).status == ReductionVerdict::Status::Bad) rep.bad_places.push_back(v);
    }
  }
  std::sort(rep.bad_places.begin(), rep.bad_places.end());
  rep.bad_places.erase(std::unique(rep.bad_places.begin(), rep.bad_places.end()), rep.bad_places.end());

  for (auto& o : catalog) {
    std::vector<QuaternionDesc> t;
    for (auto& v : rep.bad_places) t.push_back(residue_quaternion(k, v, o));
    rep.residues.push_back(std::move(t));
  }
  std::vector<bool> flagged(catalog.size() * rep.bad_places.size(), false);
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    bool placed = false;
    for (auto& fiber : rep.fibers) {
      std::size_t j = fiber.front();
      bool same = true;
      for (std::size_t s = 0; s < rep.bad_places.size() && same; ++s) {
        auto r = quaternion_isomorphic(rep.residues[i][s], rep.residues[j][s]);
        if (!r) {
          for (std::size_t m : {i, j})
            if (!flagged[m * rep.bad_places.size() + s]) {
              flagged[m * rep.bad_places.size() + s] = true;
              rep.undecided.push_back({m, s});
            }
          continue;
        }
        same = *r;
      }
      if (same) {
        fiber.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) rep.fibers.push_back({i});
  }
  std::sort(rep.undecided.begin(), rep.undecided.end());
  return rep;
}

}  // namespace wittforge

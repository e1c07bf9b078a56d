#pragma once

// Good reduction of Spin_n(q) and SU_n(L/K, h) at discrete places, using the
// Witt-class criterion: some scaling lambda q has trivial second residue.

#include <optional>
#include <string>
#include <vector>

#include "wittforge/divisorial.hpp"
#include "wittforge/hermitian.hpp"

namespace wittforge {

struct ReductionVerdict {
  enum class Status { GoodAsIs, GoodAfterScaling, Bad, Refused };

  Place place;
  Status status = Status::Bad;
  std::optional<Element> lambda;  ///< witness for GoodAsIs (1) and GoodAfterScaling (pi_v)
  std::string detail;
  std::string criterion = "witt-class";

  bool good() const { return status == Status::GoodAsIs || status == Status::GoodAfterScaling; }
};

inline std::string to_string(ReductionVerdict::Status s) {
  switch (s) {
    case ReductionVerdict::Status::GoodAsIs: return "good_as_is";
    case ReductionVerdict::Status::GoodAfterScaling: return "good_after_scaling";
    case ReductionVerdict::Status::Bad: return "bad";
    case ReductionVerdict::Status::Refused: return "refused";
  }
  return "?";
}

namespace detail {

inline std::optional<ReductionVerdict> refuse_wild(const FieldDesc& k, const Place& v) {
  try {
    require_tame(k, v);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ResidueCharTwo) throw;
    return ReductionVerdict{v, ReductionVerdict::Status::Refused, std::nullopt, "residue characteristic 2"};
  }
  return std::nullopt;
}

}  // namespace detail

inline ReductionVerdict spin_good_reduction(const FieldDesc& k, const Place& v, const QForm& q) {
  validate_place(k, v);
  require(q.field == k, ErrorCode::FieldMismatch, "form is not over " + to_string(k));
  if (auto r = detail::refuse_wild(k, v)) return *r;
  ResidueSplit rs = residue_split(k, v, q);
  if (is_hyperbolic(rs.second))
    return {v, ReductionVerdict::Status::GoodAsIs, from_int(k, 1), "second residue hyperbolic"};
  // d_2[pi q] = d_1[q]
  if (is_hyperbolic(rs.first))
    return {v, ReductionVerdict::Status::GoodAfterScaling, rs.scaling_used, "second residue of pi*q hyperbolic"};
  return {v, ReductionVerdict::Status::Bad, std::nullopt, "neither residue hyperbolic"};
}

struct ReductionReport {
  std::string form_id;
  ValuationSet vset;
  QForm form;
  std::vector<ReductionVerdict> verdicts;  ///< candidate places, canonical order
  std::string blanket = "good_as_is at every other place of V: all entries are units there";

  std::vector<Place> bad_locus() const {
    std::vector<Place> out;
    for (auto& r : verdicts)
      if (r.status == ReductionVerdict::Status::Bad) out.push_back(r.place);
    return out;
  }
  bool any(ReductionVerdict::Status s) const {
    for (auto& r : verdicts)
      if (r.status == s) return true;
    return false;
  }
};

/// Places of V with residue characteristic 2.
inline std::vector<Place> dyadic_places(const ValuationSet& vs) {
  if (vs.kind == ValuationSet::Kind::AllPrimesExcept && !vs.excludes(2)) return {Place::finite(2)};
  if (vs.kind == ValuationSet::Kind::DivisorialQt && !vs.excludes(2)) return {Place::gauss(2)};
  return {};
}

/// Places of V dividing some entry, plus the dyadic places of V.
inline std::vector<Place> reduction_candidates(const ValuationSet& vs, const QForm& q) {
  std::vector<Place> c = dyadic_places(vs);
  for (auto& a : q.entries)
    for (auto& v : support_in(vs, a)) c.push_back(v);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

inline ReductionReport reduction_profile(const ValuationSet& vs, const QForm& q, std::string id = "") {
  require(q.field == vs.field, ErrorCode::FieldMismatch, "form and valuation set over different fields");
  ReductionReport rep{std::move(id), vs, q, {}};
  for (auto& v : reduction_candidates(vs, q)) rep.verdicts.push_back(spin_good_reduction(vs.field, v, q));
  return rep;
}

/// SU_n(L/K, h): split places are good, ramified places bad, and at inert
/// places the verdict is that of Spin(q_h).
inline ReductionVerdict su_good_reduction(const FieldDesc& k, const Place& v, const QuadExt& l,
                                          const HermitianForm& h) {
  validate_place(k, v);
  require(l.base == k && h.ext.same_as(l), ErrorCode::ExtensionMismatch, "hermitian form is not over L");
  if (auto r = detail::refuse_wild(k, v)) return *r;
  int e = valuation(k, v, l.delta);
  if (e % 2) return {v, ReductionVerdict::Status::Bad, std::nullopt, "ramified extension: v(delta) is odd"};
  Element u = residue_image(k, v, unit_part(k, v, l.delta));
  if (is_square(residue_field(k, v), u))
    return {v, ReductionVerdict::Status::GoodAsIs, from_int(k, 1), "split: G is SL_n over K_v"};
  ReductionVerdict r = spin_good_reduction(k, v, transfer(h));
  r.detail = "inert; transfer: " + r.detail;
  return r;
}

}  // namespace wittforge

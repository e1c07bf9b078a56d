#pragma once

// JSON encoding of fields, elements, places, forms, symbols, divisors and the
// reports produced by the library. Elements are always strings.

#include <string>
#include <vector>

#include "json.hpp"
#include "wittforge/g2.hpp"
#include "wittforge/norms.hpp"
#include "wittforge/sieve.hpp"

namespace wittforge::io {

using json = nlohmann::json;

namespace detail {

inline const json& member(const json& j, const char* key) {
  require(j.is_object() && j.contains(key), ErrorCode::ParseError, std::string("missing key '") + key + "'");
  return j.at(key);
}

inline std::string text_of(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  fail(ErrorCode::ParseError, "expected an element string, got " + j.dump());
}

inline std::vector<std::string> texts_of(const json& j) {
  require(j.is_array(), ErrorCode::ParseError, "expected an array of elements, got " + j.dump());
  std::vector<std::string> out;
  for (auto& x : j) out.push_back(text_of(x));
  return out;
}

}  // namespace detail

/// Parses JSON text, mapping syntax errors to ParseError.
inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

// ---------------------------------------------------------------------------
// Elements and places

inline json to_json(const FieldDesc& k, const Element& a) { return format(k, a); }

inline Element element_from_json(const FieldDesc& k, const json& j) { return parse_element(k, detail::text_of(j)); }

inline std::vector<Element> elements_from_json(const FieldDesc& k, const json& j) {
  std::vector<Element> out;
  for (auto& s : detail::texts_of(j)) out.push_back(parse_element(k, s));
  return out;
}

inline json to_json(const FieldDesc& k, const Place& v) {
  switch (v.kind) {
    case Place::Kind::FinitePrime: return {{"prime", v.prime.str()}};
    case Place::Kind::GaussPrime: return {{"gauss_prime", v.prime.str()}};
    case Place::Kind::Degree: return {{"degree", true}};
    case Place::Kind::Real: return {{"real", true}};
    case Place::Kind::Irreducible: return {{"poly", to_string(v, k.var)}};
  }
  return nullptr;
}

inline Place place_from_json(const FieldDesc& k, const json& j) {
  require(j.is_object(), ErrorCode::ParseError, "a place is a JSON object");
  Place v;
  if (j.contains("prime")) v = Place::finite(Integer(detail::text_of(j.at("prime"))));
  else if (j.contains("gauss_prime")) v = Place::gauss(Integer(detail::text_of(j.at("gauss_prime"))));
  else if (j.contains("poly")) v = place_for_poly_text(k, detail::text_of(j.at("poly")));
  else if (j.contains("degree")) v = Place::degree();
  else if (j.contains("real")) v = Place::real();
  else fail(ErrorCode::ParseError, "unrecognized place " + j.dump());
  validate_place(k, v);
  return v;
}

// ---------------------------------------------------------------------------
// Valuation sets and divisors

inline json to_json(const ValuationSet& vs) {
  json j{{"field", to_string(vs.field)}, {"kind", to_string(vs.kind)}};
  if (vs.kind == ValuationSet::Kind::AllPrimesExcept || vs.kind == ValuationSet::Kind::DivisorialQt) {
    json s = json::array();
    for (auto& p : vs.excluded) s.push_back(static_cast<long long>(p));
    j["S"] = s;
  }
  return j;
}

/// The field may come from the object or from the caller.
inline ValuationSet vset_from_json(const json& j, const std::optional<FieldDesc>& field = std::nullopt) {
  require(j.is_object(), ErrorCode::ParseError, "a valuation set is a JSON object");
  FieldDesc k = j.contains("field") ? parse_field(j.at("field").get<std::string>())
                                    : field.value_or(FieldDesc::rationals());
  if (field) require(*field == k, ErrorCode::FieldMismatch, "valuation set field differs from --field");
  std::string kind = detail::member(j, "kind").get<std::string>();
  std::vector<Integer> s;
  if (j.contains("S"))
    for (auto& p : j.at("S")) s.push_back(Integer(detail::text_of(p)));
  if (kind == "all_primes_except") {
    require(k.kind == FieldDesc::Kind::Rationals, ErrorCode::FieldMismatch, "all_primes_except needs Q");
    return ValuationSet::all_primes_except(s);
  }
  if (kind == "geometric_affine") return ValuationSet::geometric_affine(k);
  if (kind == "geometric_projective") return ValuationSet::geometric_projective(k);
  if (kind == "divisorial_qt") {
    require(k.is_function_field() && k.p == 0, ErrorCode::FieldMismatch, "divisorial_qt needs Q(t)");
    return ValuationSet::divisorial_qt(s);
  }
  fail(ErrorCode::ParseError, "unknown valuation set kind '" + kind + "'");
}

inline json to_json(const Divisor& d) {
  json s = json::array();
  for (auto& [v, m] : d.mult) s.push_back({{"place", to_json(d.vset.field, v)}, {"mult", m}});
  return {{"support", s}};
}

inline Divisor divisor_from_json(const ValuationSet& vs, const json& j) {
  Divisor d{vs, {}};
  for (auto& e : detail::member(j, "support")) d.add(place_from_json(vs.field, detail::member(e, "place")), e.at("mult").get<long long>());
  return d;
}

inline json to_json(const Idele& x) {
  json c = json::array();
  for (auto& [v, a] : x.comp) c.push_back({{"place", to_json(x.vset.field, v)}, {"value", to_json(x.vset.field, a)}});
  return c;
}

inline json to_json(const PicReport& r) {
  return {{"vset", to_json(r.vset)},
          {"structure", to_string(r.structure)},
          {"pic2_order", r.pic2_order},
          {"certificate", r.certificate}};
}

inline json to_json(const UnramifiedGroupTable& t) {
  auto opt = [](const std::vector<std::optional<long long>>& v) {
    json a = json::array();
    for (auto& x : v) a.push_back(x ? json(*x) : json(nullptr));
    return a;
  };
  return {{"vset", to_json(t.vset)}, {"n", t.n},           {"ell", t.ell},
          {"d0", t.d0},              {"d", opt(t.d)},     {"omega", opt(t.omega)},
          {"provenance", t.provenance}};
}

// ---------------------------------------------------------------------------
// Forms, symbols, algebras

inline json to_json(const QForm& q) {
  json a = json::array();
  for (auto& x : q.entries) a.push_back(format(q.field, x));
  return a;
}

inline QForm form_from_json(const FieldDesc& k, const json& j) { return parse_form(k, detail::texts_of(j)); }

inline PfisterSpec pfister_from_json(const FieldDesc& k, const json& j) { return {elements_from_json(k, j)}; }

inline json to_json(const SymbolSum& s) {
  json syms = json::array();
  for (auto& sym : s.symbols) {
    json slots = json::array();
    for (auto& a : sym.slots) slots.push_back(format(s.field, a));
    syms.push_back(slots);
  }
  return {{"field", to_string(s.field)}, {"degree", s.degree}, {"symbols", syms}};
}

/// Either {"degree": d, "symbols": [[...], ...]} or a bare array denoting a
/// single symbol whose slots are strings or one-element arrays.
inline SymbolSum symbol_sum_from_json(const FieldDesc& k, const json& j) {
  if (j.is_array()) {
    Symbol s;
    for (auto& slot : j) {
      if (slot.is_array()) {
        require(slot.size() == 1, ErrorCode::ParseError, "bare symbol slots have one element; use {\"symbols\": ...}");
        s.slots.push_back(element_from_json(k, slot.at(0)));
      } else {
        s.slots.push_back(element_from_json(k, slot));
      }
    }
    require(!s.slots.empty(), ErrorCode::ParseError, "empty symbol");
    return single(k, cup(k, s.slots));
  }
  int degree = detail::member(j, "degree").get<int>();
  SymbolSum out = zero_sum(k, degree);
  for (auto& sym : detail::member(j, "symbols")) {
    auto slots = elements_from_json(k, sym);
    require(static_cast<int>(slots.size()) == degree, ErrorCode::DegreeMismatch, "symbol degree mismatch");
    out = add(out, single(k, cup(k, slots)));
  }
  return out;
}

inline json to_json(const HermitianForm& h) {
  json e = json::array();
  for (auto& c : h.entries) e.push_back(format(h.ext.base, c));
  return {{"delta", format(h.ext.base, h.ext.delta)}, {"entries", e}};
}

inline HermitianForm hermitian_from_json(const FieldDesc& k, const json& j) {
  QuadExt l = QuadExt::make(k, element_from_json(k, detail::member(j, "delta")));
  return make_hermitian(l, elements_from_json(k, detail::member(j, "entries")));
}

inline json to_json(const OctonionDesc& o) {
  json t = json::array();
  for (auto& a : o.triple) t.push_back(format(o.field, a));
  return {{"triple", t}};
}

inline OctonionDesc octonion_from_json(const FieldDesc& k, const json& j) {
  auto t = elements_from_json(k, detail::member(j, "triple"));
  require(t.size() == 3, ErrorCode::ParseError, "an octonion triple has three slots");
  return OctonionDesc::make(k, t[0], t[1], t[2]);
}

inline json to_json(const QuaternionDesc& q) {
  if (q.split_tag) return {{"field", to_string(q.field)}, {"split", true}};
  return {{"field", to_string(q.field)}, {"pair", {format(q.field, q.a), format(q.field, q.b)}}};
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const FieldDesc& k, const ReductionVerdict& r) {
  json j{{"place", to_json(k, r.place)}, {"status", to_string(r.status)}, {"criterion", r.criterion}};
  if (r.status == ReductionVerdict::Status::GoodAfterScaling && r.lambda) j["lambda"] = format(k, *r.lambda);
  if (r.status == ReductionVerdict::Status::Refused) j["reason"] = r.detail;
  else j["detail"] = r.detail;
  return j;
}

inline json to_json(const ReductionReport& rep) {
  const FieldDesc& k = rep.vset.field;
  json v = json::array(), bad = json::array();
  for (auto& r : rep.verdicts) v.push_back(to_json(k, r));
  for (auto& p : rep.bad_locus()) bad.push_back(to_json(k, p));
  return {{"form", rep.form_id}, {"entries", to_json(rep.form)}, {"vset", to_json(rep.vset)},
          {"verdicts", v},       {"bad_locus", bad},             {"elsewhere", rep.blanket}};
}

inline json to_json(const Classification& c) {
  const FieldDesc& k = c.vset.field;
  auto named = [&](const std::vector<std::vector<std::size_t>>& parts) {
    json a = json::array();
    for (auto& p : parts) {
      json x = json::array();
      for (auto i : p) x.push_back(c.ids[i]);
      a.push_back(x);
    }
    return a;
  };
  json members = json::array();
  for (std::size_t i = 0; i < c.ids.size(); ++i) {
    json m{{"id", c.ids[i]}, {"delta", format(k, c.normalizer[i])}};
    if (c.mode == Classification::Mode::Similarity) {
      m["lambda"] = to_json(c.witnesses[i]);
      m["pic2_coset"] = c.pic2[i];
    }
    members.push_back(m);
  }
  json trail = json::array();
  for (auto& t : c.trail)
    trail.push_back({{"stage", t.stage}, {"member", c.ids[t.member]}, {"pivot", c.ids[t.pivot]},
                     {"invariant", to_json(t.invariant)}});
  json merges = json::array();
  for (auto& m : c.merges) merges.push_back({{"a", c.ids[m.a]}, {"b", c.ids[m.b]}, {"mu", format(k, m.mu)}});
  return {{"mode", c.mode == Classification::Mode::Similarity ? "similarity" : "fiber"},
          {"vset", to_json(c.vset)},
          {"n", c.n},
          {"ell", c.ell},
          {"bound", c.bound},
          {"bound_ok", c.bound_ok()},
          {"cell_count", c.cells.size()},
          {"class_count", c.classes.size()},
          {"classes", named(c.classes)},
          {"cells", named(c.cells)},
          {"members", members},
          {"trail", trail},
          {"merges", merges}};
}

inline json to_json(const GenusReport& r, const FieldDesc& k, const std::vector<std::string>& ids) {
  json places = json::array();
  for (auto& v : r.bad_places) places.push_back(to_json(k, v));
  json fibers = json::array();
  for (auto& f : r.fibers) {
    json members = json::array();
    for (auto i : f) {
      json t = json::array();
      for (auto& q : r.residues[i]) t.push_back(to_json(q));
      members.push_back({{"id", ids[i]}, {"residues", t}});
    }
    fibers.push_back(members);
  }
  json und = json::array();
  for (auto& [m, s] : r.undecided) und.push_back({{"id", ids[m]}, {"place", to_json(k, r.bad_places[s])}});
  return {{"bad_places", places}, {"fiber_count", r.fibers.size()}, {"fibers", fibers}, {"undecided", und}};
}

// ---------------------------------------------------------------------------
// Catalogs

struct CatalogEntry {
  std::string id;
  std::string type;  ///< quadratic | hermitian | octonion
  json data;
};

struct Catalog {
  int version = 1;
  FieldDesc field;
  std::optional<ValuationSet> vset;
  std::optional<QForm> base;
  std::vector<CatalogEntry> entries;

  std::vector<std::string> ids_of(const std::string& type) const {
    std::vector<std::string> out;
    for (auto& e : entries)
      if (e.type == type) out.push_back(e.id);
    return out;
  }
  std::vector<QForm> quadratic() const {
    std::vector<QForm> out;
    for (auto& e : entries)
      if (e.type == "quadratic") out.push_back(form_from_json(field, detail::member(e.data, "entries")));
    return out;
  }
  std::vector<HermitianForm> hermitian() const {
    std::vector<HermitianForm> out;
    for (auto& e : entries)
      if (e.type == "hermitian") out.push_back(hermitian_from_json(field, e.data));
    return out;
  }
  std::vector<OctonionDesc> octonion() const {
    std::vector<OctonionDesc> out;
    for (auto& e : entries)
      if (e.type == "octonion") out.push_back(octonion_from_json(field, e.data));
    return out;
  }
};

inline Catalog catalog_from_json(const json& j) {
  require(j.is_object(), ErrorCode::ParseError, "a catalog is a JSON object");
  Catalog c;
  c.version = j.value("schema_version", 1);
  require(c.version == 1, ErrorCode::ParseError, "unsupported catalog schema version " + std::to_string(c.version));
  c.field = parse_field(detail::member(j, "field").get<std::string>());
  if (j.contains("vset")) c.vset = vset_from_json(j.at("vset"), c.field);
  if (j.contains("base")) c.base = form_from_json(c.field, j.at("base"));
  std::vector<std::string> seen;
  for (auto& e : detail::member(j, "entries")) {
    CatalogEntry ce{detail::text_of(detail::member(e, "id")), e.value("type", std::string("quadratic")), e};
    require(ce.type == "quadratic" || ce.type == "hermitian" || ce.type == "octonion", ErrorCode::ParseError,
            "unknown catalog entry type '" + ce.type + "'");
    require(std::find(seen.begin(), seen.end(), ce.id) == seen.end(), ErrorCode::ParseError,
            "duplicate catalog id '" + ce.id + "'");
    seen.push_back(ce.id);
    c.entries.push_back(std::move(ce));
  }
  return c;
}

}  // namespace wittforge::io

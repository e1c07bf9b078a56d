#pragma once

// Similarity classification of catalogs of forms with good reduction along V,
// and classification of local-global fibers, by staged refinement with the
// invariants gamma_m of normalized differences.

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wittforge/reduction.hpp"
#include "wittforge/table.hpp"

namespace wittforge {

// ---------------------------------------------------------------------------
// Direct deciders over Q

/// Hasse invariant prod_{i<j} (a_i, a_j)_v of a form over Q.
inline int hasse_invariant(const QForm& q, const GlobalPlace& v) {
  require(q.field.kind == FieldDesc::Kind::Rationals, ErrorCode::UnsupportedField, "Hasse invariant over Q only");
  int h = 1;
  for (std::size_t i = 0; i < q.entries.size(); ++i)
    for (std::size_t j = i + 1; j < q.entries.size(); ++j)
      h *= hilbert_q(q.entries[i].as<Rational>(), q.entries[j].as<Rational>(), v);
  return h;
}

/// Isometry of two forms over Q_p or R.
inline bool locally_isometric_q(const QForm& a, const QForm& b, const GlobalPlace& v) {
  if (a.dim() != b.dim()) return false;
  if (v.real) return signature(a) == signature(b);
  Rational d = signed_discriminant(a).as<Rational>() * signed_discriminant(b).as<Rational>();
  return local_square_q(d, v) && hasse_invariant(a, v) == hasse_invariant(b, v);
}

namespace detail {

inline std::vector<Integer> entry_primes(const std::vector<const QForm*>& forms) {
  std::vector<Integer> ps{2};
  for (auto* q : forms)
    for (auto& a : q->entries)
      for (auto& v : finite_support(q->field, a)) ps.push_back(v.prime);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

inline std::vector<Rational> subset_products(const std::vector<Integer>& gens) {
  require(gens.size() <= 20, ErrorCode::InvalidArgument, "too many square-class generators");
  std::vector<Rational> out{Rational(1)};
  for (auto& g : gens) {
    std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] * Rational(g));
  }
  return out;
}

}  // namespace detail

/// A scalar mu with a = mu b, or nullopt when a and b are not similar.
/// Odd dimension: mu is forced by the discriminants. Even dimension over Q:
/// local obstructions are checked exactly and mu is searched among products
/// of -1, 2, the entry primes and one auxiliary prime.
inline std::optional<Element> similarity_scalar(const QForm& a, const QForm& b) {
  require(a.field == b.field, ErrorCode::FieldMismatch, "forms over different fields");
  if (a.dim() != b.dim()) return std::nullopt;
  const FieldDesc& k = a.field;
  if (a.dim() % 2) {
    Element mu = from_int(k, 1);
    for (auto& x : a.entries) mu = mu * x;
    for (auto& x : b.entries) mu = mu / x;
    mu = square_class_rep(k, mu);
    if (witt_equivalent(a, scale(mu, b))) return mu;
    return std::nullopt;
  }
  require(k.kind == FieldDesc::Kind::Rationals, ErrorCode::UnsupportedField,
          "even-dimensional similarity is decided over Q only");
  if (!square_class_equal(k, signed_discriminant(a), signed_discriminant(b))) return std::nullopt;
  if (std::abs(signature(a)) != std::abs(signature(b))) return std::nullopt;
  // Necessary local condition: c_v(mu b) c_v(b) = (mu, d(b))_v, which must be
  // trivial wherever d(b) is a local square.
  std::vector<Integer> ps = detail::entry_primes({&a, &b});
  Rational d = signed_discriminant(b).as<Rational>();
  for (auto& p : ps) {
    GlobalPlace v{false, p, 0};
    if (local_square_q(d, v) && hasse_invariant(a, v) != hasse_invariant(b, v)) return std::nullopt;
  }
  std::vector<Integer> gens{-1};
  gens.insert(gens.end(), ps.begin(), ps.end());
  auto base = detail::subset_products(gens);
  for (auto& mu : base)
    if (witt_equivalent(a, scale(Element(mu), b))) return Element(mu);
  for (int l = 3; l < 1000; l += 2) {
    if (!is_prime(Integer(l)) || std::binary_search(ps.begin(), ps.end(), Integer(l))) continue;
    for (auto& mu : base)
      if (witt_equivalent(a, scale(Element(mu * l), b))) return Element(mu * l);
  }
  fail(ErrorCode::InvariantUndecided, "similarity of " + to_string(a) + " and " + to_string(b) + " is undecided");
}

inline bool similar(const QForm& a, const QForm& b) { return similarity_scalar(a, b).has_value(); }

/// Local isometry at every place of V (V cofinite in the primes of Q): equal
/// dimension, discriminants in the same global square class (a non-square
/// is a non-square at infinitely many primes) and equal Hasse invariants at
/// the places of V dividing 2 and the entries.
inline bool locally_equivalent_on(const ValuationSet& vs, const QForm& a, const QForm& b) {
  require(vs.kind == ValuationSet::Kind::AllPrimesExcept, ErrorCode::UnsupportedConfiguration,
          "local equivalence along " + to_string(vs) + " is not decided");
  if (a.dim() != b.dim()) return false;
  if (!square_class_equal(a.field, signed_discriminant(a), signed_discriminant(b))) return false;
  for (auto& p : detail::entry_primes({&a, &b}))
    if (!vs.excludes(p) && !locally_isometric_q(a, b, GlobalPlace{false, p, 0})) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Classification

struct StageRecord {
  int stage = 0;
  std::size_t member = 0;
  std::size_t pivot = 0;
  SymbolSum invariant;
};

struct MergeRecord {
  std::size_t a = 0, b = 0;  ///< cell pivots (catalog indices)
  Element mu;                ///< q_a = mu q_b
};

struct Classification {
  enum class Mode { Similarity, Fiber };

  Mode mode = Mode::Similarity;
  ValuationSet vset;
  int n = 0;
  int ell = 0;
  long long bound = 0;
  std::vector<std::string> ids;
  std::vector<Idele> witnesses;     ///< lambda^(i) (similarity mode)
  std::vector<long long> pic2;      ///< coset labels (similarity mode)
  std::vector<Element> normalizer;  ///< delta^(i): q~_i = delta^(i) q_i
  std::vector<StageRecord> trail;
  std::vector<std::vector<std::size_t>> cells;    ///< after stage ell
  std::vector<MergeRecord> merges;
  std::vector<std::vector<std::size_t>> classes;  ///< final partition, canonical order

  bool bound_ok() const { return static_cast<long long>(cells.size()) <= bound; }
};

struct SieveOptions {
  /// 0: lowest catalog index as pivot; otherwise a seeded random pivot per cell.
  std::uint64_t pivot_seed = 0;
};

namespace detail {

/// gamma_m of a difference known to lie in I^m; m >= 3 uses the signature over Q.
inline SymbolSum stage_invariant(const QForm& d, int m) {
  const FieldDesc& k = d.field;
  if (m <= 2) {
    require(in_fundamental_power(d, m), ErrorCode::InternalInvariant,
            "stage " + std::to_string(m) + ": difference is not in I^" + std::to_string(m));
    return gamma(d, m);
  }
  require(k.kind == FieldDesc::Kind::Rationals, ErrorCode::InvariantUndecided,
          "stage invariants of degree >= 3 over " + to_string(k));
  require(in_fundamental_power(d, 3), ErrorCode::InternalInvariant, "stage difference is not in I^3");
  long long sg = signature(d);
  long long unit = 1LL << m;
  require(sg % unit == 0, ErrorCode::InternalInvariant, "stage " + std::to_string(m) + ": signature not divisible by 2^m");
  if ((sg / unit) % 2 == 0) return zero_sum(k, m);
  return single(k, cup(k, std::vector<Element>(static_cast<std::size_t>(m), from_int(k, -1))));
}

inline bool same_class(const SymbolSum& a, const SymbolSum& b) {
  auto r = is_trivial(add(a, b));
  require(r.has_value(), ErrorCode::InvariantUndecided, "cannot compare stage invariants over " + to_string(a.field));
  return *r;
}

/// Refines cells through stages 1..ell with invariants of q~_j - q~_pivot.
inline void staged_refinement(Classification& c, const std::vector<QForm>& forms,
                              const std::vector<std::optional<long long>>& orders, const SieveOptions& opt) {
  std::mt19937_64 rng(opt.pivot_seed);
  for (int m = 1; m <= c.ell; ++m) {
    std::vector<std::vector<std::size_t>> next;
    for (auto& cell : c.cells) {
      std::size_t pivot = cell.front();
      if (opt.pivot_seed) pivot = cell[std::uniform_int_distribution<std::size_t>(0, cell.size() - 1)(rng)];
      std::vector<std::pair<SymbolSum, std::vector<std::size_t>>> groups;
      for (std::size_t j : cell) {
        SymbolSum inv = j == pivot ? zero_sum(forms[j].field, m)
                                   : stage_invariant(direct_sum(forms[j], negate(forms[pivot])), m);
        c.trail.push_back({m, j, pivot, inv});
        bool placed = false;
        for (auto& [key, members] : groups)
          if (same_class(key, inv)) {
            members.push_back(j);
            placed = true;
            break;
          }
        if (!placed) groups.push_back({inv, {j}});
      }
      if (orders[m - 1])
        require(static_cast<long long>(groups.size()) <= *orders[m - 1], ErrorCode::InternalInvariant,
                "stage " + std::to_string(m) + " produced more classes than the unramified group allows");
      for (auto& g : groups) next.push_back(std::move(g.second));
    }
    c.cells = std::move(next);
  }
  for (auto& cell : c.cells) std::sort(cell.begin(), cell.end());
  std::sort(c.cells.begin(), c.cells.end());
  // Arason-Pfister: 2n < 2^(ell+1), so differences in I^(ell+1) are hyperbolic.
  for (auto& cell : c.cells)
    for (std::size_t j : cell)
      require(witt_equivalent(forms[j], forms[cell.front()]), ErrorCode::InternalInvariant,
              "cell member not Witt equivalent to its pivot after stage ell");
}

inline std::size_t uf_find(std::vector<std::size_t>& p, std::size_t x) {
  while (p[x] != x) x = p[x] = p[p[x]];
  return x;
}

inline std::vector<std::vector<std::size_t>> sorted_partition(std::vector<std::vector<std::size_t>> parts) {
  for (auto& p : parts) std::sort(p.begin(), p.end());
  std::sort(parts.begin(), parts.end());
  return parts;
}

inline void check_catalog(const ValuationSet& vs, const std::vector<QForm>& catalog,
                          std::vector<std::string>& ids) {
  require(!catalog.empty(), ErrorCode::InvalidArgument, "empty catalog");
  if (ids.empty())
    for (std::size_t i = 0; i < catalog.size(); ++i) ids.push_back(std::to_string(i));
  require(ids.size() == catalog.size(), ErrorCode::InvalidArgument, "ids and catalog differ in length");
  for (auto& q : catalog) {
    require(q.field == vs.field, ErrorCode::FieldMismatch, "catalog form over the wrong field");
    require(q.dim() == catalog.front().dim(), ErrorCode::DimensionMismatch, "catalog dimensions differ");
  }
}

}  // namespace detail

inline Classification classify_similarity(const ValuationSet& vs, const std::vector<QForm>& catalog,
                                          std::vector<std::string> ids = {}, const SieveOptions& opt = {}) {
  detail::check_catalog(vs, catalog, ids);
  int n = catalog.front().dim();
  require(n >= 5, ErrorCode::InvalidArgument, "similarity classification needs n >= 5");
  require(vs.odd_residue_characteristic(), ErrorCode::UnsupportedConfiguration,
          "V contains places of residue characteristic 2");
  UnramifiedGroupTable table = unramified_table(vs, n);
  Classification c{Classification::Mode::Similarity, vs, n, table.ell, sieve_bound(vs, n), ids};
  const FieldDesc& k = vs.field;

  // (1) scaling ideles from per-place witnesses
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    ReductionReport rep = reduction_profile(vs, catalog[i], ids[i]);
    Idele lam{vs, {}};
    for (auto& r : rep.verdicts) {
      require(r.status != ReductionVerdict::Status::Refused, ErrorCode::UnsupportedConfiguration,
              "reduction refused at " + to_string(r.place, k.var) + ": " + r.detail);
      require(r.status != ReductionVerdict::Status::Bad, ErrorCode::BadReductionInCatalog,
              "form " + ids[i] + " has bad reduction at " + to_string(r.place, k.var));
      if (r.status == ReductionVerdict::Status::GoodAfterScaling) lam.set(r.place, *r.lambda);
    }
    c.witnesses.push_back(lam);
    c.pic2.push_back(pic2_coset(lam));
  }

  // (2) Pic/2 cosets, (3) normalization against the group pivot
  std::map<long long, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < catalog.size(); ++i) groups[c.pic2[i]].push_back(i);
  require(static_cast<long long>(groups.size()) <= table.d0, ErrorCode::InternalInvariant,
          "more Pic/2 cosets than |Pic(V)/2Pic(V)|");
  c.normalizer.assign(catalog.size(), from_int(k, 1));
  std::vector<QForm> normalized = catalog;
  for (auto& [coset, members] : groups) {
    std::size_t j0 = members.front();
    for (std::size_t j : members) {
      Divisor diff = idele_divisor(c.witnesses[j]) - idele_divisor(c.witnesses[j0]);
      if (pic(vs).structure == PicReport::Structure::InfiniteCyclic) {
        // same coset: even degree, absorbed by a square at the degree place
        long long deg = total_degree(diff);
        diff.add(Place::degree(), -deg);
      }
      c.normalizer[j] = principal_generator(diff);
      normalized[j] = scale(c.normalizer[j], catalog[j]);
    }
    c.cells.push_back(members);
  }

  // (4) staged refinement, (5) Arason-Pfister termination
  detail::staged_refinement(c, normalized, table.d, opt);

  // (6) merge cells whose forms are similar by a scalar outside the normalization
  std::vector<std::size_t> parent(c.cells.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t x = 0; x < c.cells.size(); ++x)
    for (std::size_t y = x + 1; y < c.cells.size(); ++y) {
      if (detail::uf_find(parent, x) == detail::uf_find(parent, y)) continue;
      std::size_t a = c.cells[x].front(), b = c.cells[y].front();
      if (auto mu = similarity_scalar(catalog[a], catalog[b])) {
        c.merges.push_back({a, b, *mu});
        parent[detail::uf_find(parent, y)] = detail::uf_find(parent, x);
      }
    }
  std::map<std::size_t, std::vector<std::size_t>> merged;
  for (std::size_t x = 0; x < c.cells.size(); ++x) {
    auto& dst = merged[detail::uf_find(parent, x)];
    dst.insert(dst.end(), c.cells[x].begin(), c.cells[x].end());
  }
  for (auto& [root, members] : merged) c.classes.push_back(members);
  c.classes = detail::sorted_partition(std::move(c.classes));
  return c;
}

inline Classification fiber_classify(const ValuationSet& vs, const QForm& base, const std::vector<QForm>& catalog,
                                     std::vector<std::string> ids = {}, const SieveOptions& opt = {}) {
  detail::check_catalog(vs, catalog, ids);
  require(base.field == vs.field, ErrorCode::FieldMismatch, "base form over the wrong field");
  int n = base.dim();
  UnramifiedGroupTable table = unramified_table(vs, n);
  Classification c{Classification::Mode::Fiber, vs, n, table.ell, fiber_bound(vs, n), ids};
  for (std::size_t i = 0; i < catalog.size(); ++i)
    require(locally_equivalent_on(vs, base, catalog[i]), ErrorCode::NotLocallyEquivalent,
            "form " + ids[i] + " is not locally equivalent to the base form along V");
  c.normalizer.assign(catalog.size(), from_int(vs.field, 1));
  std::vector<std::size_t> all(catalog.size());
  std::iota(all.begin(), all.end(), 0);
  c.cells.push_back(all);
  detail::staged_refinement(c, catalog, table.omega, opt);
  c.classes = c.cells;
  return c;
}

}  // namespace wittforge

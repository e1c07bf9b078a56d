// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include "oracles/oracles.hpp"
#include "wittforge/wittforge.hpp"

using namespace wittforge;

namespace {

const FieldDesc Q = FieldDesc::rationals();
const FieldDesc Qt = FieldDesc::function_field(0);
const ValuationSet odd = ValuationSet::all_primes_except({2});
using Status = ReductionVerdict::Status;

Element qt(const std::string& s) { return parse_element(Qt, s); }
Place at(const std::string& p) { return Place::irreducible(parse_qpoly(p)); }
QForm qf(const std::vector<long long>& v) { return make_form(Q, std::vector<Element>(v.begin(), v.end())); }

std::vector<Rational> rats(const QForm& q) {
  std::vector<Rational> out;
  for (auto& a : q.entries) out.push_back(a.as<Rational>());
  return out;
}
std::vector<Rational> rats(const std::vector<long long>& v) { return {v.begin(), v.end()}; }

std::vector<std::vector<long long>> multisets(const std::vector<long long>& vals, int n) {
  std::vector<std::vector<long long>> out;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    std::vector<long long> f;
    for (auto i : idx) f.push_back(vals[i]);
    out.push_back(f);
    int k = n - 1;
    while (k >= 0 && ++idx[k] == vals.size()) --k;
    if (k < 0) break;
    for (int j = k + 1; j < n; ++j) idx[j] = idx[k];
  }
  return out;
}

template <class Eq>
std::vector<std::vector<std::size_t>> partition_by(std::size_t n, Eq eq) {
  std::vector<std::vector<std::size_t>> parts;
  for (std::size_t i = 0; i < n; ++i) {
    bool placed = false;
    for (auto& p : parts)
      if (eq(p.front(), i)) {
        p.push_back(i);
        placed = true;
        break;
      }
    if (!placed) parts.push_back({i});
  }
  std::sort(parts.begin(), parts.end());
  return parts;
}

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

/// Random rational function that is a unit at v: ratio of small integer polynomials prime to v.
Element random_unit_qt(std::mt19937_64& rng, const Place& v) {
  std::uniform_int_distribution<int> c(-5, 5), deg(0, 2);
  while (true) {
    auto poly = [&] {
      std::vector<Rational> co;
      int d = deg(rng);
      for (int i = 0; i <= d; ++i) co.push_back(c(rng));
      return QPoly({}, co);
    };
    QPoly f = poly(), g = poly();
    if (f.is_zero() || g.is_zero()) continue;
    Element u = from_poly(f) / from_poly(g);
    if (valuation(Qt, v, u) == 0) return u;
  }
}

Element random_unit_q(std::mt19937_64& rng, long long p) {
  std::uniform_int_distribution<long long> d(-2000, 2000);
  while (true) {
    long long n = d(rng), m = d(rng);
    if (n == 0 || m == 0 || n % p == 0 || m % p == 0) continue;
    return Element(Rational(n) / m);
  }
}

// 1. residue identities
Outcome c1() {
  Outcome o;
  std::mt19937_64 rng(101);
  std::vector<std::pair<FieldDesc, Place>> places{{Q, Place::finite(3)}, {Q, Place::finite(5)}, {Q, Place::finite(7)},
                                                  {Qt, at("t")},         {Qt, at("t-1")},        {Qt, at("t^2+1")}};
  long long checks = 0;
  for (auto& [k, v] : places) {
    Element pi = uniformizer(k, v);
    for (int it = 0; it < 1000; ++it) {
      Element u = k == Q ? random_unit_q(rng, static_cast<long long>(v.prime)) : random_unit_qt(rng, v);
      Element ubar = residue_image(k, v, u);
      auto a = residue_split(k, v, make_form(k, {u}));
      auto b = residue_split(k, v, make_form(k, {pi * u}));
      if (a.first.entries != std::vector<Element>{ubar}) o.fail("d1<u> at " + to_string(v) + " for " + to_string(u));
      if (!a.second.entries.empty()) o.fail("d2<u> nonzero at " + to_string(v));
      if (!b.first.entries.empty()) o.fail("d1<pi u> nonzero at " + to_string(v));
      if (b.second.entries != std::vector<Element>{ubar}) o.fail("d2<pi u> at " + to_string(v));
      checks += 4;
    }
  }
  if (o.ok) o.detail = std::to_string(checks) + " identities";
  return o;
}

QForm random_pfister_sum(std::mt19937_64& rng, const FieldDesc& k, int d, int terms, const std::vector<Element>& pool,
                         std::vector<PfisterSpec>* pres = nullptr) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  QForm out{k, {}};
  for (int t = 0; t < terms; ++t) {
    std::vector<Element> slots;
    for (int i = 0; i < d; ++i) slots.push_back(pool[pick(rng)]);
    QForm p = pfister(k, {slots});
    out = direct_sum(out, t % 2 ? negate(p) : p);
    if (pres) pres->push_back({slots});
  }
  return out;
}

// 2. [q] - [lambda q] in I^{d+1}
Outcome c2() {
  Outcome o;
  std::mt19937_64 rng(202);
  std::vector<Element> pool{-6, -5, -3, -2, -1, 2, 3, 5, 6, 7, 10, 11, Rational(3, 7)};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int it = 0; it < 200; ++it) {
    int d = 1 + it % 2;
    QForm q = random_pfister_sum(rng, Q, d, 1 + it % 3, pool);
    Element lambda = pool[pick(rng)];
    if (!is_trivial_or_throw(add(gamma(scale(lambda, q), d), gamma(q, d)))) o.fail("gamma shift at " + to_string(q));
    if (!in_fundamental_power(lemma_shift_delta(q, lambda), d + 1)) o.fail("shift not in I^(d+1): " + to_string(q));
  }
  if (o.ok) o.detail = "200 pairs";
  return o;
}

// 3. unit-slot Pfister sums are unramified
Outcome c3() {
  Outcome o;
  std::mt19937_64 rng(303);
  auto check = [&](const FieldDesc& k, const Place& v, const std::vector<Element>& pool, int d) {
    std::vector<PfisterSpec> pres;
    QForm q = random_pfister_sum(rng, k, d, 1 + static_cast<int>(rng() % 3), pool, &pres);
    auto split = residue_split(k, v, q);
    if (!split.second.entries.empty() && !is_hyperbolic(split.second))
      o.fail("second residue of " + to_string(q) + " at " + to_string(v));
    SymbolSum g = k == Q ? gamma(q, d) : gamma(q, d, d == 3 ? &pres : nullptr);
    if (!is_zero_sum(symbol_residue(k, v, g))) o.fail("residue of gamma for " + to_string(q) + " at " + to_string(v));
  };
  std::vector<Element> units_q{-1, 2, -2, 3, -3, 6};
  std::vector<Element> units_t{qt("-1"), qt("2"), qt("3"), qt("1+t"), qt("t-1"), qt("t^2+3"), qt("-(t+2)")};
  for (int it = 0; it < 200; ++it) {
    int d = 1 + it % 3;
    if (it % 2 == 0) {
      long long p = std::vector<long long>{5, 7, 11}[it % 3];
      check(Q, Place::finite(p), units_q, d);
    } else {
      check(Qt, at("t"), units_t, d);
    }
  }
  if (o.ok) o.detail = "200 sums";
  return o;
}

// 4. Arason-Pfister desk check
Outcome c4() {
  Outcome o;
  auto slots = multisets({-3, -2, -1, 1, 2, 3}, 3);
  std::vector<QForm> pf;
  for (auto& s : slots) pf.push_back(pfister(Q, {std::vector<Element>(s.begin(), s.end())}));
  long long count = 0;
  std::map<int, long long> hist;
  for (std::size_t i = 0; i < pf.size(); ++i)
    for (std::size_t j = i; j < pf.size(); ++j)
      for (bool neg : {false, true}) {
        QForm q = direct_sum(pf[i], neg ? negate(pf[j]) : pf[j]);
        int a = anisotropic_dimension(q);
        ++hist[a];
        ++count;
        if (!(a == 0 || (a >= 8 && a <= 16))) o.fail("anisotropic dimension " + std::to_string(a) + " for " + to_string(q));
      }
  if (o.ok) {
    o.detail = std::to_string(count) + " sums, dims";
    for (auto& [a, n] : hist) o.detail += " " + std::to_string(a) + ":" + std::to_string(n);
  }
  return o;
}

// 5. exhaustive similarity classification
Outcome c5() {
  Outcome o;
  auto forms = multisets({-2, -1, 1, 2}, 5);
  std::vector<QForm> cat;
  for (auto& f : forms) cat.push_back(qf(f));
  auto c = classify_similarity(odd, cat);
  // odd dimension: the similarity factor is the discriminant ratio, so {±1,±2} is exhaustive
  auto expect = partition_by(forms.size(), [&](std::size_t a, std::size_t b) {
    return oracle::similar(rats(forms[a]), rats(forms[b]), {-2, -1, 1, 2});
  });
  if (c.classes != expect) o.fail("partition differs from the pairwise oracle");
  if (static_cast<long long>(c.classes.size()) > c.bound || c.bound != 16) o.fail("bound violated");
  if (o.ok)
    o.detail = std::to_string(forms.size()) + " forms, " + std::to_string(c.classes.size()) + " classes, " +
               std::to_string(c.cells.size()) + " cells, bound " + std::to_string(c.bound);
  return o;
}

// 6. fiber bound on a locally equivalent catalog
Outcome c6() {
  Outcome o;
  std::vector<QForm> cat;
  std::vector<std::vector<long long>> kept;
  for (auto& f : multisets({-2, -1, 1, 2}, 5)) {
    long long prod = 1;
    for (auto x : f) prod *= x;
    if (prod == 1 || prod == 4 || prod == 16) {
      cat.push_back(qf(f));
      kept.push_back(f);
    }
  }
  QForm base = qf({1, 1, 1, 1, 1});
  auto c = fiber_classify(odd, base, cat);
  auto expect = partition_by(kept.size(), [&](std::size_t a, std::size_t b) {
    auto places = oracle::relevant_places(rats(kept[a]));
    for (long long p : oracle::relevant_places(rats(kept[b]))) places.push_back(p);
    return oracle::invariants(rats(kept[a]), places) == oracle::invariants(rats(kept[b]), places);
  });
  long long bound = fiber_bound(odd, 5);
  if (c.classes != expect) o.fail("partition differs from the invariant oracle");
  if (static_cast<long long>(c.classes.size()) > bound) o.fail("fiber bound violated");
  if (o.ok)
    o.detail = std::to_string(kept.size()) + " forms, " + std::to_string(c.classes.size()) + " classes, bound " +
               std::to_string(bound);
  return o;
}

std::vector<std::vector<long long>> hermitian_catalog() {
  std::vector<long long> vals{-5, -2, -1, 1, 2, 5};
  std::vector<std::vector<long long>> out;
  for (int n = 1; n <= 2; ++n)
    for (auto& m : multisets(vals, n)) out.push_back(m);
  return out;
}

// 7. Jacobson transfer
Outcome c7() {
  Outcome o;
  auto l = QuadExt::make(Q, Element(-1));
  auto cat = hermitian_catalog();
  long long pairs = 0, equivalent = 0;
  for (auto& a : cat)
    for (auto& b : cat) {
      if (a.size() != b.size()) continue;
      ++pairs;
      bool got = hermitian_equivalent(make_hermitian(l, {a.begin(), a.end()}), make_hermitian(l, {b.begin(), b.end()}));
      bool brute = false;
      for (long long bound : {4, 8}) {
        brute = oracle::unitary_congruent(rats(a), rats(b), bound) || oracle::unitary_congruent(rats(b), rats(a), bound);
        if (brute || !got) break;
      }
      equivalent += got;
      if (got != brute) {
        std::string s = "<";
        for (auto x : a) s += std::to_string(x) + ",";
        s += "> vs <";
        for (auto x : b) s += std::to_string(x) + ",";
        o.fail(s + "> library " + (got ? "equivalent" : "inequivalent"));
      }
    }
  if (o.ok) o.detail = std::to_string(pairs) + " pairs, " + std::to_string(equivalent) + " equivalent";
  return o;
}

Status spin_residue_oracle(const std::vector<long long>& e, long long p) {
  std::vector<long long> r1, r2;
  for (long long x : e) {
    int k = oracle::vp(x, p);
    long long u = x;
    for (int i = 0; i < k; ++i) u /= p;
    (k % 2 ? r2 : r1).push_back(oracle::mod(u, p));
  }
  auto hyperbolic = [&](const std::vector<long long>& r) {
    if (r.size() % 2) return false;
    if (r.empty()) return true;
    long long disc = r.size() / 2 % 2 ? p - 1 : 1;
    for (long long x : r) disc = disc * x % p;
    return oracle::fp_square(disc, p);
  };
  if (hyperbolic(r2)) return Status::GoodAsIs;
  if (hyperbolic(r1)) return Status::GoodAfterScaling;
  return Status::Bad;
}

// 8. SU reduction case split
Outcome c8() {
  Outcome o;
  const long long d = -1;
  auto l = QuadExt::make(Q, Element(d));
  long long checks = 0;
  for (auto& a : hermitian_catalog()) {
    auto h = make_hermitian(l, {a.begin(), a.end()});
    std::vector<long long> tr;
    for (long long x : a) {
      tr.push_back(x);
      tr.push_back(-d * x);
    }
    for (long long p : {3, 5, 7, 13}) {
      auto su = su_good_reduction(Q, Place::finite(p), l, h);
      bool split = oracle::euler(d, p) == 1;
      Status expect = split ? Status::GoodAsIs : spin_residue_oracle(tr, p);
      if (su.status != expect) o.fail("su verdict at " + std::to_string(p));
      if (su.good() && !spin_good_reduction(Q, Place::finite(p), transfer(h)).good()) o.fail("su good but spin bad");
      ++checks;
    }
  }
  // ramified case
  auto r = QuadExt::make(Q, Element(3));
  if (su_good_reduction(Q, Place::finite(3), r, make_hermitian(r, {Element(1)})).status != Status::Bad)
    o.fail("ramified extension not bad");
  if (o.ok) o.detail = std::to_string(checks) + " verdicts";
  return o;
}

// 9. G2 residue formula
Outcome c9() {
  Outcome o;
  std::mt19937_64 rng(909);
  Place vt = at("t");
  for (int it = 0; it < 100; ++it) {
    Element a = random_unit_qt(rng, vt), b = random_unit_qt(rng, vt);
    auto r = residue_quaternion(Qt, vt, OctonionDesc::make(Qt, a, b, qt("t")));
    QuaternionDesc expect{Q, false, residue_image(Qt, vt, a), residue_image(Qt, vt, b)};
    if (quaternion_isomorphic(r, expect) != std::optional<bool>(true)) o.fail("residue of (" + to_string(a) + ")");
    Element c = random_unit_qt(rng, vt);
    if (!residue_quaternion(Qt, vt, OctonionDesc::make(Qt, a, b, c)).split_tag) o.fail("unit triple not split");
  }
  auto g = genus_obstruction({OctonionDesc::make(Qt, qt("-1"), qt("-1"), qt("t")),
                              OctonionDesc::make(Qt, qt("2"), qt("3"), qt("t"))},
                             ValuationSet::geometric_affine(Qt));
  if (g.fibers.size() != 2) o.fail("genus obstruction gave " + std::to_string(g.fibers.size()) + " fibers");
  if (o.ok) o.detail = "100 residues, 2 fibers";
  return o;
}

// 10. octonion algebras over Q
Outcome c10() {
  Outcome o;
  std::vector<long long> vals{-3, -2, -1, 1, 2, 3};
  std::vector<OctonionDesc> cat;
  for (long long a : vals)
    for (long long b : vals)
      for (long long c : vals) cat.push_back(OctonionDesc::make(Q, a, b, c));
  auto got = partition_by(cat.size(), [&](std::size_t i, std::size_t j) { return octonion_isomorphic(cat[i], cat[j]); });
  auto expect = partition_by(cat.size(), [&](std::size_t i, std::size_t j) {
    return oracle::isometric(rats(cat[i].norm_form()), rats(cat[j].norm_form()));
  });
  if (got.size() != 2) o.fail(std::to_string(got.size()) + " classes");
  if (got != expect) o.fail("partition differs from the norm-form oracle");
  if (o.ok) o.detail = std::to_string(cat.size()) + " triples, 2 classes";
  return o;
}

// 11. spinor and reduced norms
Outcome c11() {
  Outcome o;
  std::mt19937_64 rng(1111);
  std::uniform_int_distribution<long long> d(-3000, 3000);
  PfisterSpec spec{{Element(-1), Element(-1)}};
  for (int it = 0; it < 100; ++it) {
    long long n = d(rng), m = d(rng);
    if (n == 0 || m == 0) {
      --it;
      continue;
    }
    Rational x = Rational(n) / m;
    bool positive = x > 0;
    bool four = oracle::rational_sum_of_four_squares(x);
    if (four != positive) o.fail("oracle disagrees with positivity");
    if (spinor_norm_member(Q, spec, Element(x)) != positive) o.fail("spinor norm at " + to_string(Element(x)));
    if (reduced_norm_member(Element(-1), Element(-1), Element(x)) != positive) o.fail("nrd at " + to_string(Element(x)));
  }
  if (o.ok) o.detail = "100 rationals";
  return o;
}

// 12. ideles and divisors
Outcome c12() {
  Outcome o;
  std::mt19937_64 rng(1212);
  auto proj = ValuationSet::geometric_projective(Qt);
  struct Setting {
    ValuationSet vs;
    std::vector<Place> places;
    std::vector<Element> units, principal;
  };
  std::vector<Setting> settings{
      {odd, enumerate_places(odd, 40), {-1, 2, -2, 8, Rational(1, 2)}, {3, 5, Rational(7, 3), -45, 2}},
      {proj, enumerate_places(proj, 1), {qt("-1"), qt("3"), qt("5/2")}, {qt("t"), qt("t^2+1"), qt("1/(t-1)"), qt("t^3-2")}}};
  long long count = 0;
  for (auto& s : settings) {
    const FieldDesc& k = s.vs.field;
    std::uniform_int_distribution<std::size_t> pick(0, s.places.size() - 1), pu(0, s.units.size() - 1),
        pp(0, s.principal.size() - 1);
    std::uniform_int_distribution<int> mult(-3, 3);
    for (int it = 0; it < 250; ++it) {
      ++count;
      // random idele with components pi^m u
      Idele x{s.vs, {}};
      Divisor expect{s.vs, {}};
      for (int j = 0; j < 3; ++j) {
        Place v = s.places[pick(rng)];
        if (x.comp.count(v)) continue;
        int m = mult(rng);
        Element c = s.units[pu(rng)];
        Element pi = uniformizer(k, v);
        for (int e = 0; e < std::abs(m); ++e) c = m > 0 ? c * pi : c / pi;
        x.set(v, c);
        expect.add(v, m);
      }
      if (!(idele_divisor(x) == expect)) o.fail("nu(x) mismatch");
      // surjectivity: every enumerated divisor is hit
      if (!(idele_divisor(idele_of_divisor(expect)) == expect)) o.fail("divisor not in the image of nu");
      // kernel: exactly the integral ideles
      Idele unit{s.vs, {}};
      unit.set(s.places[pick(rng)], s.units[pu(rng)]);
      if (!unit.comp.empty() || !idele_divisor(unit).is_zero()) o.fail("integral idele outside kernel");
      if (idele_divisor(x).is_zero() != x.comp.empty()) o.fail("kernel is not the integral ideles");
      // pic2 coset invariance under integral, principal and square factors
      long long c = pic2_coset(x);
      Divisor sq{s.vs, {}};
      sq.add(s.places[pick(rng)], 2 * mult(rng));
      Idele y = x * unit * principal_idele(s.vs, s.principal[pp(rng)]) * idele_of_divisor(sq);
      if (pic2_coset(y) != c) o.fail("pic2 coset not invariant");
    }
  }
  if (o.ok) o.detail = std::to_string(count) + " ideles";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::function<Outcome()> run;
    double limit;
  };
  std::vector<Criterion> all{{1, c1, 10},  {2, c2, 30},  {3, c3, 30},   {4, c4, 300},  {5, c5, 600},  {6, c6, 120},
                             {7, c7, 600}, {8, c8, 60},  {9, c9, 30},   {10, c10, 60}, {11, c11, 30}, {12, c12, 60}};
  int failures = 0;
  for (auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && secs > c.limit) o.fail("over time limit");
    if (!o.ok) ++failures;
    std::printf("criterion %2d: %s  %.2fs  %s\n", c.id, o.ok ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

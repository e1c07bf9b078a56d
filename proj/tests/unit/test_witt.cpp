#include <gtest/gtest.h>

#include <random>

#include "oracles/oracles.hpp"
#include "unit/helpers.hpp"

using namespace th;

namespace {

std::vector<Element> els(const std::vector<long long>& v) { return {v.begin(), v.end()}; }

/// Invariant tuple of the hyperbolic form of dimension n.
oracle::InvariantTuple hyperbolic_tuple(int n, const std::vector<long long>& places) {
  std::vector<Rational> h;
  for (int i = 0; i < n / 2; ++i) {
    h.push_back(1);
    h.push_back(-1);
  }
  return oracle::invariants(h, places);
}

/// I^d membership over Q from brute-force invariants (d <= 3).
bool oracle_in_power(const std::vector<Rational>& q, int d) {
  int n = static_cast<int>(q.size());
  if (n % 2) return false;
  if (d == 1) return true;
  auto ps = oracle::relevant_places(q);
  auto t = oracle::invariants(q, ps), h = hyperbolic_tuple(n, ps);
  if (t.disc != h.disc) return false;
  if (d == 2) return true;
  return t.hasse == h.hasse;
}

bool oracle_hyperbolic(const std::vector<Rational>& q) {
  if (q.size() % 2) return false;
  auto ps = oracle::relevant_places(q);
  return oracle::invariants(q, ps) == hyperbolic_tuple(static_cast<int>(q.size()), ps);
}

std::vector<Rational> concat_neg(const QForm& a, const QForm& b) {
  auto out = rats(a);
  for (auto& x : rats(b)) out.push_back(-x);
  return out;
}

QForm random_pfister_sum(std::mt19937_64& rng, int d, int terms, const std::vector<long long>& pool) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  QForm out{Q, {}};
  for (int t = 0; t < terms; ++t) {
    std::vector<Element> slots;
    for (int i = 0; i < d; ++i) slots.push_back(Element(pool[pick(rng)]));
    QForm p = pfister(Q, {slots});
    out = direct_sum(out, t % 2 ? negate(p) : p);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Forms

TEST(Witt, PfisterExpansions) {
  EXPECT_EQ(pfister(Q, {{Element(7)}}).entries, els({1, -7}));
  EXPECT_EQ(pfister(Q, {{Element(-1), Element(-1)}}).entries, els({1, 1, 1, 1}));
  EXPECT_EQ(pfister(Q, {{Element(2), Element(3)}}).entries, els({1, -2, -3, 6}));
  EXPECT_EQ(pfister(Q, {els({2, 3, 5})}).dim(), 8);
  EXPECT_THROW(pfister(Q, {els({2, 0})}), Error);
}

TEST(Witt, FormOperations) {
  EXPECT_EQ(scale(Element(2), qf({1, 3})).entries, els({2, 6}));
  EXPECT_EQ(direct_sum(qf({1}), qf({-1})).entries, els({1, -1}));
  EXPECT_EQ(tensor(qf({1, -2}), qf({1, -3})).entries, els({1, -3, -2, 6}));
  EXPECT_THROW(scale(Element(0), qf({1})), Error);
  EXPECT_THROW(direct_sum(qf({1}), make_form(Qt, {qt("t")})), Error);
  EXPECT_THROW(make_form(Q, {Element(1), Element(0)}), Error);
}

TEST(Witt, ResidueSplitExamples) {
  FieldDesc F3 = FieldDesc::prime_field(3);
  auto s = residue_split(Q, Place::finite(3), qf({3, 6, 1}));
  EXPECT_EQ(s.first.entries, std::vector<Element>{from_int(F3, 1)});
  EXPECT_EQ(s.second.entries, (std::vector<Element>{from_int(F3, 1), from_int(F3, 2)}));

  auto f = residue_split(Q, Place::finite(5), qf({50}));
  EXPECT_EQ(f.first.entries, std::vector<Element>{from_int(FieldDesc::prime_field(5), 2)});
  EXPECT_TRUE(f.second.entries.empty());

  auto g = residue_split(Qt, at("t"), make_form(Qt, {qt("t"), qt("1+t")}));
  EXPECT_EQ(g.first.entries, std::vector<Element>{Element(1)});
  EXPECT_EQ(g.second.entries, std::vector<Element>{Element(1)});

  EXPECT_THROW(residue_split(Q, Place::finite(2), qf({3})), Error);
}

TEST(Witt, ResidueSplitDimensionsAdd) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long long> d(-200, 200);
  for (int it = 0; it < 100; ++it) {
    std::vector<Element> e;
    for (int i = 0; i < 5; ++i) {
      long long x = d(rng);
      e.push_back(Element(x ? x : 1));
    }
    auto s = residue_split(Q, Place::finite(7), qf(e));
    EXPECT_EQ(s.first.dim() + s.second.dim(), 5);
  }
}

TEST(Witt, ResidueIdentitiesOnGenerators) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long long> d(-500, 500);
  for (long long p : {3, 5, 7}) {
    Place v = Place::finite(p);
    for (int it = 0; it < 100; ++it) {
      long long n = d(rng), m = d(rng);
      if (n == 0 || m == 0 || n % p == 0 || m % p == 0) continue;
      Element u = Rational(n) / m;
      Element ubar = residue_image(Q, v, u);
      auto a = residue_split(Q, v, qf({u}));
      auto b = residue_split(Q, v, qf({u * Element(p)}));
      EXPECT_EQ(a.first.entries, std::vector<Element>{ubar});
      EXPECT_TRUE(a.second.entries.empty());
      EXPECT_TRUE(b.first.entries.empty());
      EXPECT_EQ(b.second.entries, std::vector<Element>{ubar});
    }
  }
}

TEST(Witt, DeciderExamples) {
  EXPECT_TRUE(is_hyperbolic(qf({1, -1, 2, -2})));
  EXPECT_EQ(anisotropic_dimension(qf({1, 1, 1, 1})), 4);
  EXPECT_TRUE(witt_equivalent(qf({1, 1}), qf({2, 2})));
  EXPECT_TRUE(oracle::isometric(rats({1, 1}), rats({2, 2})));
  EXPECT_FALSE(is_isotropic(qf({1, 1, -3})));
  EXPECT_FALSE(oracle::isometric(rats({1, 1}), rats({3, 3})));
}

TEST(Witt, EquivalenceMatchesInvariantOracleSmallForms) {
  std::vector<long long> vals{-3, -2, -1, 1, 2, 3};
  std::vector<std::vector<long long>> forms;
  for (long long a : vals)
    for (long long b : vals)
      if (a <= b) forms.push_back({a, b});
  for (long long a : vals)
    for (long long b : vals)
      for (long long c : vals)
        if (a <= b && b <= c) forms.push_back({a, b, c});
  int checked = 0;
  for (auto& x : forms)
    for (auto& y : forms) {
      QForm qx = qf(els(x)), qy = qf(els(y));
      bool expect = oracle_hyperbolic(concat_neg(qx, qy));
      ASSERT_EQ(witt_equivalent(qx, qy), expect) << to_string(qx) << " vs " << to_string(qy);
      if (x.size() == y.size()) EXPECT_EQ(expect, oracle::isometric(rats(x), rats(y)));
      ++checked;
    }
  EXPECT_GT(checked, 3000);
}

TEST(Witt, TernaryIsotropyMatchesPointSearch) {
  std::vector<long long> vals{-6, -5, -3, -2, -1, 1, 2, 3, 5, 6};
  auto has_zero = [](long long a, long long b, long long c) {
    for (long long x = 0; x <= 30; ++x)
      for (long long y = 0; y <= 30; ++y)
        for (long long z = 0; z <= 30; ++z)
          if ((x || y || z) && a * x * x + b * y * y + c * z * z == 0) return true;
    return false;
  };
  for (long long a : vals)
    for (long long b : vals)
      for (long long c : vals) {
        if (!(a <= b && b <= c)) continue;
        EXPECT_EQ(is_isotropic(qf(els({a, b, c}))), has_zero(a, b, c)) << a << "," << b << "," << c;
      }
}

TEST(Witt, FundamentalPowerMembership) {
  EXPECT_TRUE(in_fundamental_power(qf({1, -1}), 2));
  EXPECT_TRUE(in_fundamental_power(pfister(Q, {els({2, 3})}), 2));
  EXPECT_FALSE(in_fundamental_power(qf({1, 3}), 2));
  EXPECT_THROW(in_fundamental_power(qf({1, -1}), 4), Error);

  std::mt19937_64 rng(17);
  std::vector<long long> pool{-10, -7, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int it = 0; it < 120; ++it) {
    int n = 2 + 2 * static_cast<int>(it % 3);
    std::vector<long long> e;
    for (int i = 0; i < n; ++i) e.push_back(pool[pick(rng)]);
    QForm q = qf(els(e));
    for (int d = 1; d <= 3; ++d) EXPECT_EQ(in_fundamental_power(q, d), oracle_in_power(rats(q), d)) << to_string(q) << " d=" << d;
  }
}

TEST(Witt, LemmaShiftExamples) {
  QForm s = lemma_shift_delta(qf({1, -1}), Element(5));
  EXPECT_EQ(s.entries, els({1, -1, -5, 5}));
  EXPECT_TRUE(is_hyperbolic(s));
  QForm t = lemma_shift_delta(qf({1, 1}), Element(2));
  EXPECT_EQ(t.entries, els({1, 1, -2, -2}));
  EXPECT_TRUE(in_fundamental_power(t, 2));
  EXPECT_TRUE(oracle_in_power(rats(t), 2));
  QForm u = lemma_shift_delta(pfister(Q, {els({-1, -1})}), Element(-1));
  EXPECT_EQ(u.dim(), 8);
  EXPECT_TRUE(in_fundamental_power(u, 3));
  EXPECT_TRUE(oracle_in_power(rats(u), 3));
  EXPECT_THROW(lemma_shift_delta(qf({1}), Element(0)), Error);
}

TEST(Witt, ArasonPfisterFloor) {
  EXPECT_EQ(arason_pfister_floor(5), 16);
  EXPECT_EQ(arason_pfister_floor(8), 32);
  EXPECT_EQ(arason_pfister_floor(4), 16);
  for (long long n = 1; n < 200; ++n) EXPECT_GT(arason_pfister_floor(n), 2 * n);
}

TEST(Witt, DiagonalizeGram) {
  std::vector<std::vector<Element>> g{{Element(0), Element(1)}, {Element(1), Element(0)}};
  EXPECT_TRUE(is_hyperbolic(diagonalize(Q, g)));
  std::vector<std::vector<Element>> h{{Element(2), Element(1)}, {Element(1), Element(2)}};
  QForm d = diagonalize(Q, h);
  EXPECT_TRUE(witt_equivalent(d, qf({2, Rational(3, 2)})));
  std::vector<std::vector<Element>> bad{{Element(1), Element(2)}, {Element(3), Element(1)}};
  EXPECT_THROW(diagonalize(Q, bad), Error);
}

// ---------------------------------------------------------------------------
// Symbols

TEST(Symbols, CupAndAdd) {
  SymbolSum a = single(Q, cup(Q, els({2, 3})));
  EXPECT_TRUE(is_zero_sum(add(a, a)));
  EXPECT_EQ(is_trivial(single(Q, cup(Q, els({4, 7})))), std::optional<bool>(true));
  EXPECT_EQ(single(Q, cup(Q, els({2, 3}))).symbols, single(Q, cup(Q, els({3, 2}))).symbols);
  EXPECT_EQ(single(Q, cup(Q, {Element(8), Element(Rational(3, 4))})).symbols, a.symbols);
  EXPECT_THROW(cup(Q, els({2, 0})), Error);
  EXPECT_THROW(add(a, single(Q, cup(Q, els({2})))), Error);
  EXPECT_THROW(add(a, single(Qt, cup(Qt, els({2, 3})))), Error);
}

TEST(Symbols, TrivialityExamples) {
  EXPECT_EQ(is_trivial(single(Q, cup(Q, els({-1, -1})))), std::optional<bool>(false));
  EXPECT_EQ(oracle::hilbert(-1, -1, 2), -1);
  FieldDesc F5 = FieldDesc::prime_field(5);
  EXPECT_EQ(is_trivial(single(F5, cup(F5, {from_int(F5, -1), from_int(F5, -1)}))), std::optional<bool>(true));
  EXPECT_EQ(is_trivial(single(Q, cup(Q, els({-1, -1, -1})))), std::optional<bool>(false));
  EXPECT_EQ(is_trivial(single(Q, cup(Q, els({2, 3})))), std::optional<bool>(false));
  EXPECT_EQ(is_trivial(single(Q, cup(Q, els({2, -1})))), std::optional<bool>(true));
}

TEST(Symbols, DegreeTwoTrivialityMatchesHilbertOracle) {
  std::vector<long long> vals{-15, -7, -6, -5, -3, -2, -1, 2, 3, 5, 6, 7, 10, 15};
  for (long long a : vals)
    for (long long b : vals) {
      bool split = true;
      for (long long p : oracle::relevant_places(rats({a, b}))) split = split && oracle::hilbert(a, b, p) == 1;
      EXPECT_EQ(is_trivial_or_throw(single(Q, cup(Q, els({a, b})))), split) << a << "," << b;
    }
}

TEST(Symbols, ResidueExamples) {
  Place vt = at("t");
  auto r = symbol_residue(Qt, vt, single(Qt, cup(Qt, {qt("2"), qt("3"), qt("t")})));
  EXPECT_TRUE(same_class(r, single(Q, cup(Q, els({2, 3})))));
  EXPECT_FALSE(is_trivial_or_throw(r));
  auto u = symbol_residue(Qt, vt, single(Qt, cup(Qt, {qt("2"), qt("3"), qt("1+t")})));
  EXPECT_TRUE(is_zero_sum(u));
  FieldDesc F3 = FieldDesc::prime_field(3);
  auto w = symbol_residue(Q, Place::finite(3), single(Q, cup(Q, els({3, 2}))));
  EXPECT_EQ(w.field, F3);
  EXPECT_EQ(w.degree, 1);
  EXPECT_EQ(is_trivial(w), std::optional<bool>(oracle::fp_square(2, 3)));
  EXPECT_THROW(symbol_residue(Q, Place::finite(2), single(Q, cup(Q, els({2, 3})))), Error);
}

TEST(Symbols, GammaOnPfisterFormsIsTheCup) {
  std::vector<long long> vals{-5, -3, -2, -1, 1, 2, 3, 5};
  for (int d = 1; d <= 3; ++d) {
    std::vector<std::size_t> idx(d, 0);
    while (true) {
      std::vector<Element> slots;
      for (auto i : idx) slots.push_back(Element(vals[i]));
      QForm p = pfister(Q, {slots});
      EXPECT_TRUE(same_class(gamma(p, d), single(Q, cup(Q, slots)))) << to_string(p);
      int k = d - 1;
      while (k >= 0 && ++idx[k] == vals.size()) --k;
      if (k < 0) break;
      for (int j = k + 1; j < d; ++j) idx[j] = idx[k];
    }
  }
}

TEST(Symbols, GammaExamples) {
  EXPECT_TRUE(is_zero_sum(gamma(qf({1, -1}), 1)));
  QForm p = pfister(Q, {els({-1, -1, -1})});
  EXPECT_EQ(signature(p), 8);
  SymbolSum g = gamma(p, 3);
  EXPECT_FALSE(is_trivial_or_throw(g));
  EXPECT_TRUE(same_class(g, single(Q, cup(Q, els({-1, -1, -1})))));
  EXPECT_THROW(gamma(qf({1, 3}), 2), Error);
  EXPECT_THROW(gamma(qf({1, -1}), 4), Error);
  QForm pt = pfister(Qt, {{qt("t"), qt("2"), qt("3")}});
  EXPECT_THROW(gamma(pt, 3), Error);
  std::vector<PfisterSpec> pres{{{qt("t"), qt("2"), qt("3")}}};
  EXPECT_EQ(gamma(pt, 3, &pres).symbols.size(), 1u);
}

TEST(Symbols, ArasonSignatureRuleAgreesWithPresentation) {
  std::mt19937_64 rng(23);
  std::vector<long long> pool{-7, -5, -3, -2, -1, 1, 2, 3, 5, 7};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> terms(1, 4);
  for (int it = 0; it < 50; ++it) {
    int n = terms(rng);
    QForm q{Q, {}};
    std::vector<PfisterSpec> pres;
    for (int t = 0; t < n; ++t) {
      std::vector<Element> slots;
      for (int i = 0; i < 3; ++i) slots.push_back(Element(pool[pick(rng)]));
      // -<<a,b,c>> and <<a,b,c>> have the same e_3 class.
      q = direct_sum(q, t % 2 ? negate(pfister(Q, {slots})) : pfister(Q, {slots}));
      pres.push_back({slots});
    }
    SymbolSum by_signature = gamma(q, 3), by_presentation = gamma(q, 3, &pres);
    EXPECT_TRUE(same_class(by_signature, by_presentation)) << to_string(q);
  }
}

TEST(Symbols, GammaInvariantUnderShift) {
  std::mt19937_64 rng(29);
  std::vector<long long> pool{-6, -5, -3, -2, -1, 2, 3, 5, 6, 7};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int it = 0; it < 60; ++it) {
    int d = 1 + it % 2;
    QForm q = random_pfister_sum(rng, d, 1 + it % 3, pool);
    Element lambda(pool[pick(rng)]);
    EXPECT_TRUE(same_class(gamma(scale(lambda, q), d), gamma(q, d))) << to_string(q);
    EXPECT_TRUE(in_fundamental_power(lemma_shift_delta(q, lambda), d + 1));
  }
}

TEST(Symbols, UnitPfisterClassesAreUnramified) {
  std::mt19937_64 rng(31);
  std::vector<std::string> units{"2", "3", "-1", "5", "1+t", "t-1", "t^2+3", "-(t+2)", "7(t^2+1)"};
  std::uniform_int_distribution<std::size_t> pick(0, units.size() - 1);
  for (int it = 0; it < 40; ++it) {
    int d = 1 + it % 3;
    std::vector<Element> slots;
    for (int i = 0; i < d; ++i) slots.push_back(qt(units[pick(rng)]));
    auto r = symbol_residue(Qt, at("t"), single(Qt, cup(Qt, slots)));
    EXPECT_TRUE(is_zero_sum(r));
    auto split = residue_split(Qt, at("t"), pfister(Qt, {slots}));
    EXPECT_TRUE(split.second.entries.empty());
  }
}

TEST(Symbols, ResidueCupCompatibility) {
  std::mt19937_64 rng(37);
  std::vector<long long> units{-7, -5, -3, -2, -1, 2, 3, 5, 6, 7};
  std::uniform_int_distribution<std::size_t> pick(0, units.size() - 1);
  Place vt = at("t");
  for (int it = 0; it < 40; ++it) {
    long long u = units[pick(rng)], b = units[pick(rng)], c = units[pick(rng)];
    SymbolSum s = single(Qt, cup(Qt, {Element(b), qt(std::to_string(c) + "*t")}));
    SymbolSum lhs = symbol_residue(Qt, vt, single(Qt, cup(Qt, {Element(u), Element(b), qt(std::to_string(c) + "*t")})));
    SymbolSum ds = symbol_residue(Qt, vt, s);
    SymbolSum rhs{Q, 2, {}};
    for (auto& sym : ds.symbols) {
      std::vector<Element> slots{Element(u)};
      slots.insert(slots.end(), sym.slots.begin(), sym.slots.end());
      rhs.symbols.push_back(cup(Q, slots));
    }
    EXPECT_TRUE(same_class(lhs, canonicalize(rhs))) << u << "," << b << "," << c;
  }
}

TEST(Symbols, HilbertReciprocityHoldsForRandomQuaternions) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long long> d(-100, 100);
  for (int it = 0; it < 100; ++it) {
    long long a = d(rng), b = d(rng);
    if (!a || !b) continue;
    int count = 0;
    for (long long p : oracle::relevant_places(rats({a, b}))) count += oracle::hilbert(a, b, p) == -1;
    EXPECT_EQ(count % 2, 0);
    EXPECT_EQ(is_trivial_or_throw(single(Q, cup(Q, els({a, b})))), count == 0);
  }
}

TEST(Symbols, FunctionFieldDegreeTwo) {
  EXPECT_EQ(is_trivial(single(Qt, cup(Qt, {qt("t"), qt("-t")}))), std::optional<bool>(true));
  EXPECT_EQ(is_trivial(single(Qt, cup(Qt, {qt("t"), qt("-1")}))), std::optional<bool>(false));
  EXPECT_EQ(is_trivial(single(Qt, cup(Qt, {qt("t^2+1"), qt("-1")}))), std::optional<bool>(true));
  EXPECT_EQ(is_trivial(single(Qt, cup(Qt, {qt("-1"), qt("-1")}))), std::optional<bool>(false));
}

// ---------------------------------------------------------------------------
// Norms

TEST(Norms, SpinorNormExamples) {
  EXPECT_TRUE(spinor_norm_member(Q, {els({-1, -1})}, Element(7)));
  EXPECT_TRUE(oracle::rational_sum_of_four_squares(7));
  EXPECT_FALSE(spinor_norm_member(Q, {els({-1, -1})}, Element(-1)));
  EXPECT_TRUE(spinor_norm_member(Q, {els({2})}, Element(2)));
  EXPECT_THROW(spinor_norm_member(Q, {els({2})}, Element(0)), Error);
}

TEST(Norms, SpinorNormMatchesFourSquares) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<long long> d(-300, 300), e(1, 40);
  for (int it = 0; it < 80; ++it) {
    long long n = d(rng);
    if (!n) continue;
    Rational x(n, e(rng));
    EXPECT_EQ(spinor_norm_member(Q, {els({-1, -1})}, Element(x)), oracle::rational_sum_of_four_squares(x)) << x;
    EXPECT_EQ(reduced_norm_member(-1, -1, Element(x)), oracle::rational_sum_of_four_squares(x)) << x;
  }
}

TEST(Norms, ReducedNormExamples) {
  EXPECT_TRUE(reduced_norm_member(-1, -1, 5));
  EXPECT_FALSE(reduced_norm_member(-1, -1, -1));
  for (long long x : {-7, -3, -1, 2, 5, 11}) EXPECT_TRUE(reduced_norm_member(1, 3, x));
  EXPECT_THROW(reduced_norm_member(qt("t"), -1, 1), Error);
}

TEST(Norms, SpinorNormOfLongPfisterForm) {
  EXPECT_TRUE(spinor_norm_member(Q, {els({-1, -1, -1})}, Element(3)));
  EXPECT_FALSE(spinor_norm_member(Q, {els({-1, -1, -1})}, Element(-3)));
}

#include "coherent/coherence.hpp"
#include "coherent/law.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace coherent;

namespace {

const Rational half(1, 2);

DiscreteJointLaw two_corner() {
  return make_law({{{Rational(0), Rational(1)}, half}, {{Rational(1), Rational(0)}, half}});
}

void expect_sound(const DiscreteJointLaw& law, const CoherenceVerdict& v) {
  const auto rep = verify_verdict(law, v);
  EXPECT_TRUE(rep.ok) << rep.reason;
  if (v.coherent()) {
    const auto m = means(law);
    for (const auto& x : m) EXPECT_EQ(x, m[0]);
  }
}

}  // namespace

TEST(CheckCoherence, DeldisWitnessIsDiagonalEvent) {
  for (long k = 1; k < 10; ++k) {
    const Rational d(k, 10);
    const auto law = deldis(d);
    const auto v = check_coherence(law);
    ASSERT_TRUE(v.coherent());
    expect_sound(law, v);
    for (std::size_t s = 0; s < law.size(); ++s) {
      const bool diag = law[s].point[0] == law[s].point[1];
      EXPECT_EQ(v.witness.splits[s].on_a, diag ? law[s].weight : Rational(0));
    }
  }
}

TEST(CheckCoherence, AntiDiagonalIsIncoherent) {
  const auto law = two_corner();
  for (bool fl : {false, true}) {
    const auto v = check_coherence(law, fl);
    EXPECT_FALSE(v.coherent());
    expect_sound(law, v);
    ASSERT_TRUE(v.quick.has_value());
  }
}

TEST(CheckCoherence, ReflectedPairIsCoherentOnlyAtHalf) {
  // Y = 1 - X is coherent iff X = 1/2 a.s.
  for (long k = 0; k <= 4; ++k) {
    const Rational x(k, 4);
    const auto law = make_law({{{x, Rational(1) - x}, half}, {{Rational(1) - x, x}, half}});
    EXPECT_EQ(check_coherence(law).coherent(), x == half) << x;
  }
}

TEST(CheckCoherence, ConstantOpinions) {
  const Rational p(2, 7);
  const auto law = make_law({{{p, p}, Rational(1)}});
  const auto v = check_coherence(law);
  ASSERT_TRUE(v.coherent());
  EXPECT_EQ(v.witness.splits[0].on_a, p);
  EXPECT_EQ(v.witness.phi(0), p);
}

TEST(CheckCoherence, UnequalMeansAreIncoherent) {
  const auto law = make_law({{{Rational(1, 3), Rational(1, 2)}, Rational(1)}});
  const auto v = check_coherence(law);
  EXPECT_FALSE(v.coherent());
  expect_sound(law, v);
}

TEST(CheckCoherence, ConstructedLawsAreCoherent) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 1 + rng() % 4;
    const auto law = oracle::constructed_coherent(rng, k, 3 + rng() % 6);
    const auto v = check_coherence(law, t % 2 == 1);
    ASSERT_TRUE(v.coherent());
    expect_sound(law, v);
  }
}

TEST(CheckCoherence, RandomLatticeLawsAreSound) {
  std::mt19937_64 rng(18);
  int incoherent = 0;
  for (int t = 0; t < 200; ++t) {
    const auto law = oracle::random_lattice_law(rng, 2, 1 + rng() % 5, 4);
    const auto v = check_coherence(law);
    expect_sound(law, v);
    if (!v.coherent()) ++incoherent;
    if (const auto q = quick_incoherence(law)) {
      EXPECT_TRUE(verify_quick_certificate(law, *q));
      EXPECT_FALSE(v.coherent());
    }
  }
  EXPECT_GT(incoherent, 100);
}

TEST(QuickIncoherence, FindsAntiDiagonalCertificate) {
  const auto q = quick_incoherence(two_corner());
  ASSERT_TRUE(q.has_value());
  EXPECT_TRUE(verify_quick_certificate(two_corner(), *q));
  EXPECT_TRUE(verify_quick_certificate(two_corner(), {half, half, false}));
}

TEST(QuickIncoherence, NullUpperEventBlocksCertificate) {
  const auto law = make_law({{{half, half}, Rational(1)}});
  EXPECT_FALSE(verify_quick_certificate(law, {Rational(1, 4), Rational(3, 4), false}));
  EXPECT_FALSE(quick_incoherence(law).has_value());
}

TEST(QuickIncoherence, NoneForCoherentLaws) {
  for (long k = 1; k < 10; ++k) EXPECT_FALSE(quick_incoherence(deldis(Rational(k, 10))).has_value());
  EXPECT_FALSE(quick_incoherence(bernoulli_center()).has_value());
}

TEST(IndependentPair, AttainingMarginalsAreCoherent) {
  const auto law = independent_attaining(Rational(1, 4));
  const auto v = check_independent_pair(marginal(law, 0), marginal(law, 1));
  EXPECT_TRUE(v.coherent);
  EXPECT_TRUE(v.violations.empty());
}

TEST(IndependentPair, FairCoinsViolateAtUpperThreshold) {
  const auto b = make_marginal({{Rational(0), half}, {Rational(1), half}});
  const auto v = check_independent_pair(b, b);
  EXPECT_FALSE(v.coherent);
  bool found = false;
  for (const auto& t : v.violations)
    if (t.s_value == Rational(1) && t.t_value == Rational(1)) {
      EXPECT_EQ(t.excess, Rational(1) - (half + Rational(1, 4)));
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(IndependentPair, PointMassesAndUnequalMeans) {
  const Rational p(3, 8);
  const auto pm = make_marginal({{p, Rational(1)}});
  EXPECT_TRUE(check_independent_pair(pm, pm).coherent);
  const auto other = make_marginal({{half, Rational(1)}});
  const auto v = check_independent_pair(pm, other);
  EXPECT_FALSE(v.equal_means);
  EXPECT_FALSE(v.coherent);
}

TEST(IndependentPair, AgreesWithLpOnProductLaws) {
  std::mt19937_64 rng(21);
  int coherent = 0, total = 0;
  for (int t = 0; t < 400; ++t) {
    std::vector<std::pair<Rational, Rational>> ax;
    for (std::size_t i = 0, n = 1 + rng() % 3; i < n; ++i)
      ax.emplace_back(oracle::random_unit(rng, 6), Rational(1 + static_cast<long>(rng() % 4)));
    const auto mx = make_marginal(ax);
    // Y: two lattice points bracketing the mean of X, weighted to match it.
    const Rational m = mx.mean();
    Rational u = oracle::random_unit(rng, 6), v = oracle::random_unit(rng, 6);
    if (u > m) u = Rational(0);
    if (v < m) v = Rational(1);
    const auto my = u == v ? make_marginal({{m, Rational(1)}}) : make_marginal({{u, v - m}, {v, m - u}});
    ASSERT_EQ(my.mean(), m);
    const auto law = product_law(mx, my);
    const bool lp = check_coherence(law).coherent();
    EXPECT_EQ(check_independent_pair(mx, my).coherent, lp);
    coherent += lp;
    ++total;
  }
  EXPECT_GT(coherent, 0);
  EXPECT_LT(coherent, total);
}

TEST(Strassen, FullSetsGivePMinusOne) {
  const auto law = deldis(Rational(1, 3));
  const auto r = strassen_check(law, IntervalUnion::full(), IntervalUnion::full());
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.slack, means(law)[0] - Rational(1));
}

TEST(Strassen, AntiDiagonalViolatedAtOne) {
  const auto one = IntervalUnion::of_points({Rational(1)});
  const auto r = strassen_check(two_corner(), one, one);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.slack, half);
}

TEST(Strassen, DeldisHoldsOnAllSupportSubsets) {
  for (long k = 1; k < 10; ++k) EXPECT_TRUE(strassen_holds_on_supports(deldis(Rational(k, 10))));
}

TEST(Strassen, OpenEndpointsAndValidation) {
  const Interval open{Rational(0), half, false, false};
  EXPECT_FALSE(open.contains(Rational(0)));
  EXPECT_TRUE(open.contains(Rational(1, 4)));
  EXPECT_FALSE(open.contains(half));
  IntervalUnion bad{{{half, Rational(1, 4), true, true}}};
  EXPECT_THROW(strassen_check(deldis(Rational(1, 3)), bad, IntervalUnion::full()), std::invalid_argument);
  IntervalUnion empty_point{{{half, half, true, false}}};
  EXPECT_THROW(empty_point.validate(), std::invalid_argument);
}

TEST(Strassen, AgreesWithLpOnSmallSupports) {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int t = 0; t < 600 && checked < 150; ++t) {
    const auto law = t % 2 ? oracle::constructed_coherent(rng, 2, 2 + rng() % 4)
                           : oracle::random_lattice_law(rng, 2, 1 + rng() % 5, 3);
    if (marginal(law, 0).atoms.size() > 4 || marginal(law, 1).atoms.size() > 4) continue;
    EXPECT_EQ(strassen_holds_on_supports(law), check_coherence(law).coherent());
    ++checked;
  }
  EXPECT_GE(checked, 150);
}

TEST(Coherence, MixturesAndReflectionsPreserveCoherence) {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 50; ++t) {
    const auto a = oracle::constructed_coherent(rng, 2, 4);
    const auto b = oracle::constructed_coherent(rng, 2, 4);
    const Rational lambda(static_cast<long>(rng() % 9) + 1, 10);
    EXPECT_TRUE(check_coherence(mix(a, b, lambda)).coherent());
    for (auto mode : {Reflection::Swap, Reflection::Complement, Reflection::Both})
      EXPECT_TRUE(check_coherence(reflect(a, mode)).coherent());
  }
}

TEST(GapLemma, EqualSetsGiveZeroBothSides) {
  const std::vector<Rational> w{Rational(1, 4), Rational(1, 4), half};
  const AtomSet g{true, true, false};
  const auto r = verify_gap_lemma(w, {true, false, false}, g, g);
  EXPECT_EQ(r.lhs, Rational(0));
  EXPECT_EQ(r.rhs, Rational(0));
  EXPECT_TRUE(r.equality);
  EXPECT_EQ(r.equality_case, GapEquality::GEqualsH);
}

TEST(GapLemma, DisjointWithAEqualG) {
  const std::vector<Rational> w{Rational(1, 4), Rational(1, 4), half};
  const AtomSet g{true, false, false}, h{false, true, true};
  const auto r = verify_gap_lemma(w, g, g, h);
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(r.equality);
  EXPECT_EQ(r.lhs, Rational(1));
  EXPECT_EQ(r.equality_case, GapEquality::DisjointAIsG);
}

TEST(GapLemma, NestedCases) {
  const std::vector<Rational> w{Rational(1, 4), Rational(1, 4), half};
  const AtomSet g{true, false, false}, h{true, true, false};
  // G inside H, A = G.
  auto r = verify_gap_lemma(w, g, g, h);
  EXPECT_TRUE(r.equality);
  EXPECT_EQ(r.equality_case, GapEquality::GInsideHAIsG);
  // H inside G (swap roles), A = G \ H.
  r = verify_gap_lemma(w, {false, true, false}, h, g);
  EXPECT_TRUE(r.equality);
  EXPECT_EQ(r.equality_case, GapEquality::HInsideGAIsGMinusH);
  EXPECT_FALSE(r.swapped);
}

TEST(GapLemma, NullConditioningThrows) {
  const std::vector<Rational> w{Rational(1), Rational(0)};
  EXPECT_THROW(verify_gap_lemma(w, {true, false}, {false, true}, {true, false}), std::domain_error);
}

TEST(GapLemma, RandomSpacesAlwaysHold) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 3000; ++t) {
    const std::size_t n = 1 + rng() % 8;
    std::vector<Rational> w(n);
    for (auto& x : w) x = Rational(static_cast<long>(rng() % 4));
    AtomSet a(n), g(n), h(n);
    for (std::size_t s = 0; s < n; ++s) {
      a[s] = rng() % 2;
      g[s] = rng() % 2;
      h[s] = rng() % 2;
    }
    Rational pg, ph;
    for (std::size_t s = 0; s < n; ++s) {
      if (g[s]) pg += w[s];
      if (h[s]) ph += w[s];
    }
    if (pg.is_zero() || ph.is_zero()) continue;
    const auto r = verify_gap_lemma(w, a, g, h);
    EXPECT_TRUE(r.holds);
    if (r.equality) EXPECT_NE(r.equality_case, GapEquality::None);
  }
}

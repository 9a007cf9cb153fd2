#include <random>

#include <gtest/gtest.h>

#include "cpc/cutplane.hpp"

using namespace cpc;

TEST(LowerBound, ClosedForms) {
  EXPECT_EQ(lower_bound_value(AdversaryKind::IntegerFiber, 2, 0, 8, 0.5, 0), 8);
  EXPECT_EQ(lower_bound_value(AdversaryKind::ContinuousMedian, 2, 0, 0, 1.0, 1024), 9);
  EXPECT_EQ(lower_bound_value(AdversaryKind::MixedFiber, 1, 1, 4, 0.5, 0), 6);
  // the lattice degeneracy term can make the bound vacuous
  EXPECT_EQ(lower_bound_value(AdversaryKind::ContinuousMedian, 2, 0, 0, 0.5, 1.0, 1.0), 0);
  EXPECT_EQ(lower_bound_value(AdversaryKind::IntegerFiber, 3, 0, 5, 0.5, 0), 4 * 3);
}

TEST(IntegerFiber, FirstQueryHalvesOneFiber) {
  AdversaryState st = AdversaryState::integer_fiber(2, 8);
  const auto [v, h] = st.query(make_point({3, 0}));
  EXPECT_GT(v, 0.0);
  EXPECT_GE(st.fiber_remaining(0), 4);
  EXPECT_EQ(st.fiber_remaining(1), 8);
  // every alive lattice point of both fibers stays strictly on the kept side
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 2; ++b) {
      const Point y = make_point({double(a), double(b)});
      const double s = h.dot(y - make_point({3, 0}));
      const bool alive = b == 1 || a >= 4;
      if (alive) EXPECT_LT(s, 0.0);
      else EXPECT_GE(s, 0.0);
    }
}

TEST(IntegerFiber, RequeryIsIdentical) {
  AdversaryState st = AdversaryState::integer_fiber(2, 8);
  const auto first = st.query(make_point({5, 1}));
  st.query(make_point({2, 0}));
  const auto again = st.query(make_point({5, 1}));
  EXPECT_EQ(first.first, again.first);
  EXPECT_EQ(first.second, again.second);
  EXPECT_EQ(st.history().size(), 2u);
}

TEST(IntegerFiber, PreservationAndHalving) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> A(0, 7), F(0, 1);
  for (int game = 0; game < 20; ++game) {
    AdversaryState st = AdversaryState::integer_fiber(2, 8);
    for (int q = 0; q < 12; ++q) {
      const int a = A(gen), f = F(gen);
      const auto before0 = st.fiber_remaining(0), before1 = st.fiber_remaining(1);
      st.query(make_point({double(a), double(f)}));
      const auto r = f == 0 ? before0 : before1;
      const auto after = f == 0 ? st.fiber_remaining(0) : st.fiber_remaining(1);
      EXPECT_EQ(f == 0 ? st.fiber_remaining(1) : st.fiber_remaining(0), f == 0 ? before1 : before0);
      EXPECT_LE(after, r);
      EXPECT_GE(after, r / 2);
    }
  }
}

TEST(IntegerFiber, OutsideFiberUnionSeparates) {
  AdversaryState st = AdversaryState::integer_fiber(3, 4);
  const auto [v, h] = st.query(make_point({1, 1, 0}));
  (void)v;
  const auto [v2, h2] = st.query(make_point({0, 0, 1}));
  (void)v2;
  (void)h;
  EXPECT_EQ(st.fiber_remaining(2), 3);
  EXPECT_THROW(st.query(make_point({9, 0, 0})), Error);
  try {
    st.query(make_point({-1, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutsideRegion);
  }
  EXPECT_GT(h2.norm(), 0.0);
}

TEST(Consistency, MaxOfAffinesIsConvexAndReplays) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> U(0, 32);
  AdversaryState st = AdversaryState::continuous_median(Box(make_point({0, 0}), make_point({32, 32})));
  auto o = FirstOrderOracle::adversarial(std::make_shared<AdversaryState>(std::move(st)));
  const SolveReport rep = solve(o, ConstraintSet::continuous(2), Box(make_point({0, 0}), make_point({32, 32})), 1.0, Strategy::centroid());
  const AdversaryState& fin = *o.adversary();
  const ReplayCheck rc = replay(fin);
  EXPECT_TRUE(rc.values_match);
  EXPECT_TRUE(rc.subgradients_maximal);
  EXPECT_EQ(rc.checked, rep.oracle_calls);
  for (int t = 0; t < 1000; ++t) {
    const Point a = make_point({U(gen), U(gen)}), b = make_point({U(gen), U(gen)});
    const double ga = fin.evaluate(a).first, gb = fin.evaluate(b).first, gm = fin.evaluate(0.5 * (a + b)).first;
    EXPECT_LE(gm, 0.5 * (ga + gb) + 1e-9 * (std::abs(ga) + std::abs(gb)));
  }
}

TEST(Games, SolverNeedsAtLeastTheLowerBound) {
  for (const Strategy& s : {Strategy::centerpoint(1), Strategy::centroid(), Strategy::random_feasible(7)}) {
    auto fib = FirstOrderOracle::adversarial(std::make_shared<AdversaryState>(AdversaryState::integer_fiber(2, 8)));
    const SolveReport r = solve(fib, ConstraintSet::lattice(2), fib.adversary()->E0(), 0.5, s);
    EXPECT_GE(r.oracle_calls, 8u) << to_string(s.kind);
    EXPECT_EQ(r.bounds.lower, 8);
    EXPECT_TRUE(replay(*fib.adversary()).values_match);

    const Box E0(make_point({0, 0}), make_point({32, 32}));
    auto med = FirstOrderOracle::adversarial(std::make_shared<AdversaryState>(AdversaryState::continuous_median(E0)));
    const SolveReport m = solve(med, ConstraintSet::continuous(2), E0, 1.0, s);
    EXPECT_GE(m.oracle_calls, 9u) << to_string(s.kind);
    EXPECT_EQ(m.bounds.lower, 9);
    EXPECT_EQ(med.adversary()->fallbacks(), 0u);
  }
}

TEST(Games, MixedFiber) {
  auto o = FirstOrderOracle::adversarial(std::make_shared<AdversaryState>(AdversaryState::mixed_fiber(1, 1, 4)));
  const SolveReport r = solve(o, ConstraintSet::mixed(1, 1), o.adversary()->E0(), 0.5, Strategy::centerpoint(2));
  EXPECT_GE(static_cast<std::int64_t>(r.oracle_calls), lower_bound_value(AdversaryKind::MixedFiber, 1, 1, 4, 0.5, 0));
  const ReplayCheck rc = replay(*o.adversary());
  EXPECT_TRUE(rc.values_match && rc.subgradients_maximal);
  // halving never drops a fiber below half its length
  EXPECT_GT(o.adversary()->fiber_volume(0) + o.adversary()->fiber_volume(1), 0.0);
}

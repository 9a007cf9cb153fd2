#include <random>

#include <gtest/gtest.h>

#include "cpc/centerpoint.hpp"

using namespace cpc;

namespace {

Measure polygon_measure(const std::vector<Vec2>& pts, int kind = 0) {
  const Polygon poly = Polygon::hull(pts);
  std::vector<std::vector<double>> rows;
  const auto& v = poly.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % v.size()];
    rows.push_back({b.y() - a.y(), a.x() - b.x(), (b.y() - a.y()) * a.x() + (a.x() - b.x()) * a.y()});
  }
  const Polytope P = Polytope::from_rows(rows);
  if (kind == 1) return Measure::lattice(P);
  if (kind == 2) return Measure::mixed(P, 1, 1);
  return Measure::uniform(P);
}

double grid_depth(const std::vector<WeightedPoint>& pts, const Point& x, int steps) {
  double total = 0, best = 1e300;
  for (const auto& wp : pts) total += wp.weight;
  for (int k = 0; k < steps; ++k) {
    const double a = 2 * kPi * (k + 0.37) / steps;
    double m = 0;
    for (const auto& wp : pts)
      if (std::sin(a) * (wp.point(0) - x(0)) + std::cos(a) * (wp.point(1) - x(1)) >= 0) m += wp.weight;
    best = std::min(best, m);
  }
  return best / total;
}

}  // namespace

TEST(SampleSize, KnownValues) {
  EXPECT_EQ(mc_sample_size(0.1, 0.1, 3), 266u);
  EXPECT_EQ(mc_sample_size(0.05, 0.1, 3), 1061u);
  // 0.5 / eps^2 * (3 + ln 10)
  EXPECT_NEAR(mc_sample_size_real(0.1, 0.1, 3), 50.0 * (3 + 2.302585092994046), 1e-9);
  EXPECT_THROW(mc_sample_size(0.0, 0.1, 3), Error);
  EXPECT_THROW(mc_sample_size(0.1, 1.0, 3), Error);
}

TEST(Guarantee, HellyNumbers) {
  EXPECT_EQ(depth_guarantee(ConstraintSet::continuous(2)).helly, 3);
  EXPECT_EQ(depth_guarantee(ConstraintSet::lattice(2)).helly, 4);
  EXPECT_EQ(depth_guarantee(ConstraintSet::mixed(1, 1)).helly, 4);
  EXPECT_EQ(depth_guarantee(ConstraintSet::mixed(2, 1)).helly, 8);
  EXPECT_NEAR(*depth_guarantee(ConstraintSet::continuous(2)).grunbaum_floor, 4.0 / 9.0, 1e-15);
  EXPECT_FALSE(depth_guarantee(ConstraintSet::lattice(2)).grunbaum_floor.has_value());
  EXPECT_DOUBLE_EQ(lenstra_depth_floor(1, 1), 1.0 / 8.0);
  EXPECT_TRUE(ConstraintSet::mixed(1, 1).contains(make_point({2, 0.3})));
  EXPECT_FALSE(ConstraintSet::lattice(2).contains(make_point({2, 0.3})));
}

TEST(Centroid, TriangleAndInterval) {
  const Point c = centroid(polygon_measure({{0, 0}, {1, 0}, {0, 1}}));
  EXPECT_NEAR(c(0), 1.0 / 3, 1e-15);
  EXPECT_NEAR(c(1), 1.0 / 3, 1e-15);
  EXPECT_DOUBLE_EQ(centroid(Measure::uniform(Polytope::box(make_point({1}), make_point({4}))))(0), 2.5);
}

TEST(DeepestPoint, MatchesArrangementVertices) {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<int> U(0, 9);
  for (int t = 0; t < 15; ++t) {
    std::vector<WeightedPoint> pts;
    for (int i = 0; i < 8; ++i) pts.push_back({make_point({double(U(gen)), double(U(gen))}), 1.0});
    // The maximum is attained at a vertex of the line arrangement or at a data point.
    std::vector<Point> cand;
    for (const auto& p : pts) cand.push_back(p.point);
    std::vector<std::pair<Vec2, Vec2>> lines;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        if ((pts[i].point - pts[j].point).norm() > 0)
          lines.emplace_back(Vec2(pts[i].point(0), pts[i].point(1)), Vec2(pts[j].point(0), pts[j].point(1)));
    for (std::size_t a = 0; a < lines.size(); ++a)
      for (std::size_t b = a + 1; b < lines.size(); ++b) {
        const Vec2 p = lines[a].first, r = lines[a].second - p;
        const Vec2 q = lines[b].first, s = lines[b].second - q;
        const double den = r.x() * s.y() - r.y() * s.x();
        if (std::abs(den) < 1e-12) continue;
        const double tt = ((q - p).x() * s.y() - (q - p).y() * s.x()) / den;
        cand.push_back(make_point({p.x() + tt * r.x(), p.y() + tt * r.y()}));
      }
    double oracle = 0;
    for (const auto& c : cand) oracle = std::max(oracle, depth_finite(pts, c).value);
    const auto got = detail::deepest_point_2d(pts);
    ASSERT_TRUE(got.has_value());
    EXPECT_DOUBLE_EQ(got->depth.value, oracle) << t;
    EXPECT_GE(got->depth.value, 1.0 / 3.0 - 1e-12);
  }
}

TEST(MonteCarlo, TriangleDepthNearOptimal) {
  const Measure m = polygon_measure({{0, 0}, {1, 0}, {0, 1}});
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    RngState rng(seed);
    const auto r = centerpoint_monte_carlo(m, ConstraintSet::continuous(2), 0.05, 0.1, rng);
    EXPECT_EQ(r.samples_used, 1061u);
    EXPECT_GE(depth(m, r.point).value, 4.0 / 9.0 - 0.05);
  }
}

TEST(MonteCarlo, BeatsEverySamplePoint) {
  const Measure m = polygon_measure({{0, 0}, {3, 0}, {1, 2}});
  RngState rng(4), replay(4);
  const auto r = centerpoint_monte_carlo(m, ConstraintSet::continuous(2), 0.1, 0.1, rng);
  const auto draws = sample(m, replay, r.samples_used);
  std::vector<WeightedPoint> pts;
  for (const auto& y : draws) pts.push_back({y, 1.0});
  EXPECT_DOUBLE_EQ(r.depth.value, depth_finite(pts, r.point).value);
  for (const auto& wp : pts) EXPECT_GE(r.depth.value, depth_finite(pts, wp.point).value);
}

TEST(MonteCarlo, Deterministic) {
  const Measure m = polygon_measure({{0, 0}, {2, 0}, {2, 1}, {0, 3}});
  RngState a(9), b(9);
  EXPECT_EQ(centerpoint_monte_carlo(m, ConstraintSet::continuous(2), 0.1, 0.1, a).point,
            centerpoint_monte_carlo(m, ConstraintSet::continuous(2), 0.1, 0.1, b).point);
}

TEST(MonteCarlo, LatticeAndMixedAreFeasible) {
  RngState rng(6);
  const Measure lat = polygon_measure({{0, 0}, {6, 0}, {0, 5}}, 1);
  const auto rl = centerpoint_monte_carlo(lat, ConstraintSet::lattice(2), 0.1, 0.1, rng);
  EXPECT_TRUE(ConstraintSet::lattice(2).contains(rl.point));
  EXPECT_GE(depth(lat, rl.point).value, 0.25 - 0.1);
  const Measure mix = polygon_measure({{0, 0}, {6, 0}, {0, 5}}, 2);
  const auto rm = centerpoint_monte_carlo(mix, ConstraintSet::mixed(1, 1), 0.1, 0.1, rng);
  EXPECT_TRUE(ConstraintSet::mixed(1, 1).contains(rm.point));
  EXPECT_GE(depth(mix, rm.point).value, 0.25 - 0.1);
}

TEST(IntegerCenterpoint, MatchesBruteForce) {
  std::mt19937_64 gen(23);
  std::uniform_int_distribution<int> U(-4, 4);
  int done = 0;
  while (done < 12) {
    std::vector<Vec2> v;
    for (int i = 0; i < 5; ++i) v.emplace_back(U(gen) + 0.3, U(gen) - 0.2);
    if (Polygon::hull(v).size() < 3) continue;
    Measure m = Measure::uniform(Polytope::box(make_point({0, 0}), make_point({1, 1})));
    try {
      m = polygon_measure(v, 1);
    } catch (const Error&) {
      continue;
    }
    const auto& pts = m.active_points();
    double best = -1;
    Point arg;
    for (const auto& wp : pts) {
      const double g = grid_depth(pts, wp.point, 20000);
      if (g > best + 1e-12 || (g > best - 1e-12 && lex_less(wp.point, arg))) {
        best = g;
        arg = wp.point;
      }
    }
    const auto r = centerpoint_lattice_2d(m);
    EXPECT_NEAR(r.depth.value, best, 1e-12);
    EXPECT_EQ(r.point, arg);
    EXPECT_GE(r.depth.value, 0.25);
    const auto p = centerpoint_lattice_2d(m, true);
    EXPECT_EQ(p.point, r.point);
    EXPECT_DOUBLE_EQ(p.depth.value, r.depth.value);
    ++done;
  }
}

TEST(IntegerCenterpoint, GridAndEmpty) {
  const auto r = centerpoint_2d_integer(Polytope::box(make_point({0, 0}), make_point({2, 2})));
  EXPECT_EQ(r.point, make_point({1, 1}));
  try {
    centerpoint_2d_integer(Polytope::box(make_point({0.2, 0}), make_point({0.8, 1})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyLattice);
  }
}

TEST(Lenstra, StripAndFloor) {
  const auto r = centerpoint_lenstra_mixed(Polytope::box(make_point({0, 0}), make_point({2, 1})), 1, 1);
  EXPECT_EQ(r.point, make_point({1, 0.5}));
  EXPECT_DOUBLE_EQ(r.depth.value, 0.5);
  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> U(-5, 5);
  int done = 0;
  while (done < 15) {
    std::vector<Vec2> v;
    for (int i = 0; i < 5; ++i) v.emplace_back(U(gen), U(gen));
    Polytope P = Polytope::box(make_point({0, 0}), make_point({1, 1}));
    try {
      const Measure m = polygon_measure(v, 2);
      P = *m.support_polytope();
    } catch (const Error&) {
      continue;
    }
    const auto c = centerpoint_lenstra_mixed(P, 1, 1);
    EXPECT_TRUE(ConstraintSet::mixed(1, 1).contains(c.point));
    EXPECT_GE(c.depth.value, lenstra_depth_floor(1, 1));
    ++done;
  }
}

TEST(Lenstra, WideBranchRoundsCentroid) {
  const auto r = centerpoint_lenstra_mixed(Polytope::box(make_point({0, 0}), make_point({200, 1})), 1, 1);
  EXPECT_EQ(r.point, make_point({100, 0.5}));
  EXPECT_NEAR(r.depth.value, 0.5, 1e-12);
}

TEST(Lenstra, TwoIntegerCoordinates) {
  const auto r = centerpoint_lenstra_mixed(Polytope::box(make_point({0, 0, 0}), make_point({2, 3, 1})), 2, 1);
  EXPECT_TRUE(ConstraintSet::mixed(2, 1).contains(r.point));
  EXPECT_GE(r.depth.value, lenstra_depth_floor(2, 1));
  EXPECT_THROW(centerpoint_lenstra_mixed(Polytope::box(make_point({0, 0}), make_point({2, 1})), 1, 2), Error);
  try {
    centerpoint_lenstra_mixed(Polytope::box(make_point({0.2, 0}), make_point({0.8, 1})), 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyLattice);
  }
}

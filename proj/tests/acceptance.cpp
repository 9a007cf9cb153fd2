// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include <fmt/format.h>

#include "cpc/cpc.hpp"

using namespace cpc;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

Polytope polygon_rows(const Polygon& poly) {
  std::vector<std::vector<double>> rows;
  const auto& v = poly.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % v.size()];
    rows.push_back({b.y() - a.y(), a.x() - b.x(), (b.y() - a.y()) * a.x() + (a.x() - b.x()) * a.y()});
  }
  return Polytope::from_rows(rows);
}

// Random lattice polygon with at least min_pts and at most max_pts lattice points.
Polytope random_lattice_polygon(std::mt19937_64& gen, int span, std::size_t min_pts, std::size_t max_pts) {
  std::uniform_int_distribution<int> U(0, span), K(3, 6);
  for (;;) {
    std::vector<Vec2> pts;
    const int k = K(gen);
    for (int i = 0; i < k; ++i) pts.emplace_back(U(gen), U(gen));
    const Polygon poly = Polygon::hull(pts);
    if (poly.size() < 3) continue;
    const Polytope P = polygon_rows(poly);
    const auto lp = enumerate_lattice_points(P);
    if (lp.size() >= min_pts && lp.size() <= max_pts) return P;
  }
}

std::vector<WeightedPoint> weighted(const std::vector<Point>& pts) {
  std::vector<WeightedPoint> out;
  for (const auto& p : pts) out.push_back({p, 1.0});
  return out;
}

// Dense angular sweep over closed halfplanes; exact when every arc between critical angles is wider than the step.
struct SweepOracle {
  std::vector<double> s, c;
  explicit SweepOracle(int steps) {
    for (int k = 0; k < steps; ++k) {
      const double a = 2 * kPi * (k + 0.3183) / steps;
      s.push_back(std::sin(a));
      c.push_back(std::cos(a));
    }
  }
  double operator()(const std::vector<WeightedPoint>& pts, const Point& x) const {
    double total = 0, best = 1e300;
    for (const auto& wp : pts) total += wp.weight;
    for (std::size_t k = 0; k < s.size(); ++k) {
      double m = 0;
      for (const auto& wp : pts)
        if (s[k] * (wp.point(0) - x(0)) + c[k] * (wp.point(1) - x(1)) >= 0) m += wp.weight;
      best = std::min(best, m);
    }
    return best / total;
  }
};

Point brute_lattice_min(FirstOrderOracle o, int lo, int hi) {
  Point best;
  double bv = 1e300;
  for (int x = lo; x < hi; ++x)
    for (int y = lo; y < hi; ++y) {
      const Point p = make_point({double(x), double(y)});
      const double v = o.evaluate(p).first;
      if (v < bv) {
        bv = v;
        best = p;
      }
    }
  return best;
}

Outcome grunbaum() {
  Outcome out;
  const Measure tri = Measure::uniform(polygon_rows(Polygon::hull({{0, 0}, {1, 0}, {0, 1}})));
  const double d0 = depth(tri, make_point({1.0 / 3, 1.0 / 3})).value;
  out.ok = std::abs(d0 - 4.0 / 9.0) <= 1e-8;
  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> U(0, 10);
  double worst = 1.0;
  for (int t = 0; t < 50;) {
    const Vec2 a(U(gen), U(gen)), b(U(gen), U(gen)), c(U(gen), U(gen));
    const Polygon poly = Polygon::hull({a, b, c});
    if (poly.size() < 3 || polygon_area(poly) < 0.5) continue;
    const Vec2 g = (a + b + c) / 3.0;
    worst = std::min(worst, depth(Measure::uniform(polygon_rows(poly)), make_point({g.x(), g.y()})).value);
    ++t;
  }
  out.ok = out.ok && worst >= 4.0 / 9.0 - 1e-8;
  out.detail = fmt::format("standard triangle {:.12f}, worst of 50 {:.12f}", d0, worst);
  return out;
}

Outcome symmetry() {
  Outcome out;
  std::vector<double> vals;
  vals.push_back(depth(Measure::uniform(Polytope::box(make_point({0, 0}), make_point({1, 1}))), make_point({0.5, 0.5})).value);
  for (auto [w, h] : {std::pair{1, 1}, {3, 3}, {5, 1}, {3, 5}}) {
    const Measure g = Measure::lattice(Polytope::box(make_point({0, 0}), make_point({double(w), double(h)})));
    vals.push_back(depth(g, make_point({w / 2.0, h / 2.0})).value);
  }
  const Measure mixed = Measure::mixed(Polytope::box(make_point({0, 0}), make_point({2, 1})), 1, 1);
  const double mv = depth(mixed, make_point({1, 0.5})).value;
  vals.push_back(mv);
  // direction grid over the three unit fibers z = 0, 1, 2
  double grid = 1e300;
  for (int k = 0; k < 100000; ++k) {
    const double a = 2 * kPi * (k + 0.5) / 100000, u0 = std::sin(a), u1 = std::cos(a);
    double m = 0;
    for (int z = 0; z <= 2; ++z) {
      // length of {y in [0,1] : u0 (z - 1) + u1 (y - 0.5) >= 0}
      const double c0 = u0 * (z - 1) - 0.5 * u1;
      double len;
      if (u1 == 0) len = c0 >= 0 ? 1 : 0;
      else {
        const double t = -c0 / u1;
        len = u1 > 0 ? 1 - std::clamp(t, 0.0, 1.0) : std::clamp(t, 0.0, 1.0);
      }
      m += len;
    }
    grid = std::min(grid, m / 3);
  }
  for (double v : vals) out.ok = out.ok && std::abs(v - 0.5) <= 1e-9;
  out.ok = out.ok && std::abs(grid - 0.5) <= 1e-9 && std::abs(mv - grid) <= 1e-9;
  std::string s;
  for (double v : vals) s += fmt::format(" {:.12f}", v);
  out.detail = fmt::format("depths{}; mixed grid oracle {:.12f}", s, grid);
  return out;
}

Outcome cross_engine() {
  Outcome out;
  std::mt19937_64 gen(303);
  std::uniform_int_distribution<int> H(0, 20), N(3, 40), W(1, 3);
  const SweepOracle oracle(100000);
  int checked = 0, mismatches = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<WeightedPoint> pts;
    const int n = N(gen);
    for (int i = 0; i < n; ++i) pts.push_back({make_point({H(gen) / 2.0, H(gen) / 2.0}), double(W(gen))});
    for (const Point& x : {pts[0].point, make_point({H(gen) / 2.0, H(gen) / 2.0})}) {
      ++checked;
      if (depth_finite(pts, x).value != oracle(pts, x)) ++mismatches;
    }
  }
  int lat_checked = 0, lat_mismatches = 0;
  for (int t = 0; t < 25; ++t) {
    const Polytope P = random_lattice_polygon(gen, 12, 3, 200);
    const Measure m = Measure::lattice(P);
    const auto lp = weighted(enumerate_lattice_points(P));
    std::vector<Point> qs;
    for (std::size_t i = 0; i < lp.size(); i += std::max<std::size_t>(1, lp.size() / 8)) qs.push_back(lp[i].point);
    qs.push_back(make_point({6.25, 5.5}));
    for (const auto& x : qs) {
      ++lat_checked;
      if (std::abs(min_direction_2d(m, x).value - depth_finite(lp, x).value) > 1e-12) ++lat_mismatches;
    }
  }
  out.ok = mismatches == 0 && lat_mismatches == 0;
  out.detail = fmt::format("finite {}/{} agree, lattice {}/{} agree", checked - mismatches, checked, lat_checked - lat_mismatches, lat_checked);
  return out;
}

Outcome helly_floors() {
  Outcome out;
  std::mt19937_64 gen(404);
  double worst_lat = 1, worst_mixed = 1, worst_lenstra = 1;
  for (int t = 0; t < 25; ++t) {
    const Measure m = Measure::lattice(random_lattice_polygon(gen, 10, 1, 150));
    worst_lat = std::min(worst_lat, centerpoint_lattice_2d(m).depth.value);
  }
  std::uniform_real_distribution<double> U(0, 6);
  for (int t = 0; t < 20;) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 5; ++i) pts.emplace_back(U(gen), U(gen));
    const Polygon poly = Polygon::hull(pts);
    if (poly.size() < 3) continue;
    const Polytope P = polygon_rows(poly);
    std::optional<Measure> m;
    try {
      m = Measure::mixed(P, 1, 1);
    } catch (const Error&) {
      continue;
    }
    double best = 0;
    for (const Fiber& f : m->active_fibers())
      for (int k = 0; k <= 40; ++k) {
        const double y = f.lo + (f.hi - f.lo) * k / 40.0;
        best = std::max(best, depth(*m, make_point({f.z(0), y})).value);
      }
    worst_mixed = std::min(worst_mixed, best);
    worst_lenstra = std::min(worst_lenstra, centerpoint_lenstra_mixed(P, 1, 1).depth.value);
    ++t;
  }
  out.ok = worst_lat >= 0.25 && worst_mixed >= 0.25 && worst_lenstra >= lenstra_depth_floor(1, 1);
  out.detail = fmt::format("min lattice max-depth {:.4f}, min mixed max-depth {:.4f}, min recursive output {:.4f} (floor {})", worst_lat,
                           worst_mixed, worst_lenstra, lenstra_depth_floor(1, 1));
  return out;
}

Outcome exact_integer() {
  Outcome out;
  std::mt19937_64 gen(505);
  int agree = 0;
  for (int t = 0; t < 25; ++t) {
    const Polytope P = random_lattice_polygon(gen, 16, 5, 200);
    const auto lp = weighted(enumerate_lattice_points(P));
    double brute = 0;
    for (const auto& wp : lp) brute = std::max(brute, depth_finite(lp, wp.point).value);
    const auto r = centerpoint_lattice_2d(Measure::lattice(P));
    if (std::abs(r.depth.value - brute) <= 1e-12 && std::abs(depth_finite(lp, r.point).value - brute) <= 1e-12) ++agree;
  }
  out.ok = agree == 25;
  out.detail = fmt::format("{}/25 match exhaustive search", agree);
  return out;
}

Outcome monte_carlo() {
  const Measure tri = Measure::uniform(polygon_rows(Polygon::hull({{0, 0}, {1, 0}, {0, 1}})));
  int good = 0;
  double worst = 1;
  for (int t = 0; t < 100; ++t) {
    RngState rng(7000 + t);
    const auto r = centerpoint_monte_carlo(tri, ConstraintSet::continuous(2), 0.05, 0.1, rng, 0.5);
    const double d = depth(tri, r.point).value;
    worst = std::min(worst, d);
    if (d >= 4.0 / 9.0 - 0.05) ++good;
  }
  return {good >= 90, fmt::format("{}/100 trials reach 4/9 - 0.05 (worst {:.4f})", good, worst)};
}

struct SolverRuns {
  int exact = 0, within = 0, contracted = 0;
  std::size_t max_calls = 0;
};

SolverRuns solver_runs() {
  SolverRuns s;
  std::mt19937_64 gen(707);
  std::uniform_real_distribution<double> U(0, 8), W(0.2, 3), O(-0.5, 0.5);
  const Box E0(make_point({0, 0}), make_point({8, 8}));
  const std::int64_t bound = iteration_upper_bound(0.25, 64, 0.9);
  for (int t = 0; t < 50; ++t) {
    Eigen::MatrixXd A(2, 2);
    A << W(gen), O(gen), O(gen), W(gen);
    const Eigen::MatrixXd Q = A.transpose() * A;
    const Vector c0 = make_point({U(gen), U(gen)});
    const Vector c = -2 * Q * c0;
    const double r0 = c0.dot(Q * c0);
    const Point truth = brute_lattice_min(FirstOrderOracle::quadratic(Q, c, r0), 0, 8);
    auto o = FirstOrderOracle::quadratic(Q, c, r0);
    const SolveReport r = solve(o, ConstraintSet::lattice(2), E0, 0.9, Strategy::centerpoint(t));
    if (r.best_point && *r.best_point == truth) ++s.exact;
    if (static_cast<std::int64_t>(r.oracle_calls) <= bound) ++s.within;
    s.max_calls = std::max(s.max_calls, r.oracle_calls);
    bool ok = true;
    double prev = r.initial_mass;
    for (const auto& row : r.trace) {
      if (!row.depth_exact || row.mass > (1 - row.depth + 1e-6) * prev) ok = false;
      prev = row.mass;
    }
    if (ok) ++s.contracted;
  }
  return s;
}

struct Games {
  std::vector<std::string> lines;
  bool bounds_ok = true, replay_ok = true;
};

Games games() {
  Games g;
  for (const Strategy& s : {Strategy::centerpoint(8), Strategy::centroid()}) {
    auto fib = FirstOrderOracle::adversarial(std::make_shared<AdversaryState>(AdversaryState::integer_fiber(2, 8)));
    const SolveReport a = solve(fib, ConstraintSet::lattice(2), fib.adversary()->E0(), 0.5, s);
    const Box E0(make_point({0, 0}), make_point({32, 32}));
    auto med = FirstOrderOracle::adversarial(std::make_shared<AdversaryState>(AdversaryState::continuous_median(E0)));
    const SolveReport b = solve(med, ConstraintSet::continuous(2), E0, 1.0, s);
    g.bounds_ok = g.bounds_ok && a.oracle_calls >= 8 && b.oracle_calls >= 9 && a.bounds.lower == 8 && b.bounds.lower == 9;
    for (const auto* o : {&fib, &med}) {
      const ReplayCheck rc = replay(*o->adversary());
      g.replay_ok = g.replay_ok && rc.values_match && rc.subgradients_maximal && rc.checked == o->call_count();
    }
    g.lines.push_back(fmt::format("{}: fiber {} calls, median {} calls", to_string(s.kind), a.oracle_calls, b.oracle_calls));
  }
  return g;
}

Outcome lipschitz_gap() {
  std::mt19937_64 gen(1010);
  std::uniform_real_distribution<double> Y(1, 3), Z(0, 4), A(0.1, 2), L(0.5, 3);
  const Box E0(make_point({0, 0}), make_point({4, 4}));
  const double delta = 0.05;
  int ok = 0;
  double worst_ratio = 0;
  for (int t = 0; t < 20; ++t) {
    const double a = A(gen), l = L(gen), z0 = Z(gen), y0 = Y(gen);
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2, 2);
    Q(0, 0) = a;
    auto o = FirstOrderOracle::sum({FirstOrderOracle::quadratic(Q, make_point({-2 * a * z0, 0}), a * z0 * z0),
                                    FirstOrderOracle::affine_max({make_point({0, l}), make_point({0, -l})}, {-l * y0, l * y0})});
    const SolveReport r = solve(o, ConstraintSet::mixed(1, 1), E0, delta, Strategy::centerpoint(t));
    // grid over each fiber, then ternary refinement around the best cell
    double opt = 1e300;
    for (int z = 0; z < 4; ++z) {
      const auto f = [&](double y) { return a * (z - z0) * (z - z0) + l * std::abs(y - y0); };
      double lo = 0, hi = 4;
      for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        (f(m1) <= f(m2) ? hi : lo) = f(m1) <= f(m2) ? m2 : m1;
      }
      opt = std::min(opt, f(0.5 * (lo + hi)));
    }
    const double gap = r.best_value - opt, bound = mixed_gap_bound(l, delta, 1);
    worst_ratio = std::max(worst_ratio, gap / bound);
    if (r.best_point && ConstraintSet::mixed(1, 1).contains(*r.best_point) && gap <= bound + 1e-12) ++ok;
  }
  return {ok == 20, fmt::format("{}/20 within L*delta/2 (worst gap/bound {:.3f})", ok, worst_ratio)};
}

int failures = 0;

template <class F>
auto timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = f();
  return std::pair{std::move(r), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
}

void report(int id, const char* name, bool ok, double secs, double limit, const std::string& detail) {
  const bool pass = ok && secs < limit;
  if (!pass) ++failures;
  std::printf("criterion %2d %-28s %s  %7.2f s (limit %g s)  %s\n", id, name, pass ? "PASS" : "FAIL", secs, limit, detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  {
    auto [o, t] = timed(grunbaum);
    report(1, "centroid depth floor", o.ok, t, 5, o.detail);
  }
  {
    auto [o, t] = timed(symmetry);
    report(2, "symmetric depth one half", o.ok, t, 5, o.detail);
  }
  {
    auto [o, t] = timed(cross_engine);
    report(3, "depth engines agree", o.ok, t, 60, o.detail);
  }
  {
    auto [o, t] = timed(helly_floors);
    report(4, "discrete depth floors", o.ok, t, 60, o.detail);
  }
  {
    auto [o, t] = timed(exact_integer);
    report(5, "exact integer centerpoint", o.ok, t, 60, o.detail);
  }
  {
    auto [o, t] = timed(monte_carlo);
    report(6, "sampled centerpoint", o.ok, t, 120, o.detail);
  }
  auto [runs, t7] = timed(solver_runs);
  report(7, "integer solver exactness", runs.exact == 50 && runs.within == 50, t7, 120,
         fmt::format("{}/50 exact, {}/50 within {} calls (max {})", runs.exact, runs.within, iteration_upper_bound(0.25, 64, 0.9), runs.max_calls));
  report(9, "mass contraction", runs.contracted == 50, t7, 120, fmt::format("{}/50 traces contract by the chosen depth", runs.contracted));
  auto [g, t8] = timed(games);
  std::string lines;
  for (const auto& l : g.lines) lines += l + "; ";
  report(8, "adversarial lower bounds", g.bounds_ok, t8, 60, lines);
  report(11, "adversary consistency", g.replay_ok, t8, 10, g.replay_ok ? "all replays match" : "replay mismatch");
  {
    auto [o, t] = timed(lipschitz_gap);
    report(10, "mixed Lipschitz gap", o.ok, t, 120, o.detail);
  }
  std::printf("%s\n", failures == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failures).c_str());
  return failures == 0 ? 0 : 1;
}

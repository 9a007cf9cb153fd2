#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "cpc/adversary.hpp"
#include "cpc/centerpoint.hpp"
#include "cpc/depth.hpp"
#include "cpc/error.hpp"
#include "cpc/geom.hpp"
#include "cpc/measure.hpp"
#include "cpc/oracle.hpp"
#include "cpc/rng.hpp"

namespace cpc {

inline constexpr int kDefaultBudget = 10000;
inline constexpr double kInteriorTol = 1e-12;
inline constexpr double kNudge = 1e-9;
inline constexpr std::size_t kScoringDirections = 512;
inline constexpr std::uint64_t kScoringSeed = 0xc0ffee;

// ceil(log(V / delta) / log(1 / (1 - c)))
inline std::int64_t iteration_upper_bound(double c, double V, double delta) {
  if (!(c > 0 && c < 1)) fail(ErrorKind::InvalidArgument, "c must lie in (0, 1)");
  if (!(V > 0) || !(delta > 0)) fail(ErrorKind::InvalidArgument, "V and delta must be positive");
  if (V <= delta) return 0;
  return static_cast<std::int64_t>(std::ceil(std::log(V / delta) / std::log(1.0 / (1.0 - c)) - 1e-9));
}

inline double unit_ball_volume(int d) { return std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0 + 1.0); }

inline double mixed_gap_bound(double L, double delta, int d) {
  if (!(L >= 0) || !(delta > 0) || d < 1) fail(ErrorKind::InvalidArgument, "need L >= 0, delta > 0, d >= 1");
  return L * std::pow(delta / unit_ball_volume(d), 1.0 / d);
}

// Open halfspace {x : h . (x - x_j) < best - value_j}.
inline Halfspace epigraph_cut(const Point& xj, double value_j, const Vector& hj, double best_value) {
  const double nrm = hj.norm();
  if (nrm == 0.0) fail(ErrorKind::ZeroSubgradient, "zero subgradient: the query point is optimal");
  return Halfspace(Direction(-hj), (-hj.dot(xj) - best_value + value_j) / nrm, Openness::Open);
}

// E0 as a region: lower faces closed, upper faces open.
inline std::vector<Halfspace> box_region(const Box& E0) {
  std::vector<Halfspace> out;
  for (int i = 0; i < E0.dim(); ++i) {
    Vector e = Vector::Zero(E0.dim());
    e(i) = 1.0;
    out.push_back(Halfspace::at_least(e, E0.lower(i)));
    out.push_back(Halfspace::at_most(e, E0.upper(i), Openness::Open));
  }
  return out;
}

inline Measure standard_measure(const ConstraintSet& S, const Box& E0) {
  if (S.dim() != E0.dim()) fail(ErrorKind::InvalidArgument, "constraint set and box dimensions differ");
  switch (S.kind) {
    case ConstraintSet::Kind::Continuous: return Measure::uniform(E0.polytope());
    case ConstraintSet::Kind::Lattice: return Measure::lattice(E0.polytope());
    case ConstraintSet::Kind::Mixed: return Measure::mixed(E0.polytope(), S.ints, S.conts);
  }
  fail(ErrorKind::InvalidArgument, "unknown constraint set");
}

enum class StopReason { MassBelowDelta, EmptyRegion, Budget, OptimalityCertificate };

constexpr std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::MassBelowDelta: return "mass-below-delta";
    case StopReason::EmptyRegion: return "empty-region";
    case StopReason::Budget: return "budget";
    case StopReason::OptimalityCertificate: return "optimality-certificate";
  }
  return "unknown";
}

struct Strategy {
  enum class Kind { Centerpoint, Centroid, RandomFeasible };
  Kind kind = Kind::Centerpoint;
  double eps = 0.1;
  double confidence = 0.1;
  double C = 0.5;
  std::uint64_t seed = 0;

  static Strategy centerpoint(std::uint64_t seed = 0, double eps = 0.1, double confidence = 0.1, double C = 0.5) {
    return {Kind::Centerpoint, eps, confidence, C, seed};
  }
  static Strategy centroid() { return {Kind::Centroid, 0.1, 0.1, 0.5, 0}; }
  static Strategy random_feasible(std::uint64_t seed) { return {Kind::RandomFeasible, 0.1, 0.1, 0.5, seed}; }
};

constexpr std::string_view to_string(Strategy::Kind k) {
  switch (k) {
    case Strategy::Kind::Centerpoint: return "centerpoint";
    case Strategy::Kind::Centroid: return "centroid";
    case Strategy::Kind::RandomFeasible: return "random";
  }
  return "unknown";
}

struct TraceRow {
  Point point;
  double value;
  Vector subgradient;
  double mass;     // region mass after the cut
  double mass_se;  // nonzero for sampled masses
  double depth;    // depth of the query point in the region it was chosen from
  bool depth_exact;
};

struct BoundComparison {
  std::optional<std::int64_t> upper;
  std::optional<std::int64_t> lower;
};

struct SolveReport {
  std::optional<Point> best_point;
  double best_value = std::numeric_limits<double>::infinity();
  std::size_t oracle_calls = 0;
  std::vector<TraceRow> trace;
  StopReason stop_reason = StopReason::MassBelowDelta;
  double initial_mass = 0.0;
  BoundComparison bounds;
};

namespace detail {

inline bool strictly_inside(const Measure& m, const Point& x) {
  if (!m.in_support_region(x)) return false;
  for (const auto& h : m.region())
    if (h.is_open() && !(h.slack(x) > kInteriorTol)) return false;
  return true;
}

// Moves x off open boundaries along the cut normals, continuous coordinates only.
inline bool make_interior(const Measure& m, const ConstraintSet& S, Point& x) {
  for (int it = 0; it < 16; ++it) {
    if (strictly_inside(m, x)) return true;
    if (S.kind == ConstraintSet::Kind::Lattice) return false;
    bool moved = false;
    for (const auto& h : m.region()) {
      if (h.slack(x) > kInteriorTol) continue;
      Vector dir = h.normal.coords();
      dir.head(S.ints).setZero();
      if (dir.norm() == 0) return false;
      x += kNudge * dir.normalized();
      moved = true;
      break;
    }
    if (!moved) return false;
  }
  return strictly_inside(m, x);
}

inline Polytope region_polytope(const Measure& m) {
  std::vector<Halfspace> cons = m.support_polytope()->constraints();
  for (const auto& h : m.region()) cons.push_back(h.closed());
  return Polytope(m.dim(), std::move(cons));
}

struct Pick {
  Point x;
  DepthResult depth;
};

inline std::optional<Pick> best_of(const Measure& m, const ConstraintSet& S, std::vector<Point> cands) {
  std::optional<Pick> best;
  for (auto& x : cands) {
    if (!make_interior(m, S, x)) continue;
    RngState dirs(kScoringSeed);
    Pick p{x, m.exact() ? depth(m, x) : depth_sampled(m, x, kScoringDirections, dirs)};
    if (!best || p.depth.value > best->depth.value + 1e-15 ||
        (p.depth.value >= best->depth.value - 1e-15 && lex_less(p.x, best->x)))
      best = std::move(p);
  }
  return best;
}

template <class Points>
Point nearest(const Points& pts, const Point& c) {
  const Point* best = nullptr;
  double bd = std::numeric_limits<double>::infinity();
  for (const auto& wp : pts) {
    const double dist = (wp.point - c).squaredNorm();
    if (dist < bd - 1e-15 || (dist <= bd + 1e-15 && best && lex_less(wp.point, *best))) {
      bd = dist;
      best = &wp.point;
    }
  }
  return *best;
}

inline std::optional<Point> centroid_pick(const Measure& m, const ConstraintSet& S) {
  switch (S.kind) {
    case ConstraintSet::Kind::Continuous: return centroid(m);
    case ConstraintSet::Kind::Lattice: {
      const auto& pts = m.active_points();
      if (pts.empty()) return std::nullopt;
      Point c = Point::Zero(m.dim());
      for (const auto& wp : pts) c += wp.point;
      return nearest(pts, c / static_cast<double>(pts.size()));
    }
    case ConstraintSet::Kind::Mixed: {
      const auto& fibers = m.active_fibers();
      if (fibers.empty() || m.n_cont() > 2) {
        if (m.cloud().empty()) return std::nullopt;
        Point c = Point::Zero(m.dim());
        for (const auto& y : m.cloud()) c += y;
        c /= static_cast<double>(m.cloud().size());
        std::vector<WeightedPoint> pts;
        for (const auto& y : m.cloud()) pts.push_back({y, 1.0});
        return nearest(pts, c);
      }
      const int n = m.n_int();
      Point c = Point::Zero(m.dim());
      double total = 0;
      std::vector<Point> centers;
      for (const auto& f : fibers) {
        Point x(m.dim());
        x.head(n) = f.z;
        if (m.n_cont() == 1) x(n) = 0.5 * (f.lo + f.hi);
        else {
          const Vec2 g = polygon_centroid(f.poly);
          x(n) = g.x();
          x(n + 1) = g.y();
        }
        centers.push_back(x);
        c += f.volume * x;
        total += f.volume;
      }
      c /= total;
      std::size_t arg = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < fibers.size(); ++k) {
        const double dist = (fibers[k].z - c.head(n)).squaredNorm();
        if (dist < bd - 1e-15) {
          bd = dist;
          arg = k;
        }
      }
      Point x = centers[arg];
      if (m.n_cont() == 1) {
        const auto& f = fibers[arg];
        x(n) = std::clamp(c(n), f.lo, f.hi);
        if (!strictly_inside(m, x)) x(n) = 0.5 * (f.lo + f.hi);
      }
      return x;
    }
  }
  return std::nullopt;
}

inline std::optional<Pick> choose(const Measure& m, const ConstraintSet& S, const Strategy& st, RngState& rng) {
  std::vector<Point> cands;
  switch (st.kind) {
    case Strategy::Kind::Centerpoint: {
      if (S.kind == ConstraintSet::Kind::Lattice && S.dim() == 2) {
        cands.push_back(centerpoint_lattice_2d(m).point);
        break;
      }
      if (S.kind == ConstraintSet::Kind::Continuous) cands.push_back(centroid(m));
      if (S.kind == ConstraintSet::Kind::Mixed && S.conts == 1 && S.ints <= 2) {
        try {
          cands.push_back(centerpoint_lenstra_mixed(region_polytope(m), S.ints, S.conts).point);
        } catch (const Error&) {
        }
      }
      if (S.dim() <= 3) cands.push_back(centerpoint_monte_carlo(m, S, st.eps, st.confidence, rng, st.C).point);
      break;
    }
    case Strategy::Kind::Centroid:
      if (auto c = centroid_pick(m, S)) cands.push_back(*c);
      break;
    case Strategy::Kind::RandomFeasible:
      cands.push_back(sample(m, rng, 1).front());
      break;
  }
  return best_of(m, S, std::move(cands));
}

inline double helly_contraction(const ConstraintSet& S) {
  const DepthGuarantee g = depth_guarantee(S);
  return g.grunbaum_floor ? *g.grunbaum_floor : g.floor;
}

}  // namespace detail

// Cutting-plane minimization of a convex function over S within E0. The region
// is E0 intersected with the epigraph cuts of all queries, recomputed with the
// current best value; the method stops once its mass drops to delta.
inline SolveReport solve(FirstOrderOracle& o, const ConstraintSet& S, const Measure& nu, const Box& E0, double delta, const Strategy& st,
                         int budget = kDefaultBudget) {
  if (o.dim() != S.dim() || nu.dim() != S.dim() || E0.dim() != S.dim()) fail(ErrorKind::InvalidArgument, "oracle, constraint set, measure and box dimensions differ");
  if (!(delta > 0)) fail(ErrorKind::InvalidArgument, "delta must be positive");
  if (budget < 1) fail(ErrorKind::InvalidArgument, "budget must be positive");
  std::optional<Measure> base;
  try {
    base = nu.restrict(box_region(E0));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EmptyRegion) throw;
    fail(ErrorKind::InfeasibleStart, "E0 carries no mass on S");
  }
  SolveReport rep;
  rep.initial_mass = base->total_mass();
  rep.bounds.upper = iteration_upper_bound(detail::helly_contraction(S), rep.initial_mass, delta);
  if (o.kind() == FirstOrderOracle::Kind::Adversarial) rep.bounds.lower = o.adversary()->lower_bound(delta);

  auto below = [&](const Measure& m) {
    return m.exact() ? m.total_mass() <= delta : m.total_mass() + 3.0 * m.total_std_error() <= delta;
  };
  if (below(*base)) {
    rep.stop_reason = StopReason::MassBelowDelta;
    return rep;
  }
  const RngState root(st.seed);
  Measure current = *base;
  struct Query {
    Point x;
    double value;
    Vector h;
  };
  std::vector<Query> hist;
  for (std::uint64_t iter = 0;; ++iter) {
    if (rep.oracle_calls >= static_cast<std::size_t>(budget)) {
      rep.stop_reason = StopReason::Budget;
      break;
    }
    RngState rng = root.substream(iter);
    const auto pick = detail::choose(current, S, st, rng);
    if (!pick) {
      rep.stop_reason = StopReason::EmptyRegion;
      break;
    }
    auto [value, h] = o.evaluate(pick->x);
    ++rep.oracle_calls;
    if (!rep.best_point || value < rep.best_value) {
      rep.best_value = value;
      rep.best_point = pick->x;
    }
    TraceRow row{pick->x, value, h, current.total_mass(), current.total_std_error(), pick->depth.value, pick->depth.exact};
    if (h.norm() == 0.0) {
      rep.trace.push_back(row);
      rep.stop_reason = StopReason::OptimalityCertificate;
      break;
    }
    hist.push_back({pick->x, value, h});
    std::vector<Halfspace> cuts;
    for (const auto& q : hist) cuts.push_back(epigraph_cut(q.x, q.value, q.h, rep.best_value));
    try {
      current = base->restrict(cuts);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EmptyRegion) throw;
      row.mass = 0.0;
      row.mass_se = 0.0;
      rep.trace.push_back(row);
      rep.stop_reason = StopReason::EmptyRegion;
      break;
    }
    row.mass = current.total_mass();
    row.mass_se = current.total_std_error();
    rep.trace.push_back(row);
    if (below(current)) {
      rep.stop_reason = StopReason::MassBelowDelta;
      break;
    }
  }
  return rep;
}

inline SolveReport solve(FirstOrderOracle& o, const ConstraintSet& S, const Box& E0, double delta, const Strategy& st, int budget = kDefaultBudget) {
  std::optional<Measure> nu;
  try {
    nu = standard_measure(S, E0);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EmptyRegion) throw;
    fail(ErrorKind::InfeasibleStart, "E0 carries no mass on S");
  }
  return solve(o, S, *nu, E0, delta, st, budget);
}

}  // namespace cpc

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cpc/depth.hpp"
#include "cpc/error.hpp"
#include "cpc/geom.hpp"
#include "cpc/measure.hpp"
#include "cpc/rng.hpp"

namespace cpc {

// S = Z^ints x R^conts.
struct ConstraintSet {
  enum class Kind { Continuous, Lattice, Mixed };
  Kind kind = Kind::Continuous;
  int ints = 0;
  int conts = 0;

  static ConstraintSet continuous(int dim) { return make(Kind::Continuous, 0, dim); }
  static ConstraintSet lattice(int n) { return make(Kind::Lattice, n, 0); }
  static ConstraintSet mixed(int n, int d) { return make(Kind::Mixed, n, d); }

  int dim() const { return ints + conts; }

  bool contains(const Point& x) const {
    if (x.size() != dim()) return false;
    for (int i = 0; i < ints; ++i)
      if (x(i) != std::round(x(i))) return false;
    return x.allFinite();
  }

 private:
  static ConstraintSet make(Kind k, int n, int d) {
    if (n < 0 || d < 0 || n + d < 1) fail(ErrorKind::InvalidArgument, "constraint set dimensions must be >= 1");
    if (k == Kind::Mixed && (n < 1 || d < 1)) fail(ErrorKind::InvalidArgument, "mixed constraint set needs n, d >= 1");
    ConstraintSet s;
    s.kind = k;
    s.ints = n;
    s.conts = d;
    return s;
  }
};

constexpr std::string_view to_string(ConstraintSet::Kind k) {
  switch (k) {
    case ConstraintSet::Kind::Continuous: return "continuous";
    case ConstraintSet::Kind::Lattice: return "lattice";
    case ConstraintSet::Kind::Mixed: return "mixed";
  }
  return "unknown";
}

struct DepthGuarantee {
  std::int64_t helly;
  double floor;
  std::optional<double> grunbaum_floor;
};

inline DepthGuarantee depth_guarantee(const ConstraintSet& s) {
  DepthGuarantee g{};
  switch (s.kind) {
    case ConstraintSet::Kind::Continuous: {
      const double n = s.conts;
      g.helly = s.conts + 1;
      g.grunbaum_floor = std::pow(n / (n + 1), n);
      break;
    }
    case ConstraintSet::Kind::Lattice:
      g.helly = std::int64_t{1} << s.ints;
      break;
    case ConstraintSet::Kind::Mixed:
      g.helly = (std::int64_t{1} << s.ints) * (s.conts + 1);
      break;
  }
  g.floor = 1.0 / static_cast<double>(g.helly);
  return g;
}

// Depth floor of the recursive mixed construction: 1 / (2^(n^2) (d+1)^(n+1)).
inline double lenstra_depth_floor(int n, int d) {
  return 1.0 / (std::pow(2.0, n * n) * std::pow(d + 1.0, n + 1));
}

struct CenterpointResult {
  Point point;
  DepthResult depth;
  std::string method;
  std::size_t samples_used = 0;
  DepthGuarantee guarantee;
  std::optional<DepthResult> measure_depth;
};

inline double mc_sample_size_real(double eps, double delta, int vc_dim, double C = 0.5) {
  if (!(eps > 0 && eps <= 1) || !(delta > 0 && delta < 1)) fail(ErrorKind::InvalidArgument, "eps and delta must lie in (0, 1)");
  if (!(C > 0)) fail(ErrorKind::InvalidArgument, "C must be positive");
  return C / (eps * eps) * (vc_dim + std::log(1.0 / delta));
}

inline std::size_t mc_sample_size(double eps, double delta, int vc_dim, double C = 0.5) {
  return static_cast<std::size_t>(std::ceil(mc_sample_size_real(eps, delta, vc_dim, C) - 1e-9));
}

// Centroid of the support intersected with the region. Exact in dimensions 1
// and 2; the mean of the measure's fixed sample cloud otherwise.
inline Point centroid(const Measure& m) {
  if (m.family() != MeasureFamily::UniformPolytope) fail(ErrorKind::InvalidArgument, "centroid needs a uniform measure");
  if (m.dim() == 1) {
    auto [lo, hi] = m.active_interval();
    return make_point({0.5 * (lo + hi)});
  }
  if (m.dim() == 2) {
    const Vec2 c = polygon_centroid(m.active_polygon());
    return make_point({c.x(), c.y()});
  }
  const auto& cloud = m.cloud();
  if (cloud.empty()) fail(ErrorKind::EmptyRegion, "centroid of an empty region");
  Point c = Point::Zero(m.dim());
  for (const auto& y : cloud) c += y;
  return c / static_cast<double>(cloud.size());
}

namespace detail {

// Depth regions of a weighted planar point set: D(t) is the set of points all
// of whose closed halfplanes carry weight >= t. D(t) is cut out by the lines
// through point pairs whose swap brackets t, plus fill directions so that no
// constant arc of the k-th level exceeds pi/4.
class DepthRegions {
 public:
  DepthRegions(const std::vector<Vec2>& pts, const std::vector<double>& w) {
    for (std::size_t k = 0; k < pts.size(); ++k) {
      bool merged = false;
      for (std::size_t q = 0; q < p_.size(); ++q)
        if ((p_[q] - pts[k]).norm() <= kPointTol) {
          w_[q] += w[k];
          merged = true;
          break;
        }
      if (!merged) {
        p_.push_back(pts[k]);
        w_.push_back(w[k]);
      }
      total_ += w[k];
    }
    build();
  }

  double total() const { return total_; }
  const std::vector<double>& levels() const { return levels_; }

  Polygon region(double t, const std::vector<Halfspace>& extra) const {
    const double tiny = 1e-12 * total_;
    Polygon poly = bbox_;
    auto cut = [&](const Vec2& u, double c) {
      Vector a(2);
      a << u.x(), u.y();
      poly = clip_polygon(poly, Halfspace::at_most(a, c + kTol));
    };
    for (const auto& h : extra) {
      poly = clip_polygon(poly, h);
      if (poly.empty()) return poly;
    }
    for (const auto& r : recs_) {
      const bool lft = r.left < t - tiny && t <= r.left + r.col + tiny;
      const bool rgt = r.right < t - tiny && t <= r.right + r.col + tiny;
      if (!lft && !rgt) continue;
      const Vec2 d = p_[r.j] - p_[r.i];
      const Vec2 u = Vec2(-d.y(), d.x()).normalized();
      if (lft) cut(u, u.dot(p_[r.i]));
      if (rgt) cut(-u, -u.dot(p_[r.i]));
      if (poly.empty()) return poly;
    }
    for (int f = 0; f < 8; ++f) {
      const Vec2 u(std::cos(f * kPi / 4), std::sin(f * kPi / 4));
      std::vector<std::pair<double, double>> proj;
      for (std::size_t k = 0; k < p_.size(); ++k) proj.emplace_back(u.dot(p_[k]), w_[k]);
      std::sort(proj.begin(), proj.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
      double acc = 0.0, level = proj.back().first;
      for (const auto& [v, wt] : proj) {
        acc += wt;
        if (acc >= t - tiny) {
          level = v;
          break;
        }
      }
      cut(u, level);
      if (poly.empty()) return poly;
    }
    return poly;
  }

  // Largest level with a nonempty region (intersected with extra).
  std::optional<std::pair<double, Polygon>> deepest(const std::vector<Halfspace>& extra) const {
    std::size_t lo = 0, hi = levels_.size();
    Polygon best;
    if (levels_.empty()) return std::nullopt;
    best = region(levels_[0], extra);
    if (best.empty()) return std::nullopt;
    // invariant: region(levels_[lo]) nonempty, region(levels_[hi]) empty or hi == size
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      Polygon r = region(levels_[mid], extra);
      if (r.empty()) hi = mid;
      else {
        lo = mid;
        best = std::move(r);
      }
    }
    return std::make_pair(levels_[lo], std::move(best));
  }

 private:
  struct Rec {
    std::uint32_t i, j;
    double left, col, right;
  };

  void build() {
    const std::size_t m = p_.size();
    if (m == 0) return;
    auto [lo, hi] = std::pair<Vec2, Vec2>(p_[0], p_[0]);
    for (const auto& p : p_) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    lo.array() -= 1e-6;
    hi.array() += 1e-6;
    bbox_ = Polygon::hull({lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())});
    std::vector<double> lv;
    constexpr double atol = 1e-12;
    std::vector<double> th3, cw3;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<std::pair<double, double>> ang;
      for (std::size_t k = 0; k < m; ++k)
        if (k != i) ang.emplace_back(std::atan2(p_[k].y() - p_[i].y(), p_[k].x() - p_[i].x()), w_[k]);
      std::sort(ang.begin(), ang.end());
      th3.assign(1, -1e300);
      cw3.assign(1, 0.0);
      for (double shift : {-kTwoPi, 0.0, kTwoPi})
        for (const auto& [a, wt] : ang) {
          th3.push_back(a + shift);
          cw3.push_back(cw3.back() + wt);
        }
      // weight of angles in [a, b]
      auto wsum = [&](double a, double b) {
        const auto l = std::lower_bound(th3.begin(), th3.end(), a) - th3.begin();
        const auto r = std::upper_bound(th3.begin(), th3.end(), b) - th3.begin();
        return r > l ? cw3[static_cast<std::size_t>(r - 1)] - cw3[static_cast<std::size_t>(l - 1)] : 0.0;
      };
      for (std::size_t j = i + 1; j < m; ++j) {
        const double tj = std::atan2(p_[j].y() - p_[i].y(), p_[j].x() - p_[i].x());
        const double col = w_[i] + wsum(tj - atol, tj + atol) + wsum(tj + kPi - atol, tj + kPi + atol);
        const double left = wsum(tj + atol, tj + kPi - atol);
        const double right = std::max(0.0, total_ - left - col);
        recs_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), left, col, right});
        lv.push_back(left + col);
        lv.push_back(right + col);
      }
    }
    for (int f = 0; f < 8; ++f) {
      const Vec2 u(std::cos(f * kPi / 4), std::sin(f * kPi / 4));
      std::vector<std::pair<double, double>> proj;
      for (std::size_t k = 0; k < m; ++k) proj.emplace_back(u.dot(p_[k]), w_[k]);
      std::sort(proj.begin(), proj.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
      double acc = 0.0;
      for (const auto& pr : proj) lv.push_back(acc += pr.second);
    }
    std::sort(lv.begin(), lv.end());
    for (double v : lv)
      if (levels_.empty() || v - levels_.back() > 1e-12 * total_) levels_.push_back(v);
  }

  std::vector<Vec2> p_;
  std::vector<double> w_;
  double total_ = 0.0;
  std::vector<Rec> recs_;
  std::vector<double> levels_;
  Polygon bbox_;
};

inline Vec2 vertex_average(const Polygon& p) {
  Vec2 c = Vec2::Zero();
  for (const auto& v : p.vertices()) c += v;
  return c / static_cast<double>(p.size());
}

struct Scored {
  Point point;
  DepthResult depth;
};

inline bool better(const Scored& a, const std::optional<Scored>& b) {
  if (!b) return true;
  if (a.depth.value > b->depth.value + 1e-15) return true;
  if (a.depth.value < b->depth.value - 1e-15) return false;
  return lex_less(a.point, b->point);
}

// Deepest point of a weighted planar point set, optionally on the line x_0 = line_z.
inline std::optional<Scored> deepest_point_2d(const std::vector<WeightedPoint>& pts, std::optional<double> line_z = std::nullopt) {
  std::vector<Vec2> p;
  std::vector<double> w;
  for (const auto& wp : pts) {
    p.emplace_back(wp.point(0), wp.point(1));
    w.push_back(wp.weight);
  }
  const DepthRegions regions(p, w);
  std::vector<Halfspace> extra;
  if (line_z) {
    extra.push_back(Halfspace::at_least(make_point({1, 0}), *line_z - kTol));
    extra.push_back(Halfspace::at_most(make_point({1, 0}), *line_z + kTol));
  }
  auto top = regions.deepest(extra);
  if (!top) return std::nullopt;
  const auto& levels = regions.levels();
  std::size_t idx = static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), top->first - 1e-12 * regions.total()) - levels.begin());
  std::optional<Scored> best;
  Polygon poly = top->second;
  for (int step = 0; step < 4; ++step) {
    if (!poly.empty()) {
      Vec2 c = vertex_average(poly);
      Point x = make_point({c.x(), c.y()});
      if (line_z) {
        auto [lo, hi] = poly.bounding_box();
        x = make_point({*line_z, 0.5 * (lo.y() + hi.y())});
      }
      Scored s{x, depth_finite(pts, x)};
      if (better(s, best)) best = s;
      if (s.depth.value * regions.total() >= levels[idx] - 1e-9 * regions.total()) break;
    }
    if (idx == 0) break;
    --idx;
    poly = regions.region(levels[idx], extra);
  }
  return best;
}

}  // namespace detail

inline constexpr std::size_t kScreenDirections = 256;

// Monte Carlo eps-centerpoint: maximizes depth on the empirical measure of
// N = mc_sample_size(eps, delta, dim + 1, C) draws.
inline CenterpointResult centerpoint_monte_carlo(const Measure& m, const ConstraintSet& S, double eps, double delta, RngState& rng,
                                                 double C = 0.5, std::size_t candidate_cap = 1'000'000) {
  if (S.dim() != m.dim()) fail(ErrorKind::InvalidArgument, "constraint set and measure dimensions differ");
  if (S.dim() > 3) fail(ErrorKind::DimensionTooLarge, "Monte Carlo centerpoint supports dimension <= 3");
  const std::size_t N = mc_sample_size(eps, delta, S.dim() + 1, C);
  const auto draws = sample(m, rng, N);
  std::vector<WeightedPoint> pts;
  for (const auto& y : draws) pts.push_back({y, 1.0});
  std::optional<detail::Scored> best;
  // In 3D candidates are screened on a fixed direction set; the winner is scored exactly.
  std::vector<Vector> screen;
  if (S.dim() == 3) {
    RngState dirs = rng.substream(0x3d);
    for (std::size_t k = 0; k < kScreenDirections; ++k) screen.push_back(make_point({dirs.normal(), dirs.normal(), dirs.normal()}));
  }
  auto consider = [&](const Point& x) {
    if (screen.empty()) {
      detail::Scored s{x, depth_finite(pts, x)};
      if (detail::better(s, best)) best = std::move(s);
      return;
    }
    double lo = 1.0;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < screen.size(); ++k) {
      std::size_t c = 0;
      for (const auto& wp : pts) c += screen[k].dot(wp.point - x) >= 0;
      const double v = static_cast<double>(c) / static_cast<double>(pts.size());
      if (v < lo) {
        lo = v;
        arg = k;
      }
    }
    detail::Scored s{x, DepthResult{lo, Direction(screen[arg]), false, 1.0}};
    if (detail::better(s, best)) best = std::move(s);
  };
  std::string method = "monte-carlo";
  if (S.kind == ConstraintSet::Kind::Continuous) {
    for (const auto& wp : pts) consider(wp.point);
    if (S.dim() == 2) {
      if (auto s = detail::deepest_point_2d(pts)) consider(s->point);
    } else if (S.dim() == 1) {
      std::vector<double> ys;
      for (const auto& wp : pts) ys.push_back(wp.point(0));
      std::sort(ys.begin(), ys.end());
      consider(make_point({0.5 * (ys[(ys.size() - 1) / 2] + ys[ys.size() / 2])}));
    } else {
      Point mean = Point::Zero(S.dim());
      for (const auto& wp : pts) mean += wp.point;
      consider(mean / static_cast<double>(pts.size()));
      method = "monte-carlo-heuristic";
    }
  } else {
    // Integer blocks in the sample's bounding box.
    Point lo = pts.front().point, hi = lo;
    for (const auto& wp : pts) {
      lo = lo.cwiseMin(wp.point);
      hi = hi.cwiseMax(wp.point);
    }
    const int n = S.ints;
    double count = 1.0;
    for (int i = 0; i < n; ++i) count *= std::round(hi(i)) - std::round(lo(i)) + 1;
    if (count > static_cast<double>(candidate_cap)) fail(ErrorKind::BudgetExceeded, "candidate count exceeds cap");
    Point z = lo.head(n).array().round();
    while (true) {
      if (S.kind == ConstraintSet::Kind::Lattice) {
        consider(z);
      } else if (S.ints == 1 && S.conts == 1) {
        if (auto s = detail::deepest_point_2d(pts, z(0))) consider(s->point);
      } else {
        method = "monte-carlo-heuristic";
        std::vector<Point> ys;
        Point mean = Point::Zero(S.conts);
        for (const auto& wp : pts) mean += wp.point.tail(S.conts);
        ys.push_back(mean / static_cast<double>(pts.size()));
        for (const auto& wp : pts)
          if ((wp.point.head(n) - z).norm() == 0) ys.push_back(wp.point.tail(S.conts));
        for (const auto& y : ys) {
          Point x(S.dim());
          x.head(n) = z;
          x.tail(S.conts) = y;
          consider(x);
        }
      }
      int i = n - 1;
      while (i >= 0 && z(i) >= std::round(hi(i))) {
        z(i) = std::round(lo(i));
        --i;
      }
      if (i < 0) break;
      z(i) += 1.0;
    }
  }
  if (!screen.empty()) best->depth = depth_finite(pts, best->point);
  return {best->point, best->depth, method, N, depth_guarantee(S), std::nullopt};
}

// Exact centerpoint of a 2D lattice measure: the lattice point of maximal depth,
// lexicographically smallest on ties. With prune, candidates are visited in
// order of a cheap upper bound and the scan stops once no candidate can win.
inline CenterpointResult centerpoint_lattice_2d(const Measure& m, bool prune = false) {
  if (m.family() != MeasureFamily::LatticeCounting || m.dim() != 2) fail(ErrorKind::InvalidArgument, "needs a 2D lattice measure");
  const auto& pts = m.active_points();
  if (pts.empty()) fail(ErrorKind::EmptyLattice, "no lattice points");
  std::optional<detail::Scored> best;
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> ub(pts.size(), 1.0);
  if (prune) {
    for (std::size_t k = 0; k < pts.size(); ++k)
      for (int f = 0; f < 8; ++f)
        ub[k] = std::min(ub[k], halfspace_mass(m, Halfspace::through(Direction::from_angle(f * kPi / 4 + 0.1), pts[k].point)).value);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ub[a] > ub[b]; });
  }
  for (std::size_t k : order) {
    const Point& p = pts[k].point;
    if (prune && best) {
      if (ub[k] < best->depth.value - 1e-15) break;
      if (ub[k] <= best->depth.value + 1e-15 && !lex_less(p, best->point)) continue;
    }
    detail::Scored s{p, min_direction_2d(m, p)};
    if (detail::better(s, best)) best = std::move(s);
  }
  return {best->point, best->depth, prune ? "exact2d-int-pruned" : "exact2d-int", 0, depth_guarantee(ConstraintSet::lattice(2)), best->depth};
}

inline CenterpointResult centerpoint_2d_integer(const Polytope& P, bool prune = false) {
  if (P.dim() != 2) fail(ErrorKind::InvalidArgument, "needs a 2D polytope");
  if (enumerate_lattice_points(P).empty()) fail(ErrorKind::EmptyLattice, "polytope contains no lattice points");
  return centerpoint_lattice_2d(Measure::lattice(P), prune);
}

namespace detail {

inline std::optional<std::pair<double, double>> interval_1d(const Polytope& P) {
  if (P.empty()) return std::nullopt;
  auto [lo, hi] = P.bounding_box();
  if (hi(0) - lo(0) <= 0) return std::nullopt;
  return std::make_pair(lo(0), hi(0));
}

// Slice of a (k+1)-dimensional polytope at integer coordinate 0 fixed to t.
inline std::optional<Polytope> slice_first(const Polytope& P, double t) {
  const Eigen::MatrixXd A = P.a_matrix();
  const Eigen::VectorXd b = P.b_vector();
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    std::vector<double> r;
    double nrm = 0.0;
    for (Eigen::Index j = 1; j < A.cols(); ++j) {
      r.push_back(A(i, j));
      nrm += A(i, j) * A(i, j);
    }
    const double rhs = b(i) - A(i, 0) * t;
    if (std::sqrt(nrm) <= 1e-14) {
      if (rhs < -kTol) return std::nullopt;
      continue;
    }
    r.push_back(rhs);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) return std::nullopt;
  Polytope s = Polytope::from_rows(rows);
  if (s.empty()) return std::nullopt;
  return s;
}

// Polytope in coordinates (w1, y) of the slice u . z = i, with z = c0 w1 + c1 i.
inline std::optional<Polytope> slice_direction(const Polytope& P, const Vec2& c0, const Vec2& c1, double i) {
  const Eigen::MatrixXd A = P.a_matrix();
  const Eigen::VectorXd b = P.b_vector();
  std::vector<std::vector<double>> rows;
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    const Vec2 az(A(r, 0), A(r, 1));
    const double a1 = az.dot(c0), ay = A(r, 2);
    const double rhs = b(r) - az.dot(c1) * i;
    if (std::hypot(a1, ay) <= 1e-14) {
      if (rhs < -kTol) return std::nullopt;
      continue;
    }
    rows.push_back({a1, ay, rhs});
  }
  if (rows.empty()) return std::nullopt;
  Polytope s = Polytope::from_rows(rows);
  if (s.empty()) return std::nullopt;
  return s;
}

inline double mixed_mass(const Polytope& P, int n) {
  const auto fibers = base_fibers(P, n, 1);
  double s = 0.0;
  for (const auto& f : fibers) s += f.volume;
  return s;
}

// Deepest point of a finite measure over Z^k x R (k = 1 exact, k = 2 heuristic y candidates).
inline std::optional<Point> brute_force_mixed(const std::vector<WeightedPoint>& aux, int k) {
  Point lo = aux.front().point, hi = lo;
  for (const auto& wp : aux) {
    lo = lo.cwiseMin(wp.point);
    hi = hi.cwiseMax(wp.point);
  }
  std::optional<Scored> best;
  auto consider = [&](const Point& x) {
    Scored s{x, depth_finite(aux, x)};
    if (better(s, best)) best = std::move(s);
  };
  if (k == 1) {
    for (double j = std::ceil(lo(0) - kTol); j <= std::floor(hi(0) + kTol); j += 1.0) {
      std::vector<double> ys;
      for (const auto& a : aux)
        if (a.point(0) == j) ys.push_back(a.point(1));
      for (std::size_t a = 0; a < aux.size(); ++a)
        for (std::size_t b = a + 1; b < aux.size(); ++b) {
          const Point& p = aux[a].point;
          const Point& q = aux[b].point;
          if (p(0) == q(0)) continue;
          ys.push_back(p(1) + (q(1) - p(1)) * (j - p(0)) / (q(0) - p(0)));
        }
      for (double y : ys) consider(make_point({j, y}));
    }
  } else {
    std::vector<double> ys;
    for (const auto& a : aux) ys.push_back(a.point(2));
    std::sort(ys.begin(), ys.end());
    const std::size_t m = ys.size();
    for (std::size_t i = 0; i + 1 < m; ++i) ys.push_back(0.5 * (ys[i] + ys[i + 1]));
    for (double j1 = std::ceil(lo(0) - kTol); j1 <= std::floor(hi(0) + kTol); j1 += 1.0)
      for (double j2 = std::ceil(lo(1) - kTol); j2 <= std::floor(hi(1) + kTol); j2 += 1.0)
        for (double y : ys) consider(make_point({j1, j2, y}));
  }
  if (!best) return std::nullopt;
  return best->point;
}

inline Point sampled_centroid(const Polytope& P) {
  const Measure m = Measure::uniform(P);
  return centroid(m);
}

// Point of the nearest nonempty fiber to c, with the continuous coordinate clamped into it.
inline std::optional<Point> round_to_fiber(const Polytope& P, int k, const Point& c) {
  const auto fibers = base_fibers(P, k, 1);
  const Fiber* best = nullptr;
  double bd = std::numeric_limits<double>::infinity();
  for (const auto& f : fibers) {
    const double dist = (f.z - c.head(k)).squaredNorm();
    if (dist < bd - 1e-12 || (dist <= bd + 1e-12 && best && lex_less(f.z, best->z))) {
      bd = dist;
      best = &f;
    }
  }
  if (!best) return std::nullopt;
  Point x(k + 1);
  x.head(k) = best->z;
  x(k) = std::clamp(c(k), best->lo, best->hi);
  return x;
}

inline std::optional<Point> lenstra_rec(const Polytope& P, int k, double omega_bar) {
  if (k == 0) {
    auto iv = interval_1d(P);
    if (!iv) return std::nullopt;
    return make_point({0.5 * (iv->first + iv->second)});
  }
  if (P.empty()) return std::nullopt;
  double width;
  std::array<std::int64_t, 2> dir{1, 0};
  if (k == 1) {
    auto [lo, hi] = P.bounding_box();
    width = hi(0) - lo(0);
  } else {
    std::vector<Vec2> proj;
    for (const auto& v : P.vertices()) proj.emplace_back(v(0), v(1));
    const auto lw = lattice_width_2d(Polygon::hull(proj));
    width = lw.width;
    dir = lw.direction;
  }
  if (width > omega_bar) {
    const Point c = k == 1 ? [&] {
      const Vec2 g = polygon_centroid(Polygon::from_polytope(P));
      return make_point({g.x(), g.y()});
    }()
                           : sampled_centroid(P);
    return round_to_fiber(P, k, c);
  }
  std::vector<WeightedPoint> aux;
  if (k == 1) {
    auto [lo, hi] = P.bounding_box();
    for (double i = std::ceil(lo(0) - kTol); i <= std::floor(hi(0) + kTol); i += 1.0) {
      auto s = slice_first(P, i);
      if (!s) continue;
      auto iv = interval_1d(*s);
      if (!iv) continue;
      aux.push_back({make_point({i, 0.5 * (iv->first + iv->second)}), iv->second - iv->first});
    }
  } else {
    const Eigen::Matrix2d U = unimodular_completion(dir);
    const Eigen::Matrix2d Ui = U.inverse().array().round().matrix();
    const Vec2 c0 = Ui.col(0), c1 = Ui.col(1);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& v : P.vertices()) {
      const double s = dir[0] * v(0) + dir[1] * v(1);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    for (double i = std::ceil(lo - kTol); i <= std::floor(hi + kTol); i += 1.0) {
      auto s = slice_direction(P, c0, c1, i);
      if (!s) continue;
      const double mass = mixed_mass(*s, 1);
      if (!(mass > 0)) continue;
      auto sub = lenstra_rec(*s, 1, omega_bar);
      if (!sub) continue;
      const Vec2 z = c0 * (*sub)(0) + c1 * i;
      aux.push_back({make_point({std::round(z.x()), std::round(z.y()), (*sub)(1)}), mass});
    }
  }
  if (aux.empty()) return std::nullopt;
  return brute_force_mixed(aux, k);
}

}  // namespace detail

inline constexpr double kDefaultOmegaBar = 64.0;

// Recursive mixed-integer centerpoint for n in {1, 2}, d = 1 (integer block first).
inline CenterpointResult centerpoint_lenstra_mixed(const Polytope& P, int n, int d, double omega_bar = kDefaultOmegaBar) {
  if (d != 1 || n < 1 || n > 2) fail(ErrorKind::InvalidArgument, "recursive mixed centerpoint supports n in {1, 2} and d = 1");
  if (P.dim() != n + d) fail(ErrorKind::InvalidArgument, "polytope dimension must equal n + d");
  if (detail::base_fibers(P, n, d).empty()) fail(ErrorKind::EmptyLattice, "no integer fiber meets the polytope");
  auto x = detail::lenstra_rec(P, n, omega_bar);
  if (!x) fail(ErrorKind::EmptyLattice, "no integer fiber meets the polytope");
  const Measure m = Measure::mixed(P, n, d);
  const DepthResult dr = depth(m, *x);
  return {*x, dr, "lenstra", 0, depth_guarantee(ConstraintSet::mixed(n, d)), dr};
}

}  // namespace cpc

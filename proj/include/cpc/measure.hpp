#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cpc/error.hpp"
#include "cpc/geom.hpp"
#include "cpc/rng.hpp"

namespace cpc {

enum class MeasureFamily { FinitePointMass, UniformPolytope, LatticeCounting, MixedInteger };

constexpr std::string_view to_string(MeasureFamily f) {
  switch (f) {
    case MeasureFamily::FinitePointMass: return "finite";
    case MeasureFamily::UniformPolytope: return "uniform";
    case MeasureFamily::LatticeCounting: return "lattice";
    case MeasureFamily::MixedInteger: return "mixed";
  }
  return "unknown";
}

struct WeightedPoint {
  Point point;
  double weight = 1.0;
};

struct MassEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool estimate_only = false;
};

// Sign tolerance for point masses against halfspace boundaries.
inline constexpr double kPointTol = 1e-12;
// Size of the fixed sample cloud used by the Monte Carlo mass paths.
inline constexpr std::size_t kCloudSize = 20000;
inline constexpr std::size_t kRejectionLimit = 1'000'000;

// One integer fiber {z} x slice of a mixed-integer support. The slice is an
// interval for d == 1 and a polygon for d == 2.
struct Fiber {
  Point z;
  double lo = 0.0, hi = 0.0;
  Polygon poly;
  double volume = 0.0;
};

namespace detail {

// Restriction of h to the fiber at z: n_y . y >= offset - n_z . z.
// Returns 1 if the whole fiber is kept, 0 if it is dropped, -1 otherwise.
inline int fiber_side(const Halfspace& h, const Point& z, int n, Vector& ny, double& rhs) {
  const Vector& u = h.normal.coords();
  ny = u.tail(u.size() - n);
  rhs = h.offset - u.head(n).dot(z);
  if (ny.norm() <= 1e-12) {
    const bool keep = h.is_open() ? -rhs > kPointTol : -rhs >= -kPointTol;
    return keep ? 1 : 0;
  }
  return -1;
}

inline Fiber clip_fiber(const Fiber& f, const Halfspace& h, int n, int d) {
  Vector ny;
  double rhs;
  const int side = fiber_side(h, f.z, n, ny, rhs);
  if (side == 1) return f;
  Fiber out = f;
  if (side == 0) {
    out.volume = 0.0;
    out.hi = out.lo;
    out.poly = Polygon();
    return out;
  }
  if (d == 1) {
    const double c = rhs / ny(0);
    if (ny(0) > 0) out.lo = std::max(out.lo, c);
    else out.hi = std::min(out.hi, c);
    if (out.hi < out.lo) out.hi = out.lo;
    out.volume = out.hi - out.lo;
  } else {
    out.poly = clip_polygon(out.poly, Halfspace::at_least(ny, rhs));
    out.volume = polygon_area(out.poly);
  }
  return out;
}

inline std::vector<Fiber> base_fibers(const Polytope& P, int n, int d) {
  std::vector<Fiber> out;
  if (P.empty()) return out;
  auto [lo, hi] = P.bounding_box();
  std::vector<double> first(static_cast<std::size_t>(n)), last(static_cast<std::size_t>(n));
  double count = 1.0;
  for (int i = 0; i < n; ++i) {
    first[static_cast<std::size_t>(i)] = std::ceil(lo(i) - kTol);
    last[static_cast<std::size_t>(i)] = std::floor(hi(i) + kTol);
    count *= std::max(0.0, last[static_cast<std::size_t>(i)] - first[static_cast<std::size_t>(i)] + 1);
  }
  if (count > 1e6) fail(ErrorKind::BudgetExceeded, "too many integer fibers");
  if (count <= 0) return out;
  const Eigen::MatrixXd A = P.a_matrix();
  const Eigen::VectorXd b = P.b_vector();
  Point z(n);
  for (int i = 0; i < n; ++i) z(i) = first[static_cast<std::size_t>(i)];
  while (true) {
    Eigen::MatrixXd Ay = A.rightCols(d);
    Eigen::VectorXd by = b - A.leftCols(n) * z;
    if (normalize_rows(Ay, by)) {
      Fiber f;
      f.z = z;
      if (d == 1) {
        double l = -std::numeric_limits<double>::infinity(), h = -l;
        for (Eigen::Index i = 0; i < Ay.rows(); ++i) {
          if (Ay(i, 0) > 0) h = std::min(h, by(i) / Ay(i, 0));
          else l = std::max(l, by(i) / Ay(i, 0));
        }
        if (std::isfinite(l) && std::isfinite(h) && h > l) {
          f.lo = l;
          f.hi = h;
          f.volume = h - l;
        }
      } else {
        std::vector<Vec2> pts;
        for (const auto& v : vertices_of(Ay, by)) pts.emplace_back(v(0), v(1));
        f.poly = Polygon::hull(std::move(pts));
        f.volume = polygon_area(f.poly);
      }
      if (f.volume > 0) out.push_back(std::move(f));
    }
    int i = n - 1;
    while (i >= 0 && z(i) >= last[static_cast<std::size_t>(i)]) {
      z(i) = first[static_cast<std::size_t>(i)];
      --i;
    }
    if (i < 0) break;
    z(i) += 1.0;
  }
  return out;
}

inline Vec2 sample_in_polygon(const Polygon& poly, RngState& rng) {
  const auto& v = poly.vertices();
  const double total = polygon_area(poly);
  double r = rng.uniform(0.0, total);
  std::size_t k = 1;
  for (; k + 1 < v.size(); ++k) {
    const Vec2 a = v[k] - v[0], b = v[k + 1] - v[0];
    const double t = 0.5 * std::abs(a.x() * b.y() - a.y() * b.x());
    if (r <= t || k + 2 == v.size()) break;
    r -= t;
  }
  double s = rng.uniform(), t = rng.uniform();
  if (s + t > 1.0) {
    s = 1.0 - s;
    t = 1.0 - t;
  }
  return v[0] + s * (v[k] - v[0]) + t * (v[k + 1] - v[0]);
}

}  // namespace detail

// Measure over one of four families, optionally restricted to a region given
// by halfspace cuts. Immutable; restriction returns a new measure.
class Measure {
 public:
  static Measure finite(std::vector<WeightedPoint> pts) {
    if (pts.empty()) fail(ErrorKind::InvalidArgument, "finite measure needs at least one point");
    const auto dim = pts.front().point.size();
    for (const auto& p : pts) {
      if (p.point.size() != dim) fail(ErrorKind::InvalidArgument, "points differ in dimension");
      if (!(p.weight > 0.0) || !std::isfinite(p.weight)) fail(ErrorKind::InvalidArgument, "point weights must be positive");
      if (!p.point.allFinite()) fail(ErrorKind::InvalidArgument, "point coordinates must be finite");
    }
    Measure m(MeasureFamily::FinitePointMass, static_cast<int>(dim));
    auto base = std::make_shared<Base>();
    base->points = std::move(pts);
    m.base_ = std::move(base);
    m.refresh();
    return m;
  }

  static Measure uniform(Polytope p) {
    Measure m(MeasureFamily::UniformPolytope, p.dim());
    auto base = std::make_shared<Base>();
    base->poly = std::make_shared<Polytope>(std::move(p));
    if (m.dim_ == 2) base->polygon = Polygon::from_polytope(*base->poly);
    m.base_ = std::move(base);
    m.refresh();
    return m;
  }

  static Measure lattice(Polytope p, std::size_t cap = kDefaultLatticeCap) {
    Measure m(MeasureFamily::LatticeCounting, p.dim());
    auto base = std::make_shared<Base>();
    for (auto& q : enumerate_lattice_points(p, cap)) base->points.push_back({std::move(q), 1.0});
    base->poly = std::make_shared<Polytope>(std::move(p));
    m.base_ = std::move(base);
    m.refresh();
    return m;
  }

  // Integer block first: coordinates 0..n-1 are integral, n..n+d-1 continuous.
  static Measure mixed(Polytope p, int n, int d) {
    if (n < 1 || d < 1) fail(ErrorKind::InvalidArgument, "mixed measure needs n >= 1 and d >= 1");
    if (p.dim() != n + d) fail(ErrorKind::InvalidArgument, "mixed measure dimension must equal n + d");
    Measure m(MeasureFamily::MixedInteger, p.dim());
    m.n_ = n;
    m.d_ = d;
    auto base = std::make_shared<Base>();
    if (d <= 2) base->fibers = detail::base_fibers(p, n, d);
    base->poly = std::make_shared<Polytope>(std::move(p));
    m.base_ = std::move(base);
    m.refresh();
    return m;
  }

  MeasureFamily family() const { return family_; }
  int dim() const { return dim_; }
  int n_int() const { return n_; }
  int n_cont() const { return d_; }
  const Polytope* support_polytope() const { return base_->poly.get(); }
  const std::vector<Halfspace>& region() const { return region_; }

  // Unnormalized mass of support intersected with the region.
  double total_mass() const { return total_; }
  double total_std_error() const { return total_se_; }
  bool exact() const { return cloud_.empty(); }

  const std::vector<WeightedPoint>& active_points() const { return active_; }
  const Polygon& active_polygon() const { return polygon_; }
  std::pair<double, double> active_interval() const { return {ilo_, ihi_}; }
  const std::vector<Fiber>& active_fibers() const { return fibers_; }
  const std::vector<Point>& cloud() const { return cloud_; }

  bool in_region(const Point& y) const {
    const double tol = is_discrete() ? kPointTol : 0.0;
    for (const auto& h : region_)
      if (!h.contains(y, tol)) return false;
    return true;
  }

  bool is_discrete() const {
    return family_ == MeasureFamily::FinitePointMass || family_ == MeasureFamily::LatticeCounting;
  }

  // Membership of y in the support polytope (integrality for the integer block) and the region.
  bool in_support_region(const Point& y) const {
    if (base_->poly && !base_->poly->contains(y)) return false;
    if (family_ == MeasureFamily::MixedInteger)
      for (int i = 0; i < n_; ++i)
        if (y(i) != std::round(y(i))) return false;
    if (family_ == MeasureFamily::LatticeCounting)
      for (int i = 0; i < dim_; ++i)
        if (y(i) != std::round(y(i))) return false;
    return in_region(y);
  }

  MassEstimate unnormalized_mass(const Halfspace& h) const {
    if (h.dim() != dim_) fail(ErrorKind::InvalidArgument, "halfspace dimension mismatch");
    if (!cloud_.empty()) {
      std::size_t k = 0;
      for (const auto& y : cloud_)
        if (h.contains(y, 0.0)) ++k;
      const double p = static_cast<double>(k) / static_cast<double>(cloud_.size());
      const double se = std::sqrt(p * (1 - p) / static_cast<double>(cloud_.size()));
      return {p * total_, se * total_, true};
    }
    switch (family_) {
      case MeasureFamily::FinitePointMass:
      case MeasureFamily::LatticeCounting: {
        double s = 0.0;
        for (const auto& wp : active_)
          if (h.contains(wp.point, kPointTol)) s += wp.weight;
        return {s, 0.0, false};
      }
      case MeasureFamily::UniformPolytope: {
        if (dim_ == 1) {
          double lo = ilo_, hi = ihi_;
          const double c = h.offset / h.normal[0];
          if (h.normal[0] > 0) lo = std::max(lo, c);
          else hi = std::min(hi, c);
          return {std::max(0.0, hi - lo), 0.0, false};
        }
        return {polygon_area(clip_polygon(polygon_, h)), 0.0, false};
      }
      case MeasureFamily::MixedInteger: {
        double s = 0.0;
        for (const auto& f : fibers_) s += detail::clip_fiber(f, h, n_, d_).volume;
        return {s, 0.0, false};
      }
    }
    return {};
  }

  Measure restrict(const std::vector<Halfspace>& cuts) const {
    Measure m = *this;
    for (const auto& h : cuts) {
      if (h.dim() != dim_) fail(ErrorKind::InvalidArgument, "cut dimension mismatch");
      m.region_.push_back(h);
    }
    m.refresh_incremental(*this, cuts);
    return m;
  }

 private:
  struct Base {
    std::vector<WeightedPoint> points;
    std::shared_ptr<const Polytope> poly;
    Polygon polygon;
    std::vector<Fiber> fibers;
  };

  Measure(MeasureFamily f, int dim) : family_(f), dim_(dim) {}

  void refresh() {
    active_.clear();
    switch (family_) {
      case MeasureFamily::FinitePointMass:
      case MeasureFamily::LatticeCounting:
        for (const auto& wp : base_->points)
          if (in_region(wp.point)) active_.push_back(wp);
        break;
      case MeasureFamily::UniformPolytope:
        if (dim_ == 1) {
          auto [lo, hi] = base_->poly->bounding_box();
          ilo_ = lo(0);
          ihi_ = hi(0);
        } else if (dim_ == 2) {
          polygon_ = base_->polygon;
        }
        break;
      case MeasureFamily::MixedInteger:
        fibers_ = base_->fibers;
        break;
    }
    apply_cuts(region_);
  }

  void refresh_incremental(const Measure& parent, const std::vector<Halfspace>& cuts) {
    if (!parent.cloud_.empty()) {
      refresh();
      return;
    }
    switch (family_) {
      case MeasureFamily::FinitePointMass:
      case MeasureFamily::LatticeCounting: {
        std::vector<WeightedPoint> kept;
        for (const auto& wp : parent.active_) {
          bool in = true;
          for (const auto& h : cuts)
            if (!h.contains(wp.point, kPointTol)) { in = false; break; }
          if (in) kept.push_back(wp);
        }
        active_ = std::move(kept);
        break;
      }
      default:
        break;
    }
    apply_cuts(cuts, family_ == MeasureFamily::FinitePointMass || family_ == MeasureFamily::LatticeCounting);
  }

  void apply_cuts(const std::vector<Halfspace>& cuts, bool points_done = false) {
    total_se_ = 0.0;
    cloud_.clear();
    switch (family_) {
      case MeasureFamily::FinitePointMass:
      case MeasureFamily::LatticeCounting: {
        (void)points_done;
        total_ = 0.0;
        for (const auto& wp : active_) total_ += wp.weight;
        break;
      }
      case MeasureFamily::UniformPolytope:
        if (dim_ == 1) {
          for (const auto& h : cuts) {
            const double c = h.offset / h.normal[0];
            if (h.normal[0] > 0) ilo_ = std::max(ilo_, c);
            else ihi_ = std::min(ihi_, c);
          }
          total_ = std::max(0.0, ihi_ - ilo_);
        } else if (dim_ == 2) {
          for (const auto& h : cuts) polygon_ = clip_polygon(polygon_, h);
          total_ = polygon_area(polygon_);
        } else {
          build_cloud();
        }
        break;
      case MeasureFamily::MixedInteger:
        if (d_ <= 2) {
          for (const auto& h : cuts) {
            std::vector<Fiber> kept;
            for (const auto& f : fibers_) {
              Fiber g = detail::clip_fiber(f, h, n_, d_);
              if (g.volume > 0) kept.push_back(std::move(g));
            }
            fibers_ = std::move(kept);
          }
          total_ = 0.0;
          for (const auto& f : fibers_) total_ += f.volume;
        } else {
          build_cloud();
        }
        break;
    }
    if (!(total_ > 0.0)) fail(ErrorKind::EmptyRegion, "restricted measure has zero mass");
  }

  // Rejection cloud for the Monte Carlo paths (dimension >= 3 uniform, d >= 3 mixed).
  void build_cloud() {
    auto [lo, hi] = base_->poly->bounding_box();
    if (family_ == MeasureFamily::MixedInteger)
      for (int i = 0; i < n_; ++i) {
        lo(i) = std::ceil(lo(i) - kTol) - 0.5;
        hi(i) = std::floor(hi(i) + kTol) + 0.5;
      }
    const double vol = (hi - lo).prod();
    RngState rng(0x5eedc10dULL, region_.size());
    std::size_t proposals = 0, misses = 0;
    Point y(dim_);
    while (cloud_.size() < kCloudSize) {
      for (int i = 0; i < dim_; ++i) y(i) = rng.uniform(lo(i), hi(i));
      if (family_ == MeasureFamily::MixedInteger)
        for (int i = 0; i < n_; ++i) y(i) = std::round(y(i));
      ++proposals;
      if (base_->poly->contains(y, 0.0) && in_region(y)) {
        cloud_.push_back(y);
        misses = 0;
      } else if (++misses >= kRejectionLimit) {
        fail(ErrorKind::RejectionStall, "no accepted proposal in " + std::to_string(kRejectionLimit) + " draws");
      }
    }
    const double acc = static_cast<double>(cloud_.size()) / static_cast<double>(proposals);
    total_ = vol * acc;
    total_se_ = vol * std::sqrt(acc * (1 - acc) / static_cast<double>(proposals));
  }

  MeasureFamily family_;
  int dim_;
  int n_ = 0, d_ = 0;
  std::shared_ptr<const Base> base_;
  std::vector<Halfspace> region_;
  double total_ = 0.0, total_se_ = 0.0;
  std::vector<WeightedPoint> active_;
  Polygon polygon_;
  double ilo_ = 0.0, ihi_ = 0.0;
  std::vector<Fiber> fibers_;
  std::vector<Point> cloud_;
};

inline MassEstimate halfspace_mass(const Measure& m, const Halfspace& h) {
  MassEstimate e = m.unnormalized_mass(h);
  e.value /= m.total_mass();
  e.std_error /= m.total_mass();
  e.value = std::min(1.0, std::max(0.0, e.value));
  return e;
}

inline Measure restrict(const Measure& m, const std::vector<Halfspace>& cuts) { return m.restrict(cuts); }

// Independent draws from the normalized measure on support intersected with region.
inline std::vector<Point> sample(const Measure& m, RngState& rng, std::size_t count) {
  std::vector<Point> out;
  out.reserve(count);
  switch (m.family()) {
    case MeasureFamily::FinitePointMass:
    case MeasureFamily::LatticeCounting: {
      const auto& pts = m.active_points();
      if (m.family() == MeasureFamily::LatticeCounting) {
        for (std::size_t i = 0; i < count; ++i) out.push_back(pts[rng.index(pts.size())].point);
        return out;
      }
      std::vector<double> cum;
      double s = 0.0;
      for (const auto& wp : pts) cum.push_back(s += wp.weight);
      for (std::size_t i = 0; i < count; ++i) {
        const double r = rng.uniform(0.0, s);
        auto it = std::upper_bound(cum.begin(), cum.end(), r);
        if (it == cum.end()) --it;
        out.push_back(pts[static_cast<std::size_t>(it - cum.begin())].point);
      }
      return out;
    }
    case MeasureFamily::UniformPolytope: {
      if (m.dim() == 1) {
        auto [lo, hi] = m.active_interval();
        for (std::size_t i = 0; i < count; ++i) out.push_back(make_point({rng.uniform(lo, hi)}));
        return out;
      }
      if (m.dim() == 2) {
        const Polygon& poly = m.active_polygon();
        auto [lo, hi] = poly.bounding_box();
        std::size_t misses = 0;
        while (out.size() < count) {
          const Vec2 y(rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y()));
          if (poly.contains(y, 0.0)) {
            out.push_back(make_point({y.x(), y.y()}));
            misses = 0;
          } else if (++misses >= kRejectionLimit) {
            fail(ErrorKind::RejectionStall, "rejection sampler stalled");
          }
        }
        return out;
      }
      break;
    }
    case MeasureFamily::MixedInteger: {
      if (m.n_cont() > 2) break;
      const auto& fibers = m.active_fibers();
      std::vector<double> cum;
      double s = 0.0;
      for (const auto& f : fibers) cum.push_back(s += f.volume);
      const int n = m.n_int();
      for (std::size_t i = 0; i < count; ++i) {
        const double r = rng.uniform(0.0, s);
        auto it = std::upper_bound(cum.begin(), cum.end(), r);
        if (it == cum.end()) --it;
        const Fiber& f = fibers[static_cast<std::size_t>(it - cum.begin())];
        Point y(m.dim());
        y.head(n) = f.z;
        if (m.n_cont() == 1) {
          y(n) = rng.uniform(f.lo, f.hi);
        } else {
          const Vec2 v = detail::sample_in_polygon(f.poly, rng);
          y(n) = v.x();
          y(n + 1) = v.y();
        }
        out.push_back(std::move(y));
      }
      return out;
    }
  }
  // Rejection from the support's bounding box.
  const Polytope& P = *m.support_polytope();
  auto [lo, hi] = P.bounding_box();
  const bool mixed = m.family() == MeasureFamily::MixedInteger;
  if (mixed)
    for (int i = 0; i < m.n_int(); ++i) {
      lo(i) = std::ceil(lo(i) - kTol) - 0.5;
      hi(i) = std::floor(hi(i) + kTol) + 0.5;
    }
  std::size_t misses = 0;
  Point y(m.dim());
  while (out.size() < count) {
    for (int i = 0; i < m.dim(); ++i) y(i) = rng.uniform(lo(i), hi(i));
    if (mixed)
      for (int i = 0; i < m.n_int(); ++i) y(i) = std::round(y(i));
    if (P.contains(y, 0.0) && m.in_region(y)) {
      out.push_back(y);
      misses = 0;
    } else if (++misses >= kRejectionLimit) {
      fail(ErrorKind::RejectionStall, "rejection sampler stalled");
    }
  }
  return out;
}

}  // namespace cpc

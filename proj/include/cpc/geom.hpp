#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cpc/error.hpp"

namespace cpc {

using Vector = Eigen::VectorXd;
using Point = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;

// Absolute tolerance for duplicates, feasibility and degeneracy.
inline constexpr double kTol = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline Point make_point(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p(i++) = x;
  return p;
}

inline bool lex_less(const Point& a, const Point& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

// Unit vector. Construction normalizes; zero or non-finite input is rejected.
class Direction {
 public:
  explicit Direction(const Vector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorKind::InvalidArgument, "direction must be finite and nonzero");
    u_ = v / n;
  }

  // u = (sin a, cos a)
  static Direction from_angle(double a) {
    Vector v(2);
    v << std::sin(a), std::cos(a);
    return Direction(v);
  }

  const Vector& coords() const { return u_; }
  int dim() const { return static_cast<int>(u_.size()); }
  double operator[](Eigen::Index i) const { return u_(i); }
  double dot(const Vector& y) const { return u_.dot(y); }

  Direction operator-() const {
    Direction d = *this;
    d.u_ = -u_;
    return d;
  }

  // Only meaningful in 2D; inverse of from_angle, in [0, 2pi).
  double angle() const {
    double a = std::atan2(u_(0), u_(1));
    if (a < 0) a += kTwoPi;
    return a;
  }

 private:
  Vector u_;
};

enum class Openness { Closed, Open };

// {y : normal . y >= offset}, or > offset when open.
struct Halfspace {
  Direction normal;
  double offset;
  Openness openness = Openness::Closed;

  Halfspace(Direction u, double off, Openness o = Openness::Closed) : normal(std::move(u)), offset(off), openness(o) {}

  // H+(u, x) = {y : u . (y - x) >= 0}
  static Halfspace through(const Direction& u, const Point& x, Openness o = Openness::Closed) {
    return Halfspace(u, u.dot(x), o);
  }

  // {y : a . y <= b}
  static Halfspace at_most(const Vector& a, double b, Openness o = Openness::Closed) {
    const double n = a.norm();
    if (!(n > 0.0)) fail(ErrorKind::InvalidArgument, "constraint row has zero normal");
    return Halfspace(Direction(-a), -b / n, o);
  }

  // {y : a . y >= b}
  static Halfspace at_least(const Vector& a, double b, Openness o = Openness::Closed) {
    const double n = a.norm();
    if (!(n > 0.0)) fail(ErrorKind::InvalidArgument, "constraint row has zero normal");
    return Halfspace(Direction(a), b / n, o);
  }

  int dim() const { return normal.dim(); }
  bool is_open() const { return openness == Openness::Open; }
  double slack(const Point& y) const { return normal.dot(y) - offset; }

  bool contains(const Point& y, double tol = kTol) const {
    const double s = slack(y);
    return is_open() ? s > tol : s >= -tol;
  }

  Halfspace complement() const {
    return Halfspace(-normal, -offset, is_open() ? Openness::Closed : Openness::Open);
  }

  Halfspace closed() const { return Halfspace(normal, offset, Openness::Closed); }
  Halfspace opened() const { return Halfspace(normal, offset, Openness::Open); }
};

namespace detail {

template <class F>
void for_each_subset(int m, int k, F&& f) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  if (k > m) return;
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

// Rows of A x <= b scaled to unit norm. Rows with vanishing normal are dropped;
// returns false if one of them is violated by a constant.
inline bool normalize_rows(Eigen::MatrixXd& A, Eigen::VectorXd& b, double tol = kTol) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double n = A.row(i).norm();
    if (n <= 1e-14) {
      if (b(i) < -tol) return false;
      continue;
    }
    A.row(i) /= n;
    b(i) /= n;
    keep.push_back(i);
  }
  if (static_cast<Eigen::Index>(keep.size()) != A.rows()) {
    Eigen::MatrixXd A2(static_cast<Eigen::Index>(keep.size()), A.cols());
    Eigen::VectorXd b2(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
      A2.row(static_cast<Eigen::Index>(k)) = A.row(keep[k]);
      b2(static_cast<Eigen::Index>(k)) = b(keep[k]);
    }
    A = std::move(A2);
    b = std::move(b2);
  }
  return true;
}

// Vertices of {x : A x <= b} by solving every n-row subsystem.
inline std::vector<Point> vertices_of(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol = kTol) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  std::vector<Point> out;
  if (m < n) return out;
  Eigen::MatrixXd M(n, n);
  Eigen::VectorXd r(n);
  for_each_subset(m, n, [&](const std::vector<int>& s) {
    for (int i = 0; i < n; ++i) {
      M.row(i) = A.row(s[static_cast<std::size_t>(i)]);
      r(i) = b(s[static_cast<std::size_t>(i)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    lu.setThreshold(1e-12);
    if (lu.rank() < n) return;
    Point x = lu.solve(r);
    if (!x.allFinite()) return;
    if (m > 0 && ((A * x - b).array() > tol).any()) return;
    for (const auto& v : out)
      if ((v - x).cwiseAbs().maxCoeff() <= tol) return;
    out.push_back(std::move(x));
  });
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

inline int row_rank(const Eigen::MatrixXd& A) {
  if (A.rows() == 0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  lu.setThreshold(1e-12);
  return static_cast<int>(lu.rank());
}

// True if {d : A d <= 0} contains a nonzero direction.
inline bool has_recession_direction(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  if (row_rank(A) < n) return true;
  bool found = false;
  Eigen::MatrixXd M(n - 1, n);
  for_each_subset(m, n - 1, [&](const std::vector<int>& s) {
    if (found) return;
    Vector d(n);
    if (n == 1) {
      d(0) = 1.0;
    } else {
      for (int i = 0; i < n - 1; ++i) M.row(i) = A.row(s[static_cast<std::size_t>(i)]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      lu.setThreshold(1e-12);
      Eigen::MatrixXd ker = lu.kernel();
      if (ker.cols() != 1) return;
      d = ker.col(0).normalized();
    }
    for (double sgn : {1.0, -1.0})
      if ((A * (sgn * d)).maxCoeff() <= 1e-12) found = true;
  });
  return found;
}

}  // namespace detail

// Bounded H-polytope; constraints are stored closed. An empty feasible set
// is allowed and has no vertices.
class Polytope {
 public:
  inline static constexpr int kMaxDim = 6;

  Polytope(int dim, std::vector<Halfspace> constraints) : dim_(dim), cons_(std::move(constraints)) {
    if (dim < 1) fail(ErrorKind::InvalidArgument, "polytope dimension must be >= 1");
    if (dim > kMaxDim) fail(ErrorKind::DimensionTooLarge, "polytope dimension " + std::to_string(dim));
    for (auto& h : cons_) {
      if (h.dim() != dim) fail(ErrorKind::InvalidArgument, "constraint dimension mismatch");
      h = h.closed();
    }
    const Eigen::MatrixXd A = a_matrix();
    const Eigen::VectorXd b = b_vector();
    verts_ = detail::vertices_of(A, b);
    if (!verts_.empty()) {
      if (detail::has_recession_direction(A)) fail(ErrorKind::Unbounded, "constraint set has a recession direction");
      return;
    }
    if (detail::row_rank(A) < dim) {
      // Not pointed: feasibility decided inside a large box.
      Eigen::MatrixXd Ab(A.rows() + 2 * dim, dim);
      Eigen::VectorXd bb(A.rows() + 2 * dim);
      Ab.topRows(A.rows()) = A;
      bb.head(A.rows()) = b;
      for (int i = 0; i < dim; ++i) {
        Ab.row(A.rows() + 2 * i).setZero();
        Ab(A.rows() + 2 * i, i) = 1.0;
        bb(A.rows() + 2 * i) = 1e7;
        Ab.row(A.rows() + 2 * i + 1).setZero();
        Ab(A.rows() + 2 * i + 1, i) = -1.0;
        bb(A.rows() + 2 * i + 1) = 1e7;
      }
      if (!detail::vertices_of(Ab, bb).empty()) fail(ErrorKind::Unbounded, "constraint set has a recession direction");
    }
  }

  // Rows [a_1..a_n, b] meaning a . x <= b.
  static Polytope from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) fail(ErrorKind::InvalidArgument, "polytope needs at least one row");
    const std::size_t w = rows.front().size();
    if (w < 2) fail(ErrorKind::InvalidArgument, "polytope row too short");
    std::vector<Halfspace> hs;
    for (const auto& r : rows) {
      if (r.size() != w) fail(ErrorKind::InvalidArgument, "polytope rows have different lengths");
      Vector a(static_cast<Eigen::Index>(w - 1));
      for (std::size_t i = 0; i + 1 < w; ++i) a(static_cast<Eigen::Index>(i)) = r[i];
      hs.push_back(Halfspace::at_most(a, r.back()));
    }
    return Polytope(static_cast<int>(w - 1), std::move(hs));
  }

  static Polytope box(const Point& lo, const Point& hi) {
    const int n = static_cast<int>(lo.size());
    std::vector<Halfspace> hs;
    for (int i = 0; i < n; ++i) {
      Vector e = Vector::Zero(n);
      e(i) = 1.0;
      hs.push_back(Halfspace::at_least(e, lo(i)));
      hs.push_back(Halfspace::at_most(e, hi(i)));
    }
    return Polytope(n, std::move(hs));
  }

  int dim() const { return dim_; }
  const std::vector<Halfspace>& constraints() const { return cons_; }
  const std::vector<Point>& vertices() const { return verts_; }
  bool empty() const { return verts_.empty(); }

  bool contains(const Point& y, double tol = kTol) const {
    for (const auto& h : cons_)
      if (!h.contains(y, tol)) return false;
    return true;
  }

  Polytope intersect(const std::vector<Halfspace>& extra) const {
    auto hs = cons_;
    hs.insert(hs.end(), extra.begin(), extra.end());
    return Polytope(dim_, std::move(hs));
  }

  // A x <= b with unit rows.
  Eigen::MatrixXd a_matrix() const {
    Eigen::MatrixXd A(static_cast<Eigen::Index>(cons_.size()), dim_);
    for (std::size_t i = 0; i < cons_.size(); ++i) A.row(static_cast<Eigen::Index>(i)) = -cons_[i].normal.coords().transpose();
    return A;
  }
  Eigen::VectorXd b_vector() const {
    Eigen::VectorXd b(static_cast<Eigen::Index>(cons_.size()));
    for (std::size_t i = 0; i < cons_.size(); ++i) b(static_cast<Eigen::Index>(i)) = -cons_[i].offset;
    return b;
  }

  std::vector<std::vector<double>> rows() const {
    std::vector<std::vector<double>> out;
    for (const auto& h : cons_) {
      std::vector<double> r;
      for (int i = 0; i < dim_; ++i) r.push_back(-h.normal[i]);
      r.push_back(-h.offset);
      out.push_back(std::move(r));
    }
    return out;
  }

  std::pair<Point, Point> bounding_box() const {
    if (verts_.empty()) fail(ErrorKind::Infeasible, "empty polytope has no bounding box");
    Point lo = verts_.front(), hi = verts_.front();
    for (const auto& v : verts_) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    return {lo, hi};
  }

 private:
  int dim_;
  std::vector<Halfspace> cons_;
  std::vector<Point> verts_;
};

// Axis-aligned box [lower, upper].
struct Box {
  Point lower, upper;

  Box(Point lo, Point hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size() || lower.size() < 1) fail(ErrorKind::InvalidArgument, "box bounds differ in dimension");
    if ((lower.array() > upper.array()).any()) fail(ErrorKind::InvalidArgument, "box lower bound exceeds upper bound");
  }

  int dim() const { return static_cast<int>(lower.size()); }
  double volume() const { return (upper - lower).prod(); }
  double diameter() const { return (upper - lower).norm(); }
  Polytope polytope() const { return Polytope::box(lower, upper); }
};

inline std::vector<Point> enumerate_vertices(const Polytope& p) {
  if (p.empty()) fail(ErrorKind::Infeasible, "constraint set is empty");
  return p.vertices();
}

// Convex polygon in canonical form: counterclockwise, starting at the
// lexicographically smallest vertex, no repeated or collinear vertices.
// Fewer than three vertices describe a point or a segment.
class Polygon {
 public:
  Polygon() = default;

  // Convex hull; points closer than dedupe_tol (max-norm) are merged.
  static Polygon hull(std::vector<Vec2> pts, double dedupe_tol = kTol) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
    std::vector<Vec2> uniq;
    for (const auto& p : pts) {
      bool dup = false;
      for (auto it = uniq.rbegin(); it != uniq.rend() && it->x() >= p.x() - dedupe_tol; ++it)
        if ((*it - p).cwiseAbs().maxCoeff() <= dedupe_tol) { dup = true; break; }
      if (!dup) uniq.push_back(p);
    }
    Polygon out;
    if (uniq.size() <= 2) {
      out.v_ = uniq;
      return out;
    }
    auto turn = [](const Vec2& o, const Vec2& a, const Vec2& b) {
      const Vec2 u = a - o, w = b - o;
      const double c = u.x() * w.y() - u.y() * w.x();
      return c > 1e-12 * u.norm() * w.norm() + 1e-18;
    };
    std::vector<Vec2> h(2 * uniq.size());
    std::size_t k = 0;
    for (const auto& p : uniq) {
      while (k >= 2 && !turn(h[k - 2], h[k - 1], p)) --k;
      h[k++] = p;
    }
    for (std::size_t i = uniq.size() - 1, t = k + 1; i-- > 0;) {
      while (k >= t && !turn(h[k - 2], h[k - 1], uniq[i])) --k;
      h[k++] = uniq[i];
    }
    h.resize(k - 1);
    out.v_ = std::move(h);
    return out;
  }

  // Validates a counterclockwise convex vertex list.
  static Polygon from_ccw(const std::vector<Vec2>& v) {
    if (v.size() >= 3) {
      double turning = 0.0, area2 = 0.0;
      const std::size_t n = v.size();
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = v[(i + 1) % n] - v[i];
        const Vec2 b = v[(i + 2) % n] - v[(i + 1) % n];
        const double cr = a.x() * b.y() - a.y() * b.x();
        if (cr < -1e-12 * a.norm() * b.norm()) fail(ErrorKind::MalformedPolygon, "vertices are not in convex counterclockwise position");
        turning += std::atan2(cr, a.dot(b));
        area2 += v[i].x() * v[(i + 1) % n].y() - v[(i + 1) % n].x() * v[i].y();
      }
      if (area2 < 0 || std::abs(turning - kTwoPi) > 1e-6) fail(ErrorKind::MalformedPolygon, "vertices are not in convex counterclockwise position");
    }
    return hull(v);
  }

  static Polygon from_polytope(const Polytope& p) {
    if (p.dim() != 2) fail(ErrorKind::InvalidArgument, "polygon requires a 2D polytope");
    std::vector<Vec2> pts;
    for (const auto& v : p.vertices()) pts.emplace_back(v(0), v(1));
    return hull(std::move(pts));
  }

  const std::vector<Vec2>& vertices() const { return v_; }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  bool operator==(const Polygon& o) const {
    if (v_.size() != o.v_.size()) return false;
    for (std::size_t i = 0; i < v_.size(); ++i)
      if ((v_[i] - o.v_[i]).cwiseAbs().maxCoeff() > kTol) return false;
    return true;
  }

  bool contains(const Vec2& p, double tol = kTol) const {
    if (v_.empty()) return false;
    if (v_.size() == 1) return (p - v_[0]).norm() <= tol;
    const std::size_t n = v_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 e = v_[(i + 1) % n] - v_[i];
      const Vec2 w = p - v_[i];
      const double len = e.norm();
      if (e.x() * w.y() - e.y() * w.x() < -tol * len) return false;
      if (n == 2) {
        const double t = e.dot(w) / (len * len);
        return std::abs(e.x() * w.y() - e.y() * w.x()) <= tol * len && t >= -tol && t <= 1 + tol;
      }
    }
    return true;
  }

  std::pair<Vec2, Vec2> bounding_box() const {
    Vec2 lo = v_.front(), hi = v_.front();
    for (const auto& p : v_) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    return {lo, hi};
  }

 private:
  std::vector<Vec2> v_;
};

inline double halfplane_slack(const Halfspace& h, const Vec2& p) {
  return h.normal[0] * p.x() + h.normal[1] * p.y() - h.offset;
}

// Sutherland-Hodgman against one halfplane. Openness is ignored: the result is
// the closure, which has the same area.
inline Polygon clip_polygon(const Polygon& poly, const Halfspace& h) {
  if (h.dim() != 2) fail(ErrorKind::InvalidArgument, "clip_polygon needs a 2D halfspace");
  const auto& v = poly.vertices();
  if (v.empty()) return {};
  std::vector<Vec2> out;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % n];
    double sp = halfplane_slack(h, p), sq = halfplane_slack(h, q);
    if (std::abs(sp) <= 1e-13) sp = 0.0;
    if (std::abs(sq) <= 1e-13) sq = 0.0;
    if (sp >= 0) out.push_back(p);
    if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
      const double t = sp / (sp - sq);
      out.push_back(p + t * (q - p));
    }
  }
  return Polygon::hull(std::move(out), 0.0);
}

inline double polygon_area(const Polygon& poly) {
  const auto& v = poly.vertices();
  if (v.size() < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % v.size()];
    s += a.x() * b.y() - b.x() * a.y();
  }
  return std::max(0.0, 0.5 * s);
}

inline Vec2 polygon_centroid(const Polygon& poly) {
  const auto& v = poly.vertices();
  if (v.empty()) fail(ErrorKind::EmptyRegion, "centroid of an empty polygon");
  const double a = polygon_area(poly);
  if (v.size() < 3 || a <= 1e-300) {
    Vec2 c = Vec2::Zero();
    for (const auto& p : v) c += p;
    return c / static_cast<double>(v.size());
  }
  // Shift to the first vertex for accuracy.
  const Vec2 o = v[0];
  double cx = 0, cy = 0, s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 p = v[i] - o;
    const Vec2 q = v[(i + 1) % v.size()] - o;
    const double cr = p.x() * q.y() - q.x() * p.y();
    s += cr;
    cx += (p.x() + q.x()) * cr;
    cy += (p.y() + q.y()) * cr;
  }
  return o + Vec2(cx / (3 * s), cy / (3 * s));
}

namespace detail {

inline void lattice_rec(Eigen::MatrixXd A, Eigen::VectorXd b, std::vector<double>& prefix, std::vector<Point>& out,
                        std::size_t cap) {
  if (!normalize_rows(A, b)) return;
  const Eigen::Index n = A.cols();
  double lo, hi;
  if (n == 1) {
    lo = -std::numeric_limits<double>::infinity();
    hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      if (A(i, 0) > 0) hi = std::min(hi, b(i) / A(i, 0));
      else lo = std::max(lo, b(i) / A(i, 0));
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) fail(ErrorKind::Unbounded, "unbounded slice during lattice enumeration");
  } else {
    const auto verts = vertices_of(A, b);
    if (verts.empty()) return;
    lo = hi = verts.front()(0);
    for (const auto& v : verts) {
      lo = std::min(lo, v(0));
      hi = std::max(hi, v(0));
    }
  }
  const double first = std::ceil(lo - kTol), last = std::floor(hi + kTol);
  for (double t = first; t <= last; t += 1.0) {
    prefix.push_back(t);
    if (n == 1) {
      Point p(static_cast<Eigen::Index>(prefix.size()));
      for (std::size_t i = 0; i < prefix.size(); ++i) p(static_cast<Eigen::Index>(i)) = prefix[i];
      out.push_back(std::move(p));
      if (out.size() > cap) fail(ErrorKind::BudgetExceeded, "lattice point count exceeds cap " + std::to_string(cap));
    } else {
      Eigen::MatrixXd A2 = A.rightCols(n - 1);
      Eigen::VectorXd b2 = b - A.col(0) * t;
      lattice_rec(std::move(A2), std::move(b2), prefix, out, cap);
    }
    prefix.pop_back();
  }
}

}  // namespace detail

inline constexpr std::size_t kDefaultLatticeCap = 10'000'000;

// Integer points of a bounded polytope, in lexicographic order.
inline std::vector<Point> enumerate_lattice_points(const Polytope& p, std::size_t cap = kDefaultLatticeCap) {
  std::vector<Point> raw, out;
  if (p.empty()) return out;
  std::vector<double> prefix;
  detail::lattice_rec(p.a_matrix(), p.b_vector(), prefix, raw, cap);
  for (auto& q : raw)
    if (p.contains(q)) out.push_back(std::move(q));
  return out;
}

struct LatticeWidth {
  double width;
  std::array<std::int64_t, 2> direction;
};

inline double directional_width(const Polygon& poly, double u1, double u2) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& v : poly.vertices()) {
    const double s = u1 * v.x() + u2 * v.y();
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return hi - lo;
}

// Lattice width over integer directions with |u_i| <= R, where
// R = min(1000, 4 * ceil(diameter / euclidean_width)). Ties prefer the
// shorter direction, then the colexicographically smaller one; directions
// are normalized so the first nonzero entry is positive.
inline LatticeWidth lattice_width_2d(const Polygon& poly) {
  const auto& v = poly.vertices();
  if (v.empty()) fail(ErrorKind::Infeasible, "lattice width of an empty polygon");
  if (v.size() == 1) return {0.0, {1, 0}};
  double diam = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) diam = std::max(diam, (v[i] - v[j]).norm());
  double wmin = 0.0;
  if (v.size() >= 3) {
    wmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2 e = v[(i + 1) % v.size()] - v[i];
      const Vec2 nrm = Vec2(-e.y(), e.x()).normalized();
      double far = 0.0;
      for (const auto& p : v) far = std::max(far, std::abs(nrm.dot(p - v[i])));
      wmin = std::min(wmin, far);
    }
  }
  std::int64_t R = 1000;
  if (wmin > 0) R = std::min<std::int64_t>(1000, 4 * static_cast<std::int64_t>(std::ceil(diam / wmin)));
  R = std::max<std::int64_t>(R, 1);
  LatticeWidth best{std::numeric_limits<double>::infinity(), {1, 0}};
  for (std::int64_t a = 0; a <= R; ++a) {
    for (std::int64_t b = -R; b <= R; ++b) {
      if (a == 0 && b <= 0) continue;
      const double w = directional_width(poly, static_cast<double>(a), static_cast<double>(b));
      const auto& d = best.direction;
      bool take = w < best.width - kTol;
      if (!take && std::abs(w - best.width) <= kTol) {
        const std::int64_t n1 = a * a + b * b, n0 = d[0] * d[0] + d[1] * d[1];
        take = n1 < n0 || (n1 == n0 && (b < d[1] || (b == d[1] && a < d[0])));
      }
      if (take) best = {w, {a, b}};
    }
  }
  return best;
}

inline LatticeWidth lattice_width_2d(const Polytope& p) { return lattice_width_2d(Polygon::from_polytope(p)); }

// Integer matrix with determinant +-1 whose second row is the primitive vector u.
inline Eigen::Matrix2d unimodular_completion(std::array<std::int64_t, 2> u) {
  // Find a, b with a*u2 - b*u1 = 1.
  std::int64_t old_r = u[1], r = -u[0], old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  if (old_r != 1) fail(ErrorKind::InvalidArgument, "direction is not primitive");
  Eigen::Matrix2d U;
  U << static_cast<double>(old_s), static_cast<double>(old_t), static_cast<double>(u[0]), static_cast<double>(u[1]);
  return U;
}

}  // namespace cpc

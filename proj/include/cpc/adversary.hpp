#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "cpc/error.hpp"
#include "cpc/geom.hpp"

namespace cpc {

enum class AdversaryKind { ContinuousMedian, IntegerFiber, MixedFiber };

constexpr std::string_view to_string(AdversaryKind k) {
  switch (k) {
    case AdversaryKind::ContinuousMedian: return "continuous-median";
    case AdversaryKind::IntegerFiber: return "integer-fiber";
    case AdversaryKind::MixedFiber: return "mixed-fiber";
  }
  return "unknown";
}

// value + slope . (y - anchor)
struct AffinePiece {
  Vector slope;
  Point anchor;
  double value;

  double at(const Point& y) const { return value + slope.dot(y - anchor); }
};

struct AdversaryAnswer {
  Point x;
  double value;
  Vector subgradient;
  std::size_t piece;
};

// Closed-form oracle-call lower bounds.
// chi is the degeneracy term of the continuous bound (1 for lattice counting measures).
inline std::int64_t lower_bound_value(AdversaryKind kind, int n, int d, double B, double delta, double V, double chi = 0.0) {
  switch (kind) {
    case AdversaryKind::ContinuousMedian: {
      if (!(V > 0) || !(delta > 0)) fail(ErrorKind::InvalidArgument, "V and delta must be positive");
      const double v = std::ceil(std::log2(V / (delta + chi)) - 1e-12) - 1.0;
      return static_cast<std::int64_t>(std::max(0.0, v));
    }
    case AdversaryKind::IntegerFiber: {
      if (n < 1 || B < 1) fail(ErrorKind::InvalidArgument, "integer fiber bound needs n >= 1 and B >= 1");
      return (std::int64_t{1} << (n - 1)) * (static_cast<std::int64_t>(std::floor(std::log2(B) + 1e-12)) + 1);
    }
    case AdversaryKind::MixedFiber: {
      if (n < 1 || d < 1 || !(B > 0) || !(delta > 0)) fail(ErrorKind::InvalidArgument, "mixed fiber bound needs n, d >= 1 and B, delta > 0");
      const double v = std::pow(2.0, n) * (d * std::log2(B) - std::log2(delta) + n - 1);
      return static_cast<std::int64_t>(std::max(0.0, std::ceil(v - 1e-9)));
    }
  }
  return 0;
}

inline constexpr int kMedianGrid = 720;
inline constexpr double kValueFloor = 1e-250;

// Resisting oracle. Every answer is a piece of a max-of-affines function that
// also reproduces all earlier answers. New pieces are scaled so that the
// cutting-plane region they induce differs from the halfspace through the
// query point by at most tau (in normalized units).
class AdversaryState {
 public:
  static AdversaryState continuous_median(Box E0) {
    if (E0.dim() != 2) fail(ErrorKind::InvalidArgument, "continuous median adversary is planar");
    AdversaryState s(AdversaryKind::ContinuousMedian, std::move(E0));
    s.tau_ = 1e-6 * s.E0_.diameter();
    return s;
  }

  // Fibers {0..B-1} x {v}, v in {0,1}^(n-1), inside E0 = [0,B) x [0,2)^(n-1).
  static AdversaryState integer_fiber(int n, int B) {
    if (n < 1 || B < 1) fail(ErrorKind::InvalidArgument, "integer fiber adversary needs n >= 1 and B >= 1");
    Point lo = Point::Zero(n), hi = Point::Constant(n, 2.0);
    hi(0) = B;
    AdversaryState s(AdversaryKind::IntegerFiber, Box{lo, hi});
    s.n_ = n;
    s.B_ = B;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << (n - 1)); ++v) s.lattice_alive_[v] = {0, B - 1};
    return s;
  }

  // Fibers {v} x [0,B)^d, v in {0,1}^n, inside E0 = [0,2)^n x [0,B)^d.
  static AdversaryState mixed_fiber(int n, int d, int B) {
    if (n < 1 || d < 1 || B < 1) fail(ErrorKind::InvalidArgument, "mixed fiber adversary needs n, d, B >= 1");
    Point lo = Point::Zero(n + d), hi(n + d);
    hi.head(n).setConstant(2.0);
    hi.tail(d).setConstant(B);
    AdversaryState s(AdversaryKind::MixedFiber, Box{lo, hi});
    s.n_ = n;
    s.d_ = d;
    s.B_ = B;
    s.tau_ = 1e-6 * s.E0_.diameter();
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) s.box_alive_[v] = {Point::Zero(d), Point::Constant(d, B)};
    return s;
  }

  AdversaryKind kind() const { return kind_; }
  const Box& E0() const { return E0_; }
  int n() const { return n_; }
  int d() const { return d_; }
  int B() const { return B_; }
  int dim() const { return E0_.dim(); }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  const std::vector<AdversaryAnswer>& history() const { return history_; }
  std::size_t fallbacks() const { return fallbacks_; }

  std::int64_t lower_bound(double delta) const {
    switch (kind_) {
      case AdversaryKind::ContinuousMedian: return lower_bound_value(kind_, 2, 0, 0, delta, E0_.volume());
      case AdversaryKind::IntegerFiber: return lower_bound_value(kind_, n_, 0, B_, delta, 0);
      case AdversaryKind::MixedFiber: return lower_bound_value(kind_, n_, d_, B_, delta, 0);
    }
    return 0;
  }

  // Remaining candidate count of the lattice fiber with key v (bits of coordinates 1..n-1).
  std::int64_t fiber_remaining(std::uint64_t v) const {
    auto [lo, hi] = lattice_alive_.at(v);
    return std::max<std::int64_t>(0, hi - lo + 1);
  }

  // Remaining continuous volume of the mixed fiber with key v.
  double fiber_volume(std::uint64_t v) const {
    const auto& [lo, hi] = box_alive_.at(v);
    return (hi - lo).cwiseMax(0.0).prod();
  }

  // Max over pieces and the maximizing index (smallest on ties).
  std::pair<double, std::size_t> evaluate(const Point& y) const {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      const double v = pieces_[k].at(y);
      if (v > best) {
        best = v;
        arg = k;
      }
    }
    return {best, arg};
  }

  std::pair<double, Vector> query(const Point& x) {
    if (x.size() != dim() || !x.allFinite()) fail(ErrorKind::InvalidArgument, "query dimension mismatch");
    for (int i = 0; i < dim(); ++i)
      if (x(i) < E0_.lower(i) - kTol || x(i) > E0_.upper(i) + kTol) fail(ErrorKind::OutsideRegion, "query outside the adversary's region");
    for (const auto& a : history_)
      if (a.x == x) return {a.value, a.subgradient};

    Proposal p = propose(x);
    const double tau = p.tau;
    double cap = std::numeric_limits<double>::infinity();
    for (const auto& a : history_) cap = std::min(cap, a.value / (1.0 + std::max(0.0, p.h.dot(a.x - x)) / tau));
    const double v_new = history_.empty() ? 1.0 : 0.5 * cap;
    const auto [g_old, arg] = evaluate(x);
    AdversaryAnswer ans;
    ans.x = x;
    if (!history_.empty() && (g_old >= v_new || v_new < kValueFloor)) {
      ++fallbacks_;
      ans.value = g_old;
      ans.subgradient = pieces_[arg].slope;
      ans.piece = arg;
    } else {
      pieces_.push_back({(v_new / tau) * p.h, x, v_new});
      commit(p);
      ans.value = v_new;
      ans.subgradient = pieces_.back().slope;
      ans.piece = pieces_.size() - 1;
    }
    history_.push_back(ans);
    return {ans.value, ans.subgradient};
  }

 private:
  struct Proposal {
    Vector h;  // unit
    double tau;
    int fiber_kind = 0;  // 0 none, 1 lattice, 2 box
    std::uint64_t key = 0;
    std::int64_t lo = 0, hi = -1;
    Point blo, bhi;
  };

  AdversaryState(AdversaryKind k, Box E0) : kind_(k), E0_(std::move(E0)) {}

  double best_value() const {
    double b = std::numeric_limits<double>::infinity();
    for (const auto& a : history_) b = std::min(b, a.value);
    return b;
  }

  // Region the cutting-plane method holds: E0 cut by all recorded answers.
  Polygon current_region() const {
    const Vec2 lo(E0_.lower(0), E0_.lower(1)), hi(E0_.upper(0), E0_.upper(1));
    Polygon poly = Polygon::hull({lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())});
    const double best = best_value();
    for (const auto& a : history_) {
      const double nrm = a.subgradient.norm();
      if (nrm == 0) continue;
      poly = clip_polygon(poly, Halfspace::at_most(a.subgradient / nrm, a.subgradient.dot(a.x) / nrm + (best - a.value) / nrm));
    }
    return poly;
  }

  Proposal propose(const Point& x) {
    switch (kind_) {
      case AdversaryKind::ContinuousMedian: return propose_median(x);
      case AdversaryKind::IntegerFiber: return propose_lattice(x);
      case AdversaryKind::MixedFiber: return propose_mixed(x);
    }
    return {};
  }

  Proposal propose_median(const Point& x) {
    const Polygon R = current_region();
    const double total = polygon_area(R);
    Proposal p;
    p.tau = tau_;
    double best_gap = std::numeric_limits<double>::infinity();
    Direction chosen = Direction::from_angle(0.0);
    for (int k = 0; k < kMedianGrid; ++k) {
      const Direction u = Direction::from_angle(kTwoPi * k / kMedianGrid);
      // kept side: u . (y - x) <= 0
      const double kept = polygon_area(clip_polygon(R, Halfspace::at_most(u.coords(), u.dot(x))));
      if (kept < 0.5 * total) continue;
      if (kept - 0.5 * total < best_gap) {
        best_gap = kept - 0.5 * total;
        chosen = u;
      }
    }
    p.h = chosen.coords();
    return p;
  }

  static Vector axis(int dim, int k, double s) {
    Vector e = Vector::Zero(dim);
    e(k) = s;
    return e;
  }

  Proposal propose_lattice(const Point& x) {
    for (int i = 0; i < n_; ++i)
      if (x(i) != std::round(x(i))) fail(ErrorKind::InvalidArgument, "integer fiber adversary expects lattice queries");
    Proposal p;
    Vector h;
    if (x(0) < 0) h = axis(n_, 0, -1);
    else if (x(0) > B_ - 1) h = axis(n_, 0, 1);
    for (int k = 1; k < n_ && h.size() == 0; ++k) {
      if (x(k) >= 2) h = axis(n_, k, 1);
      else if (x(k) <= -1) h = axis(n_, k, -1);
    }
    if (h.size() == 0) {
      std::uint64_t key = 0;
      for (int k = 1; k < n_; ++k)
        if (x(k) == 1) key |= std::uint64_t{1} << (k - 1);
      auto [lo, hi] = lattice_alive_.at(key);
      const auto a = static_cast<std::int64_t>(x(0));
      double s;
      if (a < lo) s = -1;
      else if (a > hi) s = 1;
      else if (a - lo > hi - a) s = 1;  // keep the lower part
      else s = -1;
      h = axis(n_, 0, s);
      // Tilt so every other fiber stays on the kept side.
      for (int k = 1; k < n_; ++k) h(k) = -B_ * (1.0 - 2.0 * x(k));
      p.fiber_kind = 1;
      p.key = key;
      if (a >= lo && a <= hi) {
        if (s > 0) hi = a - 1;
        else lo = a + 1;
      }
      p.lo = lo;
      p.hi = hi;
    }
    p.tau = 0.5 / h.norm();
    p.h = h / h.norm();
    return p;
  }

  Proposal propose_mixed(const Point& x) {
    for (int i = 0; i < n_; ++i)
      if (x(i) != std::round(x(i))) fail(ErrorKind::InvalidArgument, "mixed fiber adversary expects integral integer block");
    Proposal p;
    Vector h;
    const int dim = n_ + d_;
    for (int k = 0; k < n_ && h.size() == 0; ++k) {
      if (x(k) >= 2) h = axis(dim, k, 1);
      else if (x(k) <= -1) h = axis(dim, k, -1);
    }
    if (h.size() == 0) {
      std::uint64_t key = 0;
      for (int k = 0; k < n_; ++k)
        if (x(k) == 1) key |= std::uint64_t{1} << k;
      auto [lo, hi] = box_alive_.at(key);
      Eigen::Index c = 0;
      (hi - lo).maxCoeff(&c);
      const double a = x(n_ + c);
      double s;
      if (a <= lo(c)) s = -1;
      else if (a >= hi(c)) s = 1;
      else if (a - lo(c) > hi(c) - a) s = 1;
      else s = -1;
      h = axis(dim, n_ + static_cast<int>(c), s);
      const double M = 2.0 * B_ * std::sqrt(static_cast<double>(d_));
      for (int k = 0; k < n_; ++k) h(k) = -M * (1.0 - 2.0 * x(k));
      if (a > lo(c) && a < hi(c)) {
        if (s > 0) hi(c) = a;
        else lo(c) = a;
      }
      p.fiber_kind = 2;
      p.key = key;
      p.blo = lo;
      p.bhi = hi;
      p.tau = tau_;
    }
    if (p.fiber_kind == 0) p.tau = 0.5 / h.norm();
    p.h = h / h.norm();
    return p;
  }

  void commit(const Proposal& p) {
    if (p.fiber_kind == 1) lattice_alive_[p.key] = {p.lo, p.hi};
    if (p.fiber_kind == 2) box_alive_[p.key] = {p.blo, p.bhi};
  }

  AdversaryKind kind_;
  Box E0_;
  int n_ = 2, d_ = 0, B_ = 0;
  double tau_ = 0.0;
  std::vector<AffinePiece> pieces_;
  std::vector<AdversaryAnswer> history_;
  std::map<std::uint64_t, std::pair<std::int64_t, std::int64_t>> lattice_alive_;
  std::map<std::uint64_t, std::pair<Point, Point>> box_alive_;
  std::size_t fallbacks_ = 0;
};

struct ReplayCheck {
  bool values_match = true;
  bool subgradients_maximal = true;
  std::size_t checked = 0;
};

// Replays every recorded query against the final max-of-affines function.
inline ReplayCheck replay(const AdversaryState& st) {
  ReplayCheck r;
  for (const auto& a : st.history()) {
    const auto [g, arg] = st.evaluate(a.x);
    (void)arg;
    if (g != a.value) r.values_match = false;
    const auto& piece = st.pieces()[a.piece];
    if (piece.slope != a.subgradient || piece.at(a.x) != g) r.subgradients_maximal = false;
    ++r.checked;
  }
  return r;
}

}  // namespace cpc

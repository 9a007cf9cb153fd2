#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "cpc/error.hpp"
#include "cpc/geom.hpp"
#include "cpc/measure.hpp"
#include "cpc/rng.hpp"

namespace cpc {

struct DepthResult {
  double value;
  Direction witness;
  bool exact;
  double gap;
};

// Interval tolerance of the golden-section search on uniform polygons.
inline constexpr double kGoldenTol = 1e-10;
// Angular offset of the extra probes placed beside each critical angle.
inline constexpr double kProbeOffset = 1e-12;
// Tilt of the witness reported for a vertical-stratum limit in the mixed sweep.
inline constexpr double kVerticalEta = 1e-9;
inline constexpr double kAngleMerge = 1e-13;

namespace detail {

inline double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

// Angles where the line through x with normal u(a) = (sin a, cos a) contains x + v.
inline std::pair<double, double> critical_pair(double v0, double v1) {
  const double psi = std::atan2(v0, v1);
  const double s = wrap_angle(psi - kPi / 2);
  return {s, wrap_angle(s + kPi)};
}

inline std::vector<double> unique_angles(std::vector<double> a) {
  std::sort(a.begin(), a.end());
  std::vector<double> out;
  for (double x : a)
    if (out.empty() || x - out.back() > kAngleMerge) out.push_back(x);
  if (out.size() > 1 && out.front() + kTwoPi - out.back() <= kAngleMerge) out.pop_back();
  return out;
}

// Midpoints of consecutive angles on the circle (angles sorted, unique).
inline std::vector<double> midpoints(const std::vector<double>& c) {
  std::vector<double> m;
  if (c.empty()) return {0.0};
  if (c.size() == 1) return {wrap_angle(c[0] + kPi)};
  for (std::size_t k = 0; k + 1 < c.size(); ++k) m.push_back(0.5 * (c[k] + c[k + 1]));
  m.push_back(wrap_angle(0.5 * (c.back() + c.front() + kTwoPi)));
  return m;
}

struct GenericMin {
  double count;
  Vec2 witness;
};

// min over generic unit u of the weight of {v : u . v > 0}, for nonzero 2D vectors.
inline GenericMin generic_min_2d(const std::vector<Vec2>& vs, const std::vector<double>& ws) {
  if (vs.empty()) return {0.0, Vec2(0, 1)};
  const std::size_t n = vs.size();
  struct Event {
    double angle;
    std::size_t idx;
    bool start;
  };
  std::vector<Event> ev;
  ev.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [s, e] = critical_pair(vs[i].x(), vs[i].y());
    ev.push_back({s, i, true});
    ev.push_back({e, i, false});
  }
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.angle < b.angle; });
  // Group events closer than kAngleMerge.
  std::vector<double> gangle;
  std::vector<std::size_t> group(ev.size());
  for (std::size_t k = 0; k < ev.size(); ++k) {
    if (gangle.empty() || ev[k].angle - gangle.back() > kAngleMerge) gangle.push_back(ev[k].angle);
    group[k] = gangle.size() - 1;
  }
  if (gangle.size() > 1 && gangle.front() + kTwoPi - gangle.back() <= kAngleMerge) {
    for (auto& g : group)
      if (g == gangle.size() - 1) g = 0;
    gangle.pop_back();
  }
  const std::size_t K = gangle.size();
  auto count_at = [&](double a) {
    const double s = std::sin(a), c = std::cos(a);
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (s * vs[i].x() + c * vs[i].y() > 0) t += ws[i];
    return t;
  };
  const std::vector<double> mids = midpoints(gangle);
  // delta[k]: change when crossing gangle[k] in increasing direction.
  std::vector<double> delta(K, 0.0);
  for (std::size_t k = 0; k < ev.size(); ++k) delta[group[k]] += ev[k].start ? ws[ev[k].idx] : -ws[ev[k].idx];
  std::vector<double> val(mids.size());
  val[0] = count_at(mids[0]);
  for (std::size_t k = 1; k < mids.size(); ++k) val[k] = val[k - 1] + delta[k];
  double best = *std::min_element(val.begin(), val.end());
  double total_w = 0.0;
  for (double w : ws) total_w += w;
  const double tie = 1e-12 * total_w;
  double best_angle = kTwoPi + 1;
  for (std::size_t k = 0; k < mids.size(); ++k)
    if (val[k] <= best + tie && mids[k] < best_angle) best_angle = mids[k];
  const double exact = count_at(best_angle);
  return {exact, Vec2(std::sin(best_angle), std::cos(best_angle))};
}

inline Vector tilt(const Vector& u0, const Vector& e1, const Vector& e2, const Vec2& w) {
  return (u0 + 1e-6 * (w.x() * e1 + w.y() * e2)).normalized();
}

}  // namespace detail

// Exact Tukey depth of x for a weighted point set in dimension <= 3.
inline DepthResult depth_finite(const std::vector<WeightedPoint>& pts, const Point& x) {
  const int dim = static_cast<int>(x.size());
  if (dim > 3) fail(ErrorKind::DimensionTooLarge, "depth_finite supports dimension <= 3");
  if (pts.empty()) fail(ErrorKind::InvalidArgument, "depth of an empty point set");
  double total = 0.0, coincident = 0.0;
  std::vector<Vector> vs;
  std::vector<double> ws;
  for (const auto& wp : pts) {
    if (wp.point.size() != dim) fail(ErrorKind::InvalidArgument, "point dimension mismatch");
    total += wp.weight;
    Vector v = wp.point - x;
    if (v.norm() <= kPointTol) coincident += wp.weight;
    else {
      vs.push_back(std::move(v));
      ws.push_back(wp.weight);
    }
  }
  if (dim == 1) {
    double pos = 0, neg = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) (vs[i](0) > 0 ? pos : neg) += ws[i];
    const bool up = pos <= neg;
    return {(coincident + std::min(pos, neg)) / total, Direction(make_point({up ? 1.0 : -1.0})), true, 0.0};
  }
  if (dim == 2) {
    std::vector<Vec2> v2;
    for (const auto& v : vs) v2.emplace_back(v(0), v(1));
    const auto g = detail::generic_min_2d(v2, ws);
    return {(coincident + g.count) / total, Direction(make_point({g.witness.x(), g.witness.y()})), true, 0.0};
  }
  // dim == 3: vertices of the great-circle arrangement plus the in-plane sweep.
  double best = std::numeric_limits<double>::infinity();
  Vector best_u = make_point({0, 0, 1});
  auto evaluate = [&](const Vector& u0) {
    const Eigen::Vector3d U(u0);
    const Eigen::Vector3d E1 = U.unitOrthogonal();
    const Vector e1 = E1, e2 = Eigen::Vector3d(U.cross(E1));
    double pos = 0.0;
    std::vector<Vec2> on;
    std::vector<double> won;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const double s = u0.dot(vs[i]);
      if (std::abs(s) <= 1e-12 * vs[i].norm()) {
        on.emplace_back(e1.dot(vs[i]), e2.dot(vs[i]));
        won.push_back(ws[i]);
      } else if (s > 0) {
        pos += ws[i];
      }
    }
    const auto g = detail::generic_min_2d(on, won);
    if (pos + g.count < best) {
      best = pos + g.count;
      best_u = detail::tilt(u0, e1, e2, g.witness);
    }
  };
  bool any_pair = false;
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a + 1; b < vs.size(); ++b) {
      const Eigen::Vector3d c = Eigen::Vector3d(vs[a]).cross(Eigen::Vector3d(vs[b]));
      if (c.norm() <= 1e-12 * vs[a].norm() * vs[b].norm()) continue;
      any_pair = true;
      const Vector n = Vector(c.normalized());
      evaluate(n);
      evaluate(-n);
    }
  if (!any_pair) {
    const Vector u0 = vs.empty() ? make_point({0, 0, 1}) : Vector(Eigen::Vector3d(vs[0]).unitOrthogonal());
    evaluate(u0);
  }
  return {(coincident + best) / total, Direction(best_u), true, 0.0};
}

namespace detail {

// Directions v from x to points q on edge line i whose reflection 2x - q lies on edge line j.
inline std::vector<Vec2> chord_equality_directions(const Polygon& poly, const Vec2& x) {
  std::vector<Vec2> out;
  const auto& v = poly.vertices();
  const std::size_t m = v.size();
  if (m < 3) return out;
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 a1 = v[i], d1 = v[(i + 1) % m] - v[i];
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const Vec2 d2 = v[(j + 1) % m] - v[j];
      const Vec2 n2(-d2.y(), d2.x());
      const double c2 = n2.dot(v[j]);
      const double den = n2.dot(d1);
      if (std::abs(den) <= 1e-14) continue;
      const double s = (n2.dot(2 * x - a1) - c2) / den;
      const Vec2 q = a1 + s * d1;
      if ((q - x).norm() > kPointTol) out.push_back(q - x);
    }
  }
  return out;
}

inline DepthResult argmin_over(const std::vector<double>& probes, const std::function<double(double)>& f, bool exact,
                               double gap) {
  double best = std::numeric_limits<double>::infinity(), best_a = 0.0;
  for (double a : probes) {
    const double val = f(a);
    if (val < best - 1e-15) {
      best = val;
      best_a = a;
    } else if (val <= best + 1e-15 && a < best_a) {
      best = std::min(best, val);
      best_a = a;
    }
  }
  return {best, Direction::from_angle(best_a), exact, gap};
}

}  // namespace detail

// Depth 0 certified by a support constraint or region cut that separates x.
inline std::optional<DepthResult> separated_depth(const Measure& m, const Point& x) {
  auto check = [&](const Halfspace& h) -> std::optional<DepthResult> {
    if (h.slack(x) < -kTol) return DepthResult{0.0, -h.normal, true, 0.0};
    return std::nullopt;
  };
  if (const Polytope* P = m.support_polytope())
    for (const auto& h : P->constraints())
      if (auto r = check(h)) return r;
  for (const auto& h : m.region())
    if (auto r = check(h)) return r;
  return std::nullopt;
}

// Exact depth for 2D lattice (or finite) and uniform-polygon measures.
inline DepthResult min_direction_2d(const Measure& m, const Point& x) {
  if (m.dim() != 2 || x.size() != 2) fail(ErrorKind::InvalidArgument, "min_direction_2d needs a 2D measure and point");
  const Vec2 x2(x(0), x(1));
  std::vector<double> crit;
  auto add_dir = [&](const Vec2& v) {
    auto [s, e] = detail::critical_pair(v.x(), v.y());
    crit.push_back(s);
    crit.push_back(e);
  };
  auto mass_at = [&](double a) { return halfspace_mass(m, Halfspace::through(Direction::from_angle(a), x)).value; };

  if (m.is_discrete()) {
    for (const auto& wp : m.active_points()) {
      const Vec2 v(wp.point(0) - x2.x(), wp.point(1) - x2.y());
      if (v.norm() > kPointTol) add_dir(v);
    }
    if (const Polytope* P = m.support_polytope())
      for (const auto& v : detail::chord_equality_directions(Polygon::from_polytope(*P), x2)) add_dir(v);
    crit = detail::unique_angles(std::move(crit));
    std::vector<double> probes = detail::midpoints(crit);
    for (double c : crit) {
      probes.push_back(detail::wrap_angle(c - kProbeOffset));
      probes.push_back(detail::wrap_angle(c + kProbeOffset));
    }
    return detail::argmin_over(probes, mass_at, true, 0.0);
  }

  if (m.family() != MeasureFamily::UniformPolytope) fail(ErrorKind::InvalidArgument, "min_direction_2d needs a lattice or uniform measure");
  const Polygon& Q = m.active_polygon();
  const auto& qv = Q.vertices();
  for (std::size_t i = 0; i < qv.size() && qv.size() >= 3; ++i) {
    const Vec2 e = qv[(i + 1) % qv.size()] - qv[i];
    const Vec2 out(e.y(), -e.x());
    if (out.normalized().dot(x2 - qv[i]) > kTol) return DepthResult{0.0, Direction(make_point({out.x(), out.y()})), true, 0.0};
  }
  for (const auto& q : qv)
    if ((q - x2).norm() > kPointTol) add_dir(q - x2);
  for (const auto& v : detail::chord_equality_directions(Q, x2)) add_dir(v);
  crit = detail::unique_angles(std::move(crit));
  if (crit.empty()) crit.push_back(0.0);
  const double total = m.total_mass();
  auto area_at = [&](double a) { return polygon_area(clip_polygon(Q, Halfspace::through(Direction::from_angle(a), x))); };
  std::vector<double> probes = crit;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t k = 0; k < crit.size(); ++k) {
    double lo = crit[k];
    double hi = (k + 1 < crit.size()) ? crit[k + 1] : crit[0] + kTwoPi;
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = area_at(c), fd = area_at(d);
    while (hi - lo > kGoldenTol) {
      if (fc <= fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - g * (hi - lo);
        fc = area_at(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + g * (hi - lo);
        fd = area_at(d);
      }
    }
    probes.push_back(detail::wrap_angle(0.5 * (lo + hi)));
  }
  DepthResult r = detail::argmin_over(probes, area_at, true, kGoldenTol);
  r.value = std::min(1.0, r.value / total);
  return r;
}

// Exact depth for mixed-integer measures with n = 1, d = 1 (coordinates (z, y)).
// Breakpoints are lines through x and fiber endpoints; the vertical stratum is
// probed exactly and from both sides.
inline DepthResult depth_mixed_2d(const Measure& m, const Point& x) {
  if (m.family() != MeasureFamily::MixedInteger || m.n_int() != 1 || m.n_cont() != 1)
    fail(ErrorKind::InvalidArgument, "depth_mixed_2d needs a mixed measure with n = d = 1");
  std::vector<double> crit;
  for (const auto& f : m.active_fibers())
    for (double y : {f.lo, f.hi}) {
      const Vec2 v(f.z(0) - x(0), y - x(1));
      if (v.norm() > kPointTol) {
        auto [s, e] = detail::critical_pair(v.x(), v.y());
        crit.push_back(s);
        crit.push_back(e);
      }
    }
  crit = detail::unique_angles(std::move(crit));
  std::vector<double> probes = crit;
  for (double a : detail::midpoints(crit)) probes.push_back(a);
  probes.push_back(kPi / 2);
  probes.push_back(3 * kPi / 2);
  auto mass_at = [&](double a) { return halfspace_mass(m, Halfspace::through(Direction::from_angle(a), x)).value; };
  DepthResult best = detail::argmin_over(probes, mass_at, true, 0.0);
  // Limits u -> (+-1, 0) with u_y -> 0 from either side, evaluated in closed form:
  // fibers strictly on the positive side count fully, the fiber through x is halved at x_y.
  const double total = m.total_mass();
  for (double sz : {1.0, -1.0})
    for (double sy : {1.0, -1.0}) {
      double mass = 0.0;
      for (const auto& f : m.active_fibers()) {
        const double dz = sz * (f.z(0) - x(0));
        if (dz > kPointTol) mass += f.volume;
        else if (dz >= -kPointTol) mass += sy > 0 ? std::max(0.0, f.hi - std::max(f.lo, x(1))) : std::max(0.0, std::min(f.hi, x(1)) - f.lo);
      }
      const double v = std::min(1.0, mass / total);
      if (v < best.value - 1e-15) {
        const double a = detail::wrap_angle(sz > 0 ? kPi / 2 - sy * kVerticalEta : 3 * kPi / 2 + sy * kVerticalEta);
        best = {v, Direction::from_angle(a), true, 0.0};
      }
    }
  return best;
}

// Upper bound on depth from random directions.
inline DepthResult depth_sampled(const Measure& m, const Point& x, std::size_t num_directions, RngState& rng) {
  if (num_directions == 0) fail(ErrorKind::InvalidArgument, "need at least one direction");
  double best = std::numeric_limits<double>::infinity();
  Vector best_u;
  Vector u(m.dim());
  for (std::size_t k = 0; k < num_directions; ++k) {
    do {
      for (int i = 0; i < m.dim(); ++i) u(i) = rng.normal();
    } while (u.norm() == 0.0);
    const double v = halfspace_mass(m, Halfspace::through(Direction(u), x)).value;
    if (v < best) {
      best = v;
      best_u = u;
    }
  }
  return {best, Direction(best_u), false, 1.0};
}

inline constexpr std::size_t kFallbackDirections = 4096;

// Best available depth engine for m: exact where one exists, sampled otherwise.
inline DepthResult depth(const Measure& m, const Point& x) {
  if (x.size() != m.dim()) fail(ErrorKind::InvalidArgument, "point dimension mismatch");
  if (m.family() != MeasureFamily::FinitePointMass)
    if (auto r = separated_depth(m, x)) return *r;
  switch (m.family()) {
    case MeasureFamily::FinitePointMass:
      return depth_finite(m.active_points(), x);
    case MeasureFamily::LatticeCounting:
      if (m.dim() == 2) return min_direction_2d(m, x);
      return depth_finite(m.active_points(), x);
    case MeasureFamily::UniformPolytope:
      if (m.dim() == 1) {
        auto [lo, hi] = m.active_interval();
        const double up = std::max(0.0, hi - x(0)), down = std::max(0.0, x(0) - lo);
        return {std::min(up, down) / (hi - lo), Direction(make_point({up <= down ? 1.0 : -1.0})), true, 0.0};
      }
      if (m.dim() == 2) return min_direction_2d(m, x);
      break;
    case MeasureFamily::MixedInteger:
      if (m.n_int() == 1 && m.n_cont() == 1) return depth_mixed_2d(m, x);
      break;
  }
  RngState rng(0xde97ULL);
  return depth_sampled(m, x, kFallbackDirections, rng);
}

}  // namespace cpc

#pragma once

#include <algorithm>
#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cpc/adversary.hpp"
#include "cpc/error.hpp"
#include "cpc/geom.hpp"

namespace cpc {

inline constexpr double kPsdFloor = -1e-9;

class FirstOrderOracle {
 public:
  enum class Kind { AffineMax, ConvexQuadratic, Sum, Adversarial };

  // max_i a_i . x + b_i
  static FirstOrderOracle affine_max(std::vector<Vector> a, std::vector<double> b) {
    if (a.empty() || a.size() != b.size()) fail(ErrorKind::InvalidArgument, "affine max needs a nonempty list of pieces");
    for (const auto& ai : a)
      if (ai.size() != a.front().size()) fail(ErrorKind::InvalidArgument, "affine pieces differ in dimension");
    FirstOrderOracle o(Kind::AffineMax, static_cast<int>(a.front().size()));
    o.a_ = std::move(a);
    o.b_ = std::move(b);
    return o;
  }

  // x' Q x + c . x + r
  static FirstOrderOracle quadratic(Eigen::MatrixXd Q, Vector c, double r) {
    if (Q.rows() != Q.cols() || Q.rows() != c.size()) fail(ErrorKind::InvalidArgument, "quadratic dimensions disagree");
    if ((Q - Q.transpose()).norm() > 1e-12 * std::max(1.0, Q.norm())) fail(ErrorKind::InvalidArgument, "Q must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
    if (es.eigenvalues().minCoeff() < kPsdFloor) fail(ErrorKind::InvalidArgument, "Q must be positive semidefinite");
    FirstOrderOracle o(Kind::ConvexQuadratic, static_cast<int>(c.size()));
    o.Q_ = std::move(Q);
    o.c_ = std::move(c);
    o.r_ = r;
    return o;
  }

  static FirstOrderOracle sum(std::vector<FirstOrderOracle> parts) {
    if (parts.empty()) fail(ErrorKind::InvalidArgument, "sum needs at least one part");
    for (const auto& p : parts)
      if (p.dim() != parts.front().dim()) fail(ErrorKind::InvalidArgument, "summands differ in dimension");
    FirstOrderOracle o(Kind::Sum, parts.front().dim());
    o.parts_ = std::move(parts);
    return o;
  }

  static FirstOrderOracle adversarial(std::shared_ptr<AdversaryState> st) {
    if (!st) fail(ErrorKind::InvalidArgument, "missing adversary state");
    FirstOrderOracle o(Kind::Adversarial, st->dim());
    o.adv_ = std::move(st);
    return o;
  }

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  std::size_t call_count() const { return calls_; }
  const std::shared_ptr<AdversaryState>& adversary() const { return adv_; }
  const std::vector<FirstOrderOracle>& parts() const { return parts_; }
  const std::vector<Vector>& slopes() const { return a_; }
  const std::vector<double>& intercepts() const { return b_; }
  const Eigen::MatrixXd& Q() const { return Q_; }
  const Vector& c() const { return c_; }
  double r() const { return r_; }

  std::pair<double, Vector> evaluate(const Point& x) {
    if (x.size() != dim_ || !x.allFinite()) fail(ErrorKind::InvalidArgument, "oracle query must be finite and of matching dimension");
    ++calls_;
    return eval(x);
  }

 private:
  FirstOrderOracle(Kind k, int dim) : kind_(k), dim_(dim) {}

  std::pair<double, Vector> eval(const Point& x) {
    switch (kind_) {
      case Kind::AffineMax: {
        std::size_t arg = 0;
        double best = a_[0].dot(x) + b_[0];
        for (std::size_t i = 1; i < a_.size(); ++i) {
          const double v = a_[i].dot(x) + b_[i];
          if (v > best) {
            best = v;
            arg = i;
          }
        }
        return {best, a_[arg]};
      }
      case Kind::ConvexQuadratic: return {x.dot(Q_ * x) + c_.dot(x) + r_, 2.0 * Q_ * x + c_};
      case Kind::Sum: {
        double v = 0.0;
        Vector g = Vector::Zero(dim_);
        for (auto& p : parts_) {
          auto [pv, pg] = p.evaluate(x);
          v += pv;
          g += pg;
        }
        return {v, g};
      }
      case Kind::Adversarial: return adv_->query(x);
    }
    return {};
  }

  Kind kind_;
  int dim_;
  std::size_t calls_ = 0;
  std::vector<Vector> a_;
  std::vector<double> b_;
  Eigen::MatrixXd Q_;
  Vector c_;
  double r_ = 0.0;
  std::vector<FirstOrderOracle> parts_;
  std::shared_ptr<AdversaryState> adv_;
};

constexpr std::string_view to_string(FirstOrderOracle::Kind k) {
  switch (k) {
    case FirstOrderOracle::Kind::AffineMax: return "affine-max";
    case FirstOrderOracle::Kind::ConvexQuadratic: return "quadratic";
    case FirstOrderOracle::Kind::Sum: return "sum";
    case FirstOrderOracle::Kind::Adversarial: return "adversarial";
  }
  return "unknown";
}

}  // namespace cpc

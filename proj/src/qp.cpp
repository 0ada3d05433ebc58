#include "nocontact/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace nocontact::control {

double QpProblem::linear_violation(const Vec2& u) const {
  switch (sense) {
    case ConstraintSense::kAtMost:
      return normal.dot(u);
    case ConstraintSense::kAtLeast:
      return -normal.dot(u);
    case ConstraintSense::kNone:
      break;
  }
  return -std::numeric_limits<double>::infinity();
}

bool QpProblem::feasible(const Vec2& u, double tol) const {
  return u.norm() <= radius + tol && linear_violation(u) <= tol;
}

namespace {

// Minimum of the quadratic over the circle ‖u‖ = r when the unconstrained
// minimizer lies outside it: u(μ) = (H + μI)⁻¹ f with ‖u(μ)‖ = r, μ >= 0.
Vec2 circle_minimum_pd(const Eigen::SelfAdjointEigenSolver<Mat2>& eig, const Vec2& f,
                       double r) {
  const Vec2 lam = eig.eigenvalues();
  const Vec2 g = eig.eigenvectors().transpose() * f;
  auto norm_at = [&](double mu) {
    return Vec2(g(0) / (lam(0) + mu), g(1) / (lam(1) + mu)).norm();
  };
  double lo = 0.0;
  double hi = f.norm() / r;  // ‖u(hi)‖ <= ‖f‖ / hi = r
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (norm_at(mid) > r) lo = mid; else hi = mid;
  }
  const double mu = 0.5 * (lo + hi);
  Vec2 u = eig.eigenvectors() * Vec2(g(0) / (lam(0) + mu), g(1) / (lam(1) + mu));
  const double len = u.norm();
  return len > 0.0 ? Vec2(u * (r / len)) : u;
}

// Global minimum over the circle by sampling plus Newton polishing in the
// angle; used only when H is numerically singular.
Vec2 circle_minimum_sampled(const QpProblem& qp) {
  const double r = qp.radius;
  auto q = [&](double th) { return qp.cost(r * Vec2(std::cos(th), std::sin(th))); };
  constexpr int kSamples = 720;
  double best_th = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kSamples; ++i) {
    const double th = 2.0 * std::numbers::pi * i / kSamples;
    const double c = q(th);
    if (c < best) {
      best = c;
      best_th = th;
    }
  }
  double th = best_th;
  const double h = 1e-5;
  for (int it = 0; it < 30; ++it) {
    const double d1 = (q(th + h) - q(th - h)) / (2 * h);
    const double d2 = (q(th + h) - 2 * q(th) + q(th - h)) / (h * h);
    if (!(d2 > 0.0)) break;
    const double next = th - d1 / d2;
    if (q(next) > q(th)) break;
    th = next;
  }
  return r * Vec2(std::cos(th), std::sin(th));
}

}  // namespace

Vec2 solve_qp(const QpProblem& qp) {
  const Mat2 H = 0.5 * (qp.hessian + qp.hessian.transpose());
  const Vec2& f = qp.linear;
  const double r = qp.radius;

  Vec2 best = Vec2::Zero();
  double best_cost = qp.cost(best);
  auto consider = [&](const Vec2& u) {
    if (!u.allFinite() || !qp.feasible(u, 1e-12)) return;
    const double c = qp.cost(u);
    if (c < best_cost) {
      best_cost = c;
      best = u;
    }
  };

  const Eigen::SelfAdjointEigenSolver<Mat2> eig(H);
  const Vec2 lam = eig.eigenvalues();
  const double scale = std::max({std::abs(lam(0)), std::abs(lam(1)), 1e-300});
  const bool positive_definite = lam(0) > 1e-13 * scale;

  // Interior and ball-active cases.
  if (positive_definite) {
    const Vec2 interior = eig.eigenvectors() *
                          (eig.eigenvectors().transpose() * f).cwiseQuotient(lam);
    if (interior.norm() <= r) {
      consider(interior);
    } else {
      consider(circle_minimum_pd(eig, f, r));
    }
  } else if (f.norm() > 0.0) {
    consider(circle_minimum_sampled(qp));
  }

  // Line-active cases: u = t·m on the chord |t| <= r, with and without the
  // ball bound active.
  if (qp.sense != ConstraintSense::kNone && qp.normal.norm() > 0.0) {
    const Vec2 n = qp.normal / qp.normal.norm();
    const Vec2 m(-n.y(), n.x());
    const double curvature = m.dot(H * m);
    const double slope = f.dot(m);
    double t = 0.0;
    if (curvature > 0.0) {
      t = std::clamp(slope / curvature, -r, r);
    } else {
      t = slope >= 0.0 ? r : -r;
    }
    consider(t * m);
    consider(r * m);
    consider(-r * m);
  }
  return best;
}

}  // namespace nocontact::control

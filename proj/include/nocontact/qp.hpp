#pragma once

#include "nocontact/geometry.hpp"

namespace nocontact::control {

/// Sense of the optional homogeneous half-plane constraint nᵀu (<= | >=) 0.
enum class ConstraintSense { kNone, kAtMost, kAtLeast };

/// min ½uᵀHu - fᵀu  s.t. ‖u‖ <= radius and the optional linear constraint.
struct QpProblem {
  Mat2 hessian{Mat2::Identity()};
  Vec2 linear{Vec2::Zero()};
  double radius = 1.0;
  Vec2 normal{Vec2::Zero()};
  ConstraintSense sense = ConstraintSense::kNone;

  double cost(const Vec2& u) const { return 0.5 * u.dot(hessian * u) - linear.dot(u); }
  /// Signed violation of the linear constraint (<= 0 when satisfied).
  double linear_violation(const Vec2& u) const;
  bool feasible(const Vec2& u, double tol = 1e-9) const;
};

/// Global minimizer. Enumerates the KKT active sets of the 2-D problem
/// (interior, ball, line, line + ball) and keeps the cheapest feasible
/// candidate; u = 0 is always feasible so the result is well defined.
Vec2 solve_qp(const QpProblem& qp);

}  // namespace nocontact::control

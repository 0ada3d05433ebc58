#include "nocontact/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nocontact/error.hpp"

namespace nocontact {

Rot2 Rot2::FromAngle(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat2 m;
  m << c, -s, s, c;
  return Rot2(m);
}

Rot2 Rot2::FromUnitRow(const Vec2& dir) {
  Mat2 m;
  m << dir.x(), dir.y(), -dir.y(), dir.x();
  return Rot2(m);
}

double Rot2::angle() const { return std::atan2(m_(1, 0), m_(0, 0)); }

Rot2 Rot2::transpose() const { return Rot2(Mat2(m_.transpose())); }

Rot2 Rot2::operator*(const Rot2& other) const { return Rot2(Mat2(m_ * other.m_)); }

Vec2 relative(const SystemState& state) { return state.object - state.robot; }

double normalized_distance(const Vec2& x_r, double robot_radius,
                           double object_radius, RadiusNormalizer normalizer) {
  const double sum = robot_radius + object_radius;
  if (!(sum > 0.0)) {
    throw DomainError("normalized_distance: radius sum must be positive");
  }
  const double divisor = normalizer == RadiusNormalizer::kSum ? sum : 0.5 * sum;
  return x_r.norm() / divisor;
}

double normalized_distance(const SystemState& state, RadiusNormalizer normalizer) {
  return normalized_distance(relative(state), state.robot_radius,
                             state.object_radius, normalizer);
}

Rot2 local_frame(const Vec2& x_r) {
  const double len = x_r.norm();
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw DomainError("local_frame: relative position must be nonzero and finite");
  }
  return Rot2::FromUnitRow(x_r / len);
}

bool in_contact(const SystemState& state, double threshold,
                RadiusNormalizer normalizer) {
  return normalized_distance(state, normalizer) <= threshold;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double point_polyline_distance(const Vec2& p, const std::vector<Vec2>& line) {
  if (line.empty()) return std::numeric_limits<double>::infinity();
  if (line.size() == 1) return (p - line.front()).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    best = std::min(best, point_segment_distance(p, line[i], line[i + 1]));
  }
  return best;
}

}  // namespace nocontact

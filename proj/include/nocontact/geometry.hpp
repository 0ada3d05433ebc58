#pragma once

#include <vector>

#include <Eigen/Dense>

namespace nocontact {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Planar rotation. Construction goes through FromAngle or FromUnit so the
/// stored matrix is always in SO(2).
class Rot2 {
 public:
  Rot2() : m_(Mat2::Identity()) {}

  static Rot2 FromAngle(double angle);
  /// Rotation whose first row is `dir` (must be unit length).
  static Rot2 FromUnitRow(const Vec2& dir);

  const Mat2& matrix() const { return m_; }
  double angle() const;
  Rot2 transpose() const;
  Rot2 operator*(const Rot2& other) const;
  Vec2 operator*(const Vec2& v) const { return m_ * v; }
  Mat2 operator*(const Mat2& m) const { return m_ * m; }

 private:
  explicit Rot2(const Mat2& m) : m_(m) {}
  Mat2 m_;
};

/// How the center distance is scaled into s_r.
enum class RadiusNormalizer {
  kSum,   // ‖x_r‖ / (r_a + r_u)
  kMean,  // ‖x_r‖ / ((r_a + r_u) / 2)
};

/// Robot and object are both treated as spheres; positions in µm.
struct SystemState {
  Vec2 object{Vec2::Zero()};  // x_u
  Vec2 robot{Vec2::Zero()};   // x_a
  double robot_radius = 5.0;
  double object_radius = 5.0;
};

/// s_r at or below this value counts as robot-object contact.
inline constexpr double kContactThreshold = 2.0;

/// x_r = x_u - x_a.
Vec2 relative(const SystemState& state);

double normalized_distance(const Vec2& x_r, double robot_radius,
                           double object_radius,
                           RadiusNormalizer normalizer = RadiusNormalizer::kSum);

double normalized_distance(const SystemState& state,
                           RadiusNormalizer normalizer = RadiusNormalizer::kSum);

/// Global-to-local rotation R with R * x_r = (‖x_r‖, 0). Local axis 1 is the
/// robot-to-object center line, axis 2 the tangential direction.
Rot2 local_frame(const Vec2& x_r);

bool in_contact(const SystemState& state,
                double threshold = kContactThreshold,
                RadiusNormalizer normalizer = RadiusNormalizer::kSum);

/// Distance from p to the closed segment [a, b].
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

/// Distance from p to a polyline (a single point counts as a degenerate line).
double point_polyline_distance(const Vec2& p, const std::vector<Vec2>& line);

inline double cross(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace nocontact

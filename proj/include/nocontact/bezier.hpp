#pragma once

#include <functional>
#include <vector>

#include "nocontact/geometry.hpp"

namespace nocontact::planner {

/// b_i^q(t) = C(q, i) t^i (1 - t)^(q - i).
double bernstein(int q, int i, double t);

/// A single Bézier segment; its degree is control.size() - 1.
struct BezierSegment {
  std::vector<Vec2> control;

  int degree() const { return static_cast<int>(control.size()) - 1; }
  Vec2 eval(double t) const;             // de Casteljau
  Vec2 derivative(double t) const;       // x'(t)
  Vec2 second_derivative(double t) const;
  double curvature(double t) const;      // |x' × x''| / ‖x'‖³, 0 where x' vanishes
};

/// Control points of the derivative curve, q·(P_{i+1} - P_i).
std::vector<Vec2> hodograph(const std::vector<Vec2>& control);

/// Piecewise Bézier; each segment has its own parameter t ∈ [0, 1].
struct BezierCurve {
  std::vector<BezierSegment> segments;

  Vec2 start() const { return segments.front().control.front(); }
  Vec2 end() const { return segments.back().control.back(); }
  /// Samples every segment at `per_segment` evenly spaced parameters
  /// (shared join points appear once).
  std::vector<Vec2> sample(int per_segment) const;
};

enum class BezierMode {
  // Cubic pieces between consecutive waypoints, handles along the averaged
  // adjacent-segment direction; degree-elevated when q > 3.
  kPiecewise,
  // One curve with every waypoint as a control point (degree n), split at
  // waypoints where it collides.
  kGlobal,
};

struct SmoothOptions {
  BezierMode mode = BezierMode::kPiecewise;
  int degree = 3;              // q, piecewise mode only
  double handle_scale = 1.0 / 3.0;  // handle length as a fraction of the shorter adjacent segment
  // Piecewise mode: scale each knot's handle by 0.5..1.5 to lower the max
  // curvature of its two pieces.
  bool tune_handles = true;
  int max_repairs = 64;
  double check_spacing = 0.5;  // [µm] upper bound on the spacing of collision samples
};

/// Returns true when a point is collision-free.
using PointFree = std::function<bool(const Vec2&)>;

/// Smooths a waypoint polyline. When `is_free` is set the result is sampled
/// and repaired until no sample collides.
BezierCurve bezier_smooth(const std::vector<Vec2>& waypoints, const SmoothOptions& options = {},
                          const PointFree& is_free = nullptr);

/// True when every sample of the curve (spacing ≤ `spacing`) is free.
bool curve_is_free(const BezierCurve& curve, const PointFree& is_free, double spacing = 0.5);

/// Circumscribed-circle curvature of a point triple; 0 when collinear.
double triple_curvature(const Vec2& a, const Vec2& b, const Vec2& c);

/// Max triple curvature over consecutive points of a polyline.
double max_curvature(const std::vector<Vec2>& polyline);

/// Max |x' × x''| / ‖x'‖³ over `per_segment` parameters of every segment.
double max_curvature(const BezierCurve& curve, int per_segment = 1000);

}  // namespace nocontact::planner

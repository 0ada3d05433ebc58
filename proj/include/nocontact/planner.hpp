#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nocontact/bezier.hpp"
#include "nocontact/geometry.hpp"

namespace nocontact::planner {

struct Disc {
  Vec2 center;
  double radius;
};

/// Rectangular workspace with disc obstacles inflated by `clearance` [µm].
struct World {
  Vec2 lower{0.0, 0.0};
  Vec2 upper{512.0, 512.0};
  std::vector<Disc> obstacles;
  double clearance = 0.0;

  void validate() const;
  double diagonal() const { return (upper - lower).norm(); }
  bool point_free(const Vec2& p) const;
  bool segment_free(const Vec2& a, const Vec2& b) const;
  /// Sampled check at ≤ `spacing` along the polyline; used on emitted paths.
  bool polyline_free(const std::vector<Vec2>& pts, double spacing = 1.0) const;
};

World load_world(const std::string& path);
void save_world(const World& world, const std::string& path);

/// Angle between two edge directions, in [0, π].
double turning_angle(const Vec2& parent_dir, const Vec2& new_dir);

/// Turning angle with the positions themselves in place of the edge
/// directions. Depends on the origin; kept only for comparison.
double turning_angle_literal(const Vec2& child, const Vec2& parent);

/// w·|arccos(tr(R_rᵀ R_t) / 2)| + ‖x_r - x_t‖.
double co_rrt_distance(double sample_angle, const Vec2& sample_pos, double node_angle,
                       const Vec2& node_pos, double angle_weight);

enum class TurningForm { kDirections, kLiteralPositions };

struct PlannerParams {
  double step = 10.0;        // [µm]
  int max_iters = 20000;
  double goal_bias = 0.1;
  double theta_max = 3.14159265358979323846 / 6.0;  // [rad]
  // Angle weight in µm/rad; negative picks world diagonal / π.
  double angle_weight = -1.0;
  std::uint64_t seed = 1;
  TurningForm form = TurningForm::kDirections;

  /// θ_max = π and zero angle weight: nearest-neighbour RRT.
  static PlannerParams vanilla(std::uint64_t seed, double step = 10.0);
};

struct TreeNode {
  Vec2 position;
  std::optional<std::size_t> parent;
  Vec2 direction;  // unit edge direction from the parent; +x at the root
  double theta;    // turning angle at the parent
};

struct PlanResult {
  std::vector<Vec2> waypoints;
  std::vector<TreeNode> tree;
  int iterations = 0;
};

/// Throws NoPathFound when max_iters runs out.
PlanResult plan_co_rrt(const World& world, const Vec2& start, const Vec2& goal,
                       const PlannerParams& params);

/// Largest turning angle along a waypoint polyline.
double max_turning_angle(const std::vector<Vec2>& waypoints);

enum class PlanMethod { kCoRrt, kRrt, kCoRrtNoSmooth };
const char* to_string(PlanMethod m);
PlanMethod plan_method_from_string(const std::string& name);

struct PlannedPath {
  PlanMethod method;
  std::vector<Vec2> waypoints;
  std::vector<Vec2> knots;              // waypoints the smoothed curve interpolates
  std::optional<BezierCurve> smoothed;  // set for kCoRrt
  double max_curvature;                 // [rad/µm]
  bool collision_free;
};

/// Greedy line-of-sight shortcut: from each kept waypoint jump to the farthest
/// later one reachable by a free segment. Returns indices into `waypoints`.
std::vector<std::size_t> prune_waypoints(const World& world, const std::vector<Vec2>& waypoints);

/// Knot subset for smoothing: free consecutive segments, chosen to minimise the
/// largest turning angle per adjacent segment length. Indices into
/// `waypoints`, first and last always kept.
std::vector<std::size_t> select_knots(const World& world, const std::vector<Vec2>& waypoints);
/// Selected knots smoothed into a collision-free curve. A colliding piece is
/// split by reinserting the middle original waypoint it skipped; pieces that
/// skip nothing fall back to the handle shrinking in bezier_smooth.
BezierCurve smooth_path(const World& world, const std::vector<Vec2>& waypoints,
                        const SmoothOptions& options, std::vector<Vec2>* knots = nullptr);

/// Plans with `method` and smooths when it calls for it.
PlannedPath plan_path(const World& world, const Vec2& start, const Vec2& goal,
                      PlanMethod method, const PlannerParams& params,
                      const SmoothOptions& smoothing = {});

/// Reference polyline for the tracker: the smoothed curve sampled at about
/// `spacing` µm, or the waypoints when there is no curve.
std::vector<Vec2> path_reference(const PlannedPath& path, double spacing = 2.0);

}  // namespace nocontact::planner

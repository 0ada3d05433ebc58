#include "nocontact/planner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "nocontact/error.hpp"

namespace nocontact::planner {

namespace {
constexpr double kPi = 3.14159265358979323846;
}  // namespace

void World::validate() const {
  if (!(lower.x() < upper.x() && lower.y() < upper.y())) {
    throw ConfigError("world: empty bounds");
  }
  if (!(clearance >= 0.0)) throw ConfigError("world: clearance must be >= 0");
  for (const auto& d : obstacles) {
    if (!(d.radius > 0.0) || !d.center.allFinite()) {
      throw ConfigError("world: obstacle radii must be positive");
    }
  }
}

bool World::point_free(const Vec2& p) const {
  if (p.x() < lower.x() || p.y() < lower.y() || p.x() > upper.x() || p.y() > upper.y()) {
    return false;
  }
  for (const auto& d : obstacles) {
    if ((p - d.center).norm() <= d.radius + clearance) return false;
  }
  return true;
}

bool World::segment_free(const Vec2& a, const Vec2& b) const {
  if (!point_free(a) || !point_free(b)) return false;
  for (const auto& d : obstacles) {
    if (point_segment_distance(d.center, a, b) <= d.radius + clearance) return false;
  }
  return true;
}

bool World::polyline_free(const std::vector<Vec2>& pts, double spacing) const {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!point_free(pts[i])) return false;
    if (i == 0) continue;
    const double len = (pts[i] - pts[i - 1]).norm();
    const int n = static_cast<int>(std::ceil(len / spacing));
    for (int k = 1; k < n; ++k) {
      if (!point_free(pts[i - 1] + (pts[i] - pts[i - 1]) * (static_cast<double>(k) / n))) {
        return false;
      }
    }
  }
  return true;
}

World load_world(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open world file '" + path + "'");
  World w;
  try {
    const auto j = nlohmann::json::parse(in);
    const auto& b = j.at("bounds");
    w.lower = Vec2(b.at(0), b.at(1));
    w.upper = Vec2(b.at(2), b.at(3));
    w.clearance = j.value("clearance", 0.0);
    for (const auto& o : j.at("obstacles")) {
      w.obstacles.push_back({Vec2(o.at(0), o.at(1)), o.at(2).get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("world file '" + path + "': " + e.what());
  }
  w.validate();
  return w;
}

void save_world(const World& world, const std::string& path) {
  nlohmann::json j;
  j["bounds"] = {world.lower.x(), world.lower.y(), world.upper.x(), world.upper.y()};
  j["clearance"] = world.clearance;
  j["obstacles"] = nlohmann::json::array();
  for (const auto& d : world.obstacles) {
    j["obstacles"].push_back({d.center.x(), d.center.y(), d.radius});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

double turning_angle(const Vec2& parent_dir, const Vec2& new_dir) {
  const double n = parent_dir.norm() * new_dir.norm();
  if (!(n > 0.0)) throw DomainError("turning_angle: zero-length direction");
  return std::acos(std::clamp(parent_dir.dot(new_dir) / n, -1.0, 1.0));
}

double turning_angle_literal(const Vec2& child, const Vec2& parent) {
  const double n = child.norm() * parent.norm();
  if (!(n > 0.0)) return 0.0;
  return std::acos(std::clamp(child.dot(parent) / n, -1.0, 1.0));
}

double co_rrt_distance(double sample_angle, const Vec2& sample_pos, double node_angle,
                       const Vec2& node_pos, double angle_weight) {
  const Mat2 rr = Rot2::FromAngle(sample_angle).matrix();
  const Mat2 rt = Rot2::FromAngle(node_angle).matrix();
  const double c = std::clamp((rr.transpose() * rt).trace() / 2.0, -1.0, 1.0);
  return angle_weight * std::abs(std::acos(c)) + (sample_pos - node_pos).norm();
}

PlannerParams PlannerParams::vanilla(std::uint64_t seed, double step) {
  PlannerParams p;
  p.step = step;
  p.theta_max = kPi;
  p.angle_weight = 0.0;
  p.seed = seed;
  return p;
}

namespace {

std::vector<Vec2> trace_back(const std::vector<TreeNode>& tree, std::size_t leaf) {
  std::vector<Vec2> out;
  for (std::optional<std::size_t> i = leaf; i; i = tree[*i].parent) out.push_back(tree[*i].position);
  std::reverse(out.begin(), out.end());
  return out;
}

// Rotates `from` toward `to` by at most `limit`.
Vec2 clamp_direction(const Vec2& from, const Vec2& to, double limit) {
  const double angle = turning_angle(from, to);
  if (angle <= limit) return to.normalized();
  const double sign = cross(from, to) >= 0.0 ? 1.0 : -1.0;
  return Rot2::FromAngle(sign * limit).matrix() * from.normalized();
}

}  // namespace

PlanResult plan_co_rrt(const World& world, const Vec2& start, const Vec2& goal,
                       const PlannerParams& params) {
  world.validate();
  if (!(params.step > 0.0) || params.max_iters < 0 || !(params.theta_max > 0.0)) {
    throw ConfigError("planner: invalid parameters");
  }
  if (!world.point_free(start) || !world.point_free(goal)) {
    throw DomainError("planner: start or goal is in collision");
  }
  const double w = params.angle_weight < 0.0 ? world.diagonal() / kPi : params.angle_weight;
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  PlanResult result;
  auto& tree = result.tree;
  tree.push_back({start, std::nullopt, Vec2(1.0, 0.0), 0.0});
  if ((goal - start).norm() <= params.step && world.segment_free(start, goal)) {
    result.waypoints = {start, goal};
    return result;
  }

  for (int it = 0; it < params.max_iters; ++it) {
    result.iterations = it + 1;
    Vec2 sample = goal;
    if (unit(rng) >= params.goal_bias) {
      const double x = world.lower.x() + unit(rng) * (world.upper.x() - world.lower.x());
      const double y = world.lower.y() + unit(rng) * (world.upper.y() - world.lower.y());
      sample = Vec2(x, y);
    }

    std::size_t nearest = 0;
    double best = INFINITY;
    for (std::size_t i = 0; i < tree.size(); ++i) {
      const Vec2 d = sample - tree[i].position;
      if (d.norm() == 0.0) continue;
      double angle = 0.0;
      if (tree[i].parent) {
        angle = params.form == TurningForm::kDirections
                    ? turning_angle(tree[i].direction, d)
                    : turning_angle_literal(sample, tree[i].position);
      }
      const double dist = co_rrt_distance(angle, sample, tree[i].theta, tree[i].position, w);
      if (dist < best) {
        best = dist;
        nearest = i;
      }
    }
    const TreeNode from = tree[nearest];
    const Vec2 d = sample - from.position;
    if (!(d.norm() > 1e-12)) continue;

    const Vec2 dir = from.parent ? clamp_direction(from.direction, d, params.theta_max)
                                 : Vec2(d.normalized());
    const Vec2 next = from.position + std::min(params.step, d.norm()) * dir;
    if (!world.segment_free(from.position, next)) continue;
    double theta = 0.0;
    if (from.parent) {
      theta = params.form == TurningForm::kDirections
                  ? turning_angle(from.direction, dir)
                  : turning_angle_literal(next, from.position);
    }
    tree.push_back({next, nearest, dir, theta});

    const Vec2 g = goal - next;
    if (g.norm() <= 1e-12) {
      result.waypoints = trace_back(tree, tree.size() - 1);
      return result;
    }
    if (g.norm() <= params.step && world.segment_free(next, goal) &&
        turning_angle(dir, g) <= params.theta_max) {
      tree.push_back({goal, tree.size() - 1, g.normalized(), turning_angle(dir, g)});
      result.waypoints = trace_back(tree, tree.size() - 1);
      return result;
    }
  }
  throw NoPathFound("planner: no path after " + std::to_string(params.max_iters) +
                    " iterations");
}

double max_turning_angle(const std::vector<Vec2>& waypoints) {
  double best = 0.0;
  for (std::size_t i = 1; i + 1 < waypoints.size(); ++i) {
    const Vec2 a = waypoints[i] - waypoints[i - 1];
    const Vec2 b = waypoints[i + 1] - waypoints[i];
    if (a.norm() == 0.0 || b.norm() == 0.0) continue;
    best = std::max(best, turning_angle(a, b));
  }
  return best;
}

const char* to_string(PlanMethod m) {
  switch (m) {
    case PlanMethod::kCoRrt: return "co-rrt";
    case PlanMethod::kRrt: return "rrt";
    case PlanMethod::kCoRrtNoSmooth: return "co-rrt-nosmooth";
  }
  return "?";
}

PlanMethod plan_method_from_string(const std::string& name) {
  if (name == "co-rrt") return PlanMethod::kCoRrt;
  if (name == "rrt") return PlanMethod::kRrt;
  if (name == "co-rrt-nosmooth") return PlanMethod::kCoRrtNoSmooth;
  throw ConfigError("unknown planner method '" + name + "'");
}

std::vector<std::size_t> prune_waypoints(const World& world, const std::vector<Vec2>& waypoints) {
  std::vector<std::size_t> keep;
  if (waypoints.empty()) return keep;
  keep.push_back(0);
  std::size_t i = 0;
  while (i + 1 < waypoints.size()) {
    std::size_t j = waypoints.size() - 1;
    while (j > i + 1 && !world.segment_free(waypoints[i], waypoints[j])) --j;
    keep.push_back(j);
    i = j;
  }
  return keep;
}

std::vector<std::size_t> select_knots(const World& world, const std::vector<Vec2>& waypoints) {
  const std::size_t n = waypoints.size();
  if (n <= 2) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  std::vector<std::vector<char>> visible(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      visible[i][j] = j == i + 1 || world.segment_free(waypoints[i], waypoints[j]);
    }
  }
  // Cubic pieces with handles a third of the shorter neighbour bend by about
  // 1.5·φ / min(len) at a knot, so the cost of knot j between i and k is
  // φ / min(|ij|, |jk|). Bottleneck path over (previous, current) pairs,
  // ties broken by the sum of costs.
  auto cost = [&](std::size_t i, std::size_t j, std::size_t k) -> double {
    const Vec2 a = waypoints[j] - waypoints[i];
    const Vec2 b = waypoints[k] - waypoints[j];
    const double len = std::min(a.norm(), b.norm());
    if (!(len > 0.0)) return INFINITY;
    return turning_angle(a, b) / len;
  };
  struct Best {
    double worst = INFINITY;
    double total = INFINITY;
    std::size_t prev = 0;
  };
  auto better = [](double w, double t, const Best& b) {
    return w < b.worst || (w == b.worst && t < b.total);
  };
  std::vector<std::vector<Best>> best(n, std::vector<Best>(n));
  for (std::size_t k = 1; k < n; ++k) {
    if (visible[0][k]) best[0][k] = {0.0, 0.0, 0};
  }
  for (std::size_t j = 1; j + 1 < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (!std::isfinite(best[i][j].worst)) continue;
      for (std::size_t k = j + 1; k < n; ++k) {
        if (!visible[j][k]) continue;
        const double c = cost(i, j, k);
        const double w = std::max(best[i][j].worst, c);
        const double t = best[i][j].total + c;
        if (better(w, t, best[j][k])) best[j][k] = {w, t, i};
      }
    }
  }
  std::size_t last = 0;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    if (better(best[j][n - 1].worst, best[j][n - 1].total, best[last][n - 1])) last = j;
  }
  std::vector<std::size_t> keep{n - 1};
  for (std::size_t j = last, k = n - 1; k > 0;) {
    keep.push_back(j);
    const std::size_t i = best[j][k].prev;
    k = j;
    j = i;
  }
  std::reverse(keep.begin(), keep.end());
  return keep;
}

BezierCurve smooth_path(const World& world, const std::vector<Vec2>& waypoints,
                        const SmoothOptions& options, std::vector<Vec2>* knots) {
  const PointFree free = [&world](const Vec2& q) { return world.point_free(q); };
  std::vector<std::size_t> keep = select_knots(world, waypoints);
  auto points = [&] {
    std::vector<Vec2> pts;
    for (std::size_t k : keep) pts.push_back(waypoints[k]);
    return pts;
  };
  if (options.mode == BezierMode::kPiecewise) {
    for (;;) {
      const BezierCurve curve = bezier_smooth(points(), options);
      std::vector<std::size_t> next{keep.front()};
      bool split = false;
      for (std::size_t k = 0; k + 1 < keep.size(); ++k) {
        const bool hit = !curve_is_free(BezierCurve{{curve.segments[k]}}, free, options.check_spacing);
        if (hit && keep[k + 1] - keep[k] >= 2) {
          next.push_back((keep[k] + keep[k + 1]) / 2);
          split = true;
        }
        next.push_back(keep[k + 1]);
      }
      if (!split) break;
      keep = std::move(next);
    }
  }
  const std::vector<Vec2> pts = points();
  if (knots) *knots = pts;
  return bezier_smooth(pts, options, free);
}

PlannedPath plan_path(const World& world, const Vec2& start, const Vec2& goal,
                      PlanMethod method, const PlannerParams& params,
                      const SmoothOptions& smoothing) {
  PlannerParams p = params;
  if (method == PlanMethod::kRrt) {
    p.theta_max = kPi;
    p.angle_weight = 0.0;
  }
  PlannedPath out;
  out.method = method;
  out.waypoints = plan_co_rrt(world, start, goal, p).waypoints;
  out.collision_free = world.polyline_free(out.waypoints);
  if (method == PlanMethod::kCoRrt) {
    out.smoothed = smooth_path(world, out.waypoints, smoothing, &out.knots);
    out.collision_free = out.collision_free && curve_is_free(*out.smoothed, [&world](const Vec2& q) {
                           return world.point_free(q);
                         }, 1.0);
    out.max_curvature = max_curvature(*out.smoothed);
  } else {
    out.knots = out.waypoints;
    out.max_curvature = out.waypoints.size() >= 3 ? max_curvature(out.waypoints) : 0.0;
  }
  return out;
}

std::vector<Vec2> path_reference(const PlannedPath& path, double spacing) {
  std::vector<Vec2> out;
  if (path.smoothed) {
    for (const auto& seg : path.smoothed->segments) {
      double len = 0.0;
      for (std::size_t i = 1; i < seg.control.size(); ++i) {
        len += (seg.control[i] - seg.control[i - 1]).norm();
      }
      const int n = std::max(2, static_cast<int>(std::ceil(len / spacing)) + 1);
      for (int k = out.empty() ? 0 : 1; k < n; ++k) {
        out.push_back(seg.eval(static_cast<double>(k) / (n - 1)));
      }
    }
    return out;
  }
  out.push_back(path.waypoints.front());
  for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
    const Vec2 a = path.waypoints[i - 1];
    const Vec2 b = path.waypoints[i];
    const int n = std::max(1, static_cast<int>(std::ceil((b - a).norm() / spacing)));
    for (int k = 1; k <= n; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / n));
  }
  return out;
}

}  // namespace nocontact::planner

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "nocontact/error.hpp"
#include "nocontact/planner.hpp"

using namespace nocontact;
using namespace nocontact::planner;

namespace {

// Textbook RRT with Euclidean nearest neighbour and the same sampling stream
// (goal-bias draw, then x, then y).
std::vector<Vec2> reference_rrt(const World& world, const Vec2& start, const Vec2& goal,
                                double step, double goal_bias, std::uint64_t seed,
                                int max_iters, std::size_t* tree_size) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec2> nodes{start};
  std::vector<long> parent{-1};
  auto path_to = [&](long leaf) {
    std::vector<Vec2> out;
    for (long i = leaf; i >= 0; i = parent[i]) out.push_back(nodes[i]);
    std::reverse(out.begin(), out.end());
    return out;
  };
  for (int it = 0; it < max_iters; ++it) {
    Vec2 sample = goal;
    if (unit(rng) >= goal_bias) {
      const double x = world.lower.x() + unit(rng) * (world.upper.x() - world.lower.x());
      const double y = world.lower.y() + unit(rng) * (world.upper.y() - world.lower.y());
      sample = Vec2(x, y);
    }
    long best = 0;
    double best_d = INFINITY;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double d = (sample - nodes[i]).norm();
      if (d > 0.0 && d < best_d) {
        best_d = d;
        best = static_cast<long>(i);
      }
    }
    const Vec2 d = sample - nodes[best];
    if (!(d.norm() > 1e-12)) continue;
    const Vec2 next = nodes[best] + std::min(step, d.norm()) * d.normalized();
    if (!world.segment_free(nodes[best], next)) continue;
    nodes.push_back(next);
    parent.push_back(best);
    const long leaf = static_cast<long>(nodes.size()) - 1;
    if ((goal - next).norm() <= 1e-12) {
      *tree_size = nodes.size();
      return path_to(leaf);
    }
    if ((goal - next).norm() <= step && world.segment_free(next, goal)) {
      nodes.push_back(goal);
      parent.push_back(leaf);
      *tree_size = nodes.size();
      return path_to(leaf + 1);
    }
  }
  *tree_size = nodes.size();
  return {};
}

World canned_world() { return load_world(std::string(NOCONTACT_DATA_DIR) + "/clutter_world.json"); }

World random_world(std::uint64_t seed, const Vec2& start, const Vec2& goal) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(40.0, 472.0);
  std::uniform_real_distribution<double> rad(20.0, 45.0);
  World w;
  w.clearance = 8.0;
  while (w.obstacles.size() < 10) {
    const Disc d{Vec2(pos(rng), pos(rng)), rad(rng)};
    if ((d.center - start).norm() < d.radius + 30.0 || (d.center - goal).norm() < d.radius + 30.0) {
      continue;
    }
    w.obstacles.push_back(d);
  }
  return w;
}

}  // namespace

TEST(TurningAngle, Examples) {
  EXPECT_NEAR(turning_angle({1, 0}, {2, 0}), 0.0, 1e-15);
  EXPECT_NEAR(turning_angle({1, 0}, {-1, 0}), std::numbers::pi, 1e-15);
  EXPECT_NEAR(turning_angle({1, 0}, {0, 1}), std::numbers::pi / 2, 1e-15);
  EXPECT_THROW(turning_angle({0, 0}, {1, 0}), DomainError);
}

TEST(CoRrtDistance, Examples) {
  EXPECT_NEAR(co_rrt_distance(0.3, {3, 4}, 0.3, {0, 0}, 100.0), 5.0, 1e-9);
  EXPECT_NEAR(co_rrt_distance(0.0, {1, 1}, std::numbers::pi, {1, 1}, 1.0), std::numbers::pi, 1e-9);
}

TEST(CoRrtDistance, TraceIdentityIsWrappedAngleDifference) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> a(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = a(rng), y = a(rng);
    const double diff = std::abs(std::remainder(x - y, 2.0 * std::numbers::pi));
    EXPECT_NEAR(co_rrt_distance(x, {0, 0}, y, {0, 0}, 1.0), diff, 1e-7);
  }
}

TEST(CoRrt, EmptyWorldIsNearStraight) {
  World w;
  const Vec2 start(50, 50), goal(250, 50);
  PlannerParams p;
  p.step = 60.0;  // ≥ ‖goal − start‖ / 4
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    p.seed = seed;
    const auto path = plan_co_rrt(w, start, goal, p).waypoints;
    EXPECT_LE(path.size(), 2u + 3u) << "seed " << seed;
    EXPECT_EQ(path.front(), start);
    EXPECT_EQ(path.back(), goal);
  }
}

TEST(CoRrt, RoutesAroundSingleDisc) {
  World w;
  w.clearance = 5.0;
  w.obstacles.push_back({Vec2(256, 256), 60.0});
  const Vec2 start(100, 256), goal(412, 256);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    PlannerParams p;
    p.seed = seed;
    const auto path = plan_co_rrt(w, start, goal, p).waypoints;
    for (const Vec2& q : path) EXPECT_GT((q - w.obstacles[0].center).norm(), 65.0);
    EXPECT_TRUE(w.polyline_free(path));
  }
}

TEST(CoRrt, ExtensionsRespectTurnLimit) {
  const World w = canned_world();
  PlannerParams p;
  p.seed = 3;
  const PlanResult r = plan_co_rrt(w, {30, 30}, {480, 480}, p);
  for (const auto& node : r.tree) {
    EXPECT_LE(node.theta, p.theta_max + 1e-12);
    EXPECT_NEAR(node.direction.norm(), 1.0, 1e-12);
    if (node.parent) {
      EXPECT_LE((node.position - r.tree[*node.parent].position).norm(), p.step + 1e-9);
      EXPECT_TRUE(w.segment_free(r.tree[*node.parent].position, node.position));
    }
  }
  EXPECT_LE(max_turning_angle(r.waypoints), p.theta_max + 1e-9);
}

TEST(CoRrt, DeterministicPerSeed) {
  const World w = canned_world();
  PlannerParams p;
  p.seed = 7;
  EXPECT_EQ(plan_co_rrt(w, {30, 30}, {480, 480}, p).waypoints,
            plan_co_rrt(w, {30, 30}, {480, 480}, p).waypoints);
}

TEST(CoRrt, VanillaSettingsReduceToRrt) {
  const World w = canned_world();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PlanResult got = plan_co_rrt(w, {30, 30}, {480, 480}, PlannerParams::vanilla(seed));
    std::size_t tree_size = 0;
    const auto want = reference_rrt(w, {30, 30}, {480, 480}, 10.0, 0.1, seed, 20000, &tree_size);
    EXPECT_EQ(got.waypoints, want) << "seed " << seed;
    EXPECT_EQ(got.tree.size(), tree_size) << "seed " << seed;
  }
}

TEST(CoRrt, ErrorsOnBlockedEndpointsAndExhaustion) {
  World w;
  w.obstacles.push_back({Vec2(100, 100), 20.0});
  EXPECT_THROW(plan_co_rrt(w, {100, 100}, {400, 400}, PlannerParams{}), DomainError);
  // Goal enclosed by a ring of discs.
  World ring;
  for (int k = 0; k < 24; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 24;
    ring.obstacles.push_back({Vec2(400 + 40 * std::cos(a), 400 + 40 * std::sin(a)), 8.0});
  }
  PlannerParams p;
  p.max_iters = 2000;
  EXPECT_THROW(plan_co_rrt(ring, {50, 50}, {400, 400}, p), NoPathFound);
}

TEST(CoRrt, TurnsLessThanRrtOnMatchedSeeds) {
  const World w = canned_world();
  std::vector<double> co, rrt;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    PlannerParams p;
    p.seed = seed;
    co.push_back(max_turning_angle(plan_co_rrt(w, {30, 30}, {480, 480}, p).waypoints));
    rrt.push_back(max_turning_angle(plan_co_rrt(w, {30, 30}, {480, 480}, PlannerParams::vanilla(seed)).waypoints));
  }
  std::nth_element(co.begin(), co.begin() + 10, co.end());
  std::nth_element(rrt.begin(), rrt.begin() + 10, rrt.end());
  EXPECT_LE(co[10], rrt[10]);
}

TEST(Prune, KeepsEndpointsAndFreeSegments) {
  const World w = canned_world();
  PlannerParams p;
  p.seed = 2;
  const auto raw = plan_co_rrt(w, {30, 30}, {480, 480}, p).waypoints;
  const auto keep = prune_waypoints(w, raw);
  ASSERT_GE(keep.size(), 2u);
  EXPECT_EQ(keep.front(), 0u);
  EXPECT_EQ(keep.back(), raw.size() - 1);
  for (std::size_t i = 1; i < keep.size(); ++i) {
    EXPECT_LT(keep[i - 1], keep[i]);
    EXPECT_TRUE(w.segment_free(raw[keep[i - 1]], raw[keep[i]]));
  }
  EXPECT_LT(keep.size(), raw.size());
}

TEST(PlanPath, SmoothedPathIsFreeAndInterpolatesEndpoints) {
  const World w = canned_world();
  PlannerParams p;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    p.seed = seed;
    const PlannedPath path = plan_path(w, {30, 30}, {480, 480}, PlanMethod::kCoRrt, p);
    ASSERT_TRUE(path.smoothed);
    EXPECT_TRUE(path.collision_free);
    EXPECT_TRUE(curve_is_free(*path.smoothed, [&](const Vec2& q) { return w.point_free(q); }, 1.0));
    EXPECT_LT((path.smoothed->start() - Vec2(30, 30)).norm(), 1e-6);
    EXPECT_LT((path.smoothed->end() - Vec2(480, 480)).norm(), 1e-6);
    const auto ref = path_reference(path, 2.0);
    EXPECT_TRUE(w.polyline_free(ref, 1.0));
  }
}

TEST(PlanPath, SmoothingLowersCurvatureOnRandomWorlds) {
  const Vec2 start(20, 20), goal(490, 490);
  int not_worse = 0;
  const int worlds = 20;
  for (int seed = 1; seed <= worlds; ++seed) {
    const World w = random_world(100 + seed, start, goal);
    PlannerParams p;
    p.seed = static_cast<std::uint64_t>(seed);
    const PlannedPath path = plan_path(w, start, goal, PlanMethod::kCoRrt, p);
    ASSERT_TRUE(path.collision_free) << "world " << seed;
    const double raw = path.waypoints.size() >= 3 ? max_curvature(path.waypoints) : 0.0;
    if (path.max_curvature <= raw) ++not_worse;
  }
  EXPECT_GE(not_worse, worlds * 9 / 10) << not_worse << "/" << worlds;
}

TEST(PlanMethod, StringRoundTrip) {
  for (PlanMethod m : {PlanMethod::kCoRrt, PlanMethod::kRrt, PlanMethod::kCoRrtNoSmooth}) {
    EXPECT_EQ(plan_method_from_string(to_string(m)), m);
  }
  EXPECT_THROW(plan_method_from_string("astar"), ConfigError);
}

TEST(World, JsonRoundTrip) {
  const World w = canned_world();
  const std::string path = ::testing::TempDir() + "world_roundtrip.json";
  save_world(w, path);
  const World back = load_world(path);
  ASSERT_EQ(back.obstacles.size(), w.obstacles.size());
  EXPECT_EQ(back.clearance, w.clearance);
  for (std::size_t i = 0; i < w.obstacles.size(); ++i) {
    EXPECT_EQ(back.obstacles[i].center, w.obstacles[i].center);
    EXPECT_EQ(back.obstacles[i].radius, w.obstacles[i].radius);
  }
  EXPECT_THROW(load_world("/nonexistent/world.json"), IoError);
}

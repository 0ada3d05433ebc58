#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "nocontact/bezier.hpp"
#include "nocontact/error.hpp"
#include "oracles.hpp"

using namespace nocontact;
using namespace nocontact::planner;

namespace {

std::vector<Vec2> random_polyline(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> d(0.0, 200.0);
  std::vector<Vec2> p;
  for (int i = 0; i < n; ++i) p.emplace_back(d(rng), d(rng));
  return p;
}

// Largest relative mismatch of the one-sided derivatives at the joins.
double c1_mismatch(const BezierCurve& c) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < c.segments.size(); ++i) {
    const Vec2 left = c.segments[i].derivative(1.0);
    const Vec2 right = c.segments[i + 1].derivative(0.0);
    worst = std::max(worst, (left - right).norm() / std::max(1.0, left.norm()));
  }
  return worst;
}

}  // namespace

TEST(Bernstein, MatchesOracleAndSumsToOne) {
  for (int q = 1; q <= 12; ++q) {
    for (int k = 0; k <= 100; ++k) {
      const double t = k / 100.0;
      double sum = 0.0;
      for (int i = 0; i <= q; ++i) {
        const double b = bernstein(q, i, t);
        EXPECT_NEAR(b, oracle::bernstein(q, i, t), 1e-13);
        sum += b;
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
  EXPECT_EQ(bernstein(3, -1, 0.5), 0.0);
  EXPECT_EQ(bernstein(3, 4, 0.5), 0.0);
}

TEST(BezierSegment, DeCasteljauEqualsBernsteinSum) {
  std::mt19937_64 rng(2);
  for (int q = 1; q <= 8; ++q) {
    const BezierSegment seg{random_polyline(rng, q + 1)};
    for (double t : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
      Vec2 want = Vec2::Zero();
      for (int i = 0; i <= q; ++i) want += oracle::bernstein(q, i, t) * seg.control[i];
      EXPECT_LT((seg.eval(t) - want).norm(), 1e-10);
    }
  }
}

TEST(BezierSegment, DerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(3);
  const BezierSegment seg{random_polyline(rng, 5)};
  const double h = 1e-6;
  for (double t : {0.2, 0.5, 0.8}) {
    const Vec2 fd = (seg.eval(t + h) - seg.eval(t - h)) / (2 * h);
    EXPECT_LT((seg.derivative(t) - fd).norm(), 1e-5 * fd.norm());
    const Vec2 fd2 = (seg.derivative(t + h) - seg.derivative(t - h)) / (2 * h);
    EXPECT_LT((seg.second_derivative(t) - fd2).norm(), 1e-5 * std::max(1.0, fd2.norm()));
  }
}

TEST(Hodograph, ScaledDifferences) {
  const auto d = hodograph({{0, 0}, {1, 0}, {3, 2}});
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0], Vec2(2, 0));
  EXPECT_EQ(d[1], Vec2(4, 4));
}

TEST(BezierSmooth, InterpolatesEndpointsAndIsC1) {
  std::mt19937_64 rng(5);
  for (BezierMode mode : {BezierMode::kPiecewise, BezierMode::kGlobal}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto pts = random_polyline(rng, 3 + trial % 8);
      SmoothOptions opt;
      opt.mode = mode;
      opt.degree = 3 + trial % 3;
      const BezierCurve c = bezier_smooth(pts, opt);
      EXPECT_LT((c.start() - pts.front()).norm(), 1e-6);
      EXPECT_LT((c.end() - pts.back()).norm(), 1e-6);
      EXPECT_LT(c1_mismatch(c), 1e-9);
      for (std::size_t i = 0; i + 1 < c.segments.size(); ++i) {
        EXPECT_LT((c.segments[i].eval(1.0) - c.segments[i + 1].eval(0.0)).norm(), 1e-9);
      }
    }
  }
}

TEST(BezierSmooth, PiecewiseInterpolatesEveryWaypoint) {
  std::mt19937_64 rng(6);
  const auto pts = random_polyline(rng, 7);
  const BezierCurve c = bezier_smooth(pts);
  ASSERT_EQ(c.segments.size(), pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    EXPECT_LT((c.segments[i].eval(0.0) - pts[i]).norm(), 1e-12);
    EXPECT_EQ(c.segments[i].degree(), 3);
  }
}

TEST(BezierSmooth, TwoWaypointsGiveStraightSegment) {
  for (int q : {3, 5}) {
    SmoothOptions opt;
    opt.degree = q;
    const BezierCurve c = bezier_smooth({{0, 0}, {10, 5}}, opt);
    ASSERT_EQ(c.segments.size(), 1u);
    for (double t : {0.25, 0.5, 0.75}) {
      const Vec2 p = c.segments[0].eval(t);
      EXPECT_NEAR(cross(p, Vec2(10, 5)), 0.0, 1e-9);
    }
    EXPECT_NEAR(max_curvature(c), 0.0, 1e-12);
  }
}

// The interpolating piecewise curve must pass the vertex, so it cannot bend
// less than the circumcircle of the three points; this fails by
// construction. The quadratic on the control polygon ties it exactly.
TEST(BezierSmooth, RightAngleCornerLowersCurvature) {
  const std::vector<Vec2> corner{{0, 0}, {10, 0}, {10, 10}};
  const double raw = max_curvature(corner);
  EXPECT_NEAR(raw, 1.0 / (5.0 * std::sqrt(2.0)), 1e-12);
  EXPECT_LT(max_curvature(bezier_smooth(corner)), raw);
}

TEST(BezierSmooth, GlobalCornerTiesCircumcircle) {
  const std::vector<Vec2> corner{{0, 0}, {10, 0}, {10, 10}};
  SmoothOptions opt;
  opt.mode = BezierMode::kGlobal;
  const BezierCurve c = bezier_smooth(corner, opt);
  ASSERT_EQ(c.segments.size(), 1u);
  EXPECT_NEAR(c.segments[0].curvature(0.5), max_curvature(corner), 1e-12);
  EXPECT_LE(max_curvature(c), max_curvature(corner) + 1e-12);
}

TEST(BezierSmooth, RejectsDegenerateInput) {
  EXPECT_THROW(bezier_smooth({{1, 1}}), DomainError);
  EXPECT_THROW(bezier_smooth({{1, 1}, {1, 1}}), DomainError);
  SmoothOptions opt;
  opt.degree = 1;
  EXPECT_THROW(bezier_smooth({{0, 0}, {1, 1}}, opt), DomainError);
  opt.degree = 2;  // piecewise C1 needs cubic pieces
  EXPECT_THROW(bezier_smooth({{0, 0}, {1, 1}, {2, 0}}, opt), DomainError);
}

TEST(BezierSmooth, RepairAvoidsObstacle) {
  // Obstacle centred on the unrepaired curve but clear of the polyline.
  const std::vector<Vec2> pts{{0, 0}, {50, 0}, {50, 50}};
  const BezierCurve plain = bezier_smooth(pts);
  const Vec2 center = plain.segments[0].eval(0.85);
  const double radius = 0.5 * point_polyline_distance(center, pts);
  ASSERT_GT(radius, 0.2);
  const PointFree free = [&](const Vec2& p) { return (p - center).norm() > radius; };
  EXPECT_FALSE(curve_is_free(plain, free));
  const BezierCurve repaired = bezier_smooth(pts, SmoothOptions{}, free);
  EXPECT_TRUE(curve_is_free(repaired, free, 0.1));
  EXPECT_LT(c1_mismatch(repaired), 1e-9);
}

TEST(Curvature, CircleAndLine) {
  std::vector<Vec2> circle;
  for (int i = 0; i < 400; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 400;
    circle.emplace_back(30.0 * std::cos(a), 30.0 * std::sin(a));
  }
  EXPECT_NEAR(max_curvature(circle), 1.0 / 30.0, 0.01 / 30.0);
  EXPECT_EQ(max_curvature(std::vector<Vec2>{{0, 0}, {1, 1}, {2, 2}, {5, 5}}), 0.0);
  EXPECT_EQ(triple_curvature({0, 0}, {0, 0}, {1, 0}), 0.0);
  EXPECT_THROW(max_curvature(std::vector<Vec2>{{0, 0}, {1, 0}}), DomainError);

  // Quarter circle as a cubic (handle 0.5523) has curvature within 0.03% of 1/R.
  const double k = 4.0 / 3.0 * (std::sqrt(2.0) - 1.0);
  const BezierCurve arc{{BezierSegment{{{10, 0}, {10, 10 * k}, {10 * k, 10}, {0, 10}}}}};
  EXPECT_NEAR(max_curvature(arc), 0.1, 0.1 * 0.01);
}

TEST(Sample, SharedJoinsAppearOnce) {
  const BezierCurve c = bezier_smooth({{0, 0}, {10, 0}, {20, 5}});
  const auto pts = c.sample(11);
  EXPECT_EQ(pts.size(), 21u);
  EXPECT_EQ(pts.front(), Vec2(0, 0));
  EXPECT_LT((pts.back() - Vec2(20, 5)).norm(), 1e-12);
}

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "nocontact/error.hpp"
#include "nocontact/geometry.hpp"

using namespace nocontact;

TEST(Rot2, FromAngleIsOrthonormal) {
  for (double a : {-3.0, -1.0, 0.0, 0.4, 2.5}) {
    const Rot2 r = Rot2::FromAngle(a);
    EXPECT_NEAR((r.matrix() * r.matrix().transpose() - Mat2::Identity()).norm(), 0.0, 1e-15);
    EXPECT_NEAR(r.matrix().determinant(), 1.0, 1e-15);
    EXPECT_NEAR(r.angle(), a, 1e-12);
  }
}

TEST(Rot2, CompositionAddsAngles) {
  const Rot2 r = Rot2::FromAngle(0.3) * Rot2::FromAngle(0.5);
  EXPECT_NEAR(r.angle(), 0.8, 1e-12);
  EXPECT_NEAR((r * r.transpose()).angle(), 0.0, 1e-15);
}

TEST(LocalFrame, MapsRelativePositionOntoFirstAxis) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-50.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 x(d(rng), d(rng));
    if (x.norm() < 1e-3) continue;
    const Vec2 local = local_frame(x) * x;
    EXPECT_NEAR(local.x(), x.norm(), 1e-12);
    EXPECT_NEAR(local.y(), 0.0, 1e-12);
  }
}

TEST(LocalFrame, AxisAlignedCases) {
  // x_r along +y: normal axis (0, 1), tangential axis (-1, 0).
  const Mat2& R = local_frame(Vec2(0.0, 3.0)).matrix();
  EXPECT_NEAR(R(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(R(0, 1), 1.0, 1e-15);
  EXPECT_NEAR(R(1, 0), -1.0, 1e-15);
  EXPECT_NEAR(R(1, 1), 0.0, 1e-15);
}

TEST(LocalFrame, ZeroVectorThrows) {
  EXPECT_THROW(local_frame(Vec2::Zero()), DomainError);
  EXPECT_THROW(local_frame(Vec2(NAN, 1.0)), DomainError);
}

TEST(NormalizedDistance, SumAndMeanNormalizers) {
  const Vec2 x(30.0, 40.0);  // 50 µm
  EXPECT_DOUBLE_EQ(normalized_distance(x, 5.0, 5.0), 5.0);
  EXPECT_DOUBLE_EQ(normalized_distance(x, 5.0, 5.0, RadiusNormalizer::kMean), 10.0);
  EXPECT_DOUBLE_EQ(normalized_distance(x, 10.0, 15.0), 2.0);
  EXPECT_THROW(normalized_distance(x, 0.0, 0.0), DomainError);
}

TEST(Contact, ThresholdIsInclusive) {
  SystemState s;
  s.object = Vec2(20.0, 0.0);
  s.robot = Vec2::Zero();
  EXPECT_TRUE(in_contact(s));  // s_r = 2 exactly
  s.object.x() = 20.0 + 1e-9;
  EXPECT_FALSE(in_contact(s));
}

TEST(Distance, PointSegmentAndPolyline) {
  EXPECT_DOUBLE_EQ(point_segment_distance({0, 1}, {-1, 0}, {1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({3, 4}, {0, 0}, {0, 0}), 5.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({2, 1}, {-1, 0}, {1, 0}), std::sqrt(2.0));
  const std::vector<Vec2> line{{0, 0}, {10, 0}, {10, 10}};
  EXPECT_DOUBLE_EQ(point_polyline_distance({12, 5}, line), 2.0);
  EXPECT_DOUBLE_EQ(point_polyline_distance({5, 0}, line), 0.0);
  EXPECT_DOUBLE_EQ(point_polyline_distance({1, 1}, {{0, 0}}), std::sqrt(2.0));
}

TEST(Cross, SignFollowsOrientation) {
  EXPECT_DOUBLE_EQ(cross({1, 0}, {0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(cross({0, 1}, {1, 0}), -1.0);
}

TEST(LocalFrame, SpecialCasesAndEquivariance) {
  EXPECT_LT((local_frame(Vec2(1, 0)).matrix() - Mat2::Identity()).norm(), 1e-15);
  EXPECT_NEAR(local_frame(Vec2(0, 1)).angle(), -std::numbers::pi / 2, 1e-15);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(-10.0, 10.0), a(-3.1, 3.1);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 x(d(rng), d(rng));
    if (x.norm() < 1e-3) continue;
    const Rot2 Q = Rot2::FromAngle(a(rng));
    const Mat2 lhs = local_frame(Q * x).matrix();
    const Mat2 rhs = local_frame(x).matrix() * Q.matrix().transpose();
    EXPECT_LT((lhs - rhs).norm(), 1e-10);
    const Mat2& R = local_frame(x).matrix();
    EXPECT_LT((R.transpose() * R - Mat2::Identity()).norm(), 1e-12);
    EXPECT_NEAR(R.determinant(), 1.0, 1e-12);
  }
}

TEST(NormalizedDistance, ExamplesAndScaleConsistency) {
  EXPECT_DOUBLE_EQ(normalized_distance(Vec2(20, 0), 5, 5), 2.0);
  EXPECT_DOUBLE_EQ(normalized_distance(Vec2(3, 4), 1, 1), 2.5);
  EXPECT_DOUBLE_EQ(normalized_distance(Vec2(22.5, 0), 5, 5), 2.25);
  EXPECT_DOUBLE_EQ(normalized_distance(Vec2(14, -3), 2, 7),
                   normalized_distance(Vec2(28, -6), 4, 14));
}

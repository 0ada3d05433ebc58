#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "nocontact/ablation.hpp"
#include "nocontact/error.hpp"
#include "nocontact/plant.hpp"
#include "nocontact/rbfn.hpp"
#include "oracles.hpp"

using namespace nocontact;
using namespace nocontact::rbfn;
using plant::DataTuple;

namespace {

std::vector<DataTuple> dataset(std::size_t n, std::uint64_t seed, double brownian = 0.05) {
  plant::PlantConfig cfg;
  cfg.seed = seed;
  cfg.brownian = brownian;
  return plant::collect_dataset(plant::ExcitationPolicy{}, n, cfg);
}

RbfnModel random_model(std::mt19937_64& rng, Activation kind, Eigen::Index p) {
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  RbfnModel m;
  m.kind = kind;
  m.centers = Eigen::VectorXd::LinSpaced(p, 2.0, 6.0);
  m.widths = Eigen::VectorXd::Constant(p, 1.0);
  for (Eigen::Index i = 0; i < p; ++i) {
    m.centers(i) += 0.3 * w(rng);
    m.widths(i) = 0.5 + std::abs(w(rng));
  }
  m.w_object = WeightMatrix::NullaryExpr(2, p, [&] { return w(rng); });
  m.w_relative = WeightMatrix::NullaryExpr(2, p, [&] { return w(rng); });
  return m;
}

}  // namespace

TEST(Activation, ClosedForms) {
  RbfnModel m;
  m.centers = Eigen::Vector2d(2.0, 3.0);
  m.widths = Eigen::Vector2d(1.0, 2.0);
  m.kind = Activation::kMultiquadric;
  const Eigen::VectorXd mq = activation(3.5, m);
  EXPECT_NEAR(mq(0), std::sqrt(1.0 + 1.5 * 1.5), 1e-15);
  EXPECT_NEAR(mq(1), std::sqrt(2.0), 1e-15);
  m.kind = Activation::kGaussian;
  const Eigen::VectorXd g = activation(3.5, m);
  EXPECT_NEAR(g(0), std::exp(-2.25), 1e-15);
  EXPECT_NEAR(g(1), std::exp(-1.0), 1e-15);
}

TEST(Predict, LocalFrameStructure) {
  std::mt19937_64 rng(4);
  const RbfnModel m = random_model(rng, Activation::kMultiquadric, 5);
  std::uniform_real_distribution<double> d(-30.0, 30.0);
  for (int i = 0; i < 50; ++i) {
    const Vec2 x_r(d(rng), d(rng));
    if (x_r.norm() < 1.0) continue;
    const Vec2 u(d(rng), d(rng));
    const Eigen::VectorXd phi = activation(m.s_r(x_r), m);
    const Eigen::Vector2d gains = m.w_object * phi;
    const Vec2 want = oracle::local_field(x_r, gains(0), gains(1), u);
    EXPECT_LT((predict_velocity(m, x_r, u, Channel::kObject) - want).norm(), 1e-10);
    const Mat2 g = predict_g(m, x_r, Channel::kRelative);
    EXPECT_LT((g - g.transpose()).norm(), 1e-12);
  }
}

TEST(LossGradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(9);
  const auto data = dataset(40, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const Activation kind = trial % 2 ? Activation::kGaussian : Activation::kMultiquadric;
    const RbfnModel m = random_model(rng, kind, 6);
    const double wd = trial % 3 == 0 ? 1e-3 : 0.0;
    const Eigen::VectorXd analytic = pack_gradient(loss_gradient(m, data, wd));
    const Eigen::VectorXd numeric = oracle::numeric_gradient(m, data, wd);
    ASSERT_EQ(analytic.size(), numeric.size());
    const double rel = (analytic - numeric).norm() / std::max(numeric.norm(), 1e-12);
    EXPECT_LT(rel, 1e-5) << "trial " << trial;
    EXPECT_NEAR(loss_gradient(m, data, wd).value, loss(m, data, wd), 1e-12 * loss(m, data, wd));
  }
}

TEST(Pack, RoundTrip) {
  std::mt19937_64 rng(1);
  const RbfnModel m = random_model(rng, Activation::kGaussian, 4);
  RbfnModel copy = m;
  copy.w_object.setZero();
  unpack_parameters(pack_parameters(m), copy);
  EXPECT_EQ(copy.w_object, m.w_object);
  EXPECT_EQ(copy.w_relative, m.w_relative);
  EXPECT_EQ(copy.centers, m.centers);
  EXPECT_EQ(copy.widths, m.widths);
  EXPECT_EQ(pack_parameters(m).size(), 4 * 4 + 2 * 4);
}

TEST(Training, NoiselessDataIsFitClosely) {
  const auto train = dataset(400, 1, 0.0);
  const auto test = dataset(400, 2, 0.0);
  TrainConfig cfg;
  cfg.epochs = 500;
  const TrainResult r = train_offline(train, 16, Activation::kMultiquadric, cfg);
  EXPECT_LT(test_error(r.model, test, Channel::kObject), 0.02);
  EXPECT_LT(test_error(r.model, test, Channel::kRelative), 0.02);
  ASSERT_FALSE(r.loss_curve.empty());
  EXPECT_LE(r.final_loss, r.loss_curve.front());
}

TEST(Training, RecoversGroundTruthGains) {
  const auto train = dataset(800, 1, 0.0);
  TrainConfig cfg;
  cfg.epochs = 500;
  const RbfnModel m = train_offline(train, 16, Activation::kMultiquadric, cfg).model;
  const plant::PlantConfig truth;
  for (double s : {2.2, 2.5, 3.0, 4.0}) {
    const Vec2 x_r(10.0 * s, 0.0);
    const Mat2 g = predict_g(m, x_r, Channel::kObject);
    EXPECT_NEAR(g(0, 0), truth.normal(s), 0.02) << "s=" << s;
    EXPECT_NEAR(g(1, 1), truth.tangential(s), 0.02) << "s=" << s;
  }
}

TEST(Training, FitWeightsMinimizesLossOnFrozenBasis) {
  std::mt19937_64 rng(6);
  const auto data = dataset(200, 4);
  RbfnModel m = random_model(rng, Activation::kMultiquadric, 6);
  fit_weights(m, data, 0.0);
  const double best = loss(m, data);
  // Any weight perturbation raises the loss.
  std::normal_distribution<double> n(0.0, 1e-3);
  for (int i = 0; i < 20; ++i) {
    RbfnModel p = m;
    p.w_object += WeightMatrix::NullaryExpr(2, 6, [&] { return n(rng); });
    p.w_relative += WeightMatrix::NullaryExpr(2, 6, [&] { return n(rng); });
    EXPECT_GE(loss(p, data), best - 1e-12);
  }
  // Gradient wrt weights vanishes at the least-squares solution.
  const LossGradient g = loss_gradient(m, data);
  EXPECT_LT(g.w_object.norm(), 1e-8);
  EXPECT_LT(g.w_relative.norm(), 1e-8);
}

TEST(Training, ErrorsOnBadData) {
  std::vector<DataTuple> same(10);
  for (auto& t : same) {
    t.x_r = Vec2(25.0, 0.0);
    t.u = Vec2(1.0, 0.0);
    t.v_u = Vec2(1.0, 0.0);
    t.v_r = Vec2::Zero();
  }
  EXPECT_THROW(train_offline(same, 4, Activation::kMultiquadric, TrainConfig{}), DegenerateCenters);
  EXPECT_THROW(train_offline({}, 4, Activation::kMultiquadric, TrainConfig{}), InsufficientData);

  auto bad = dataset(20, 1);
  bad[3].v_u.x() = std::numeric_limits<double>::infinity();
  EXPECT_THROW(train_offline(bad, 4, Activation::kMultiquadric, TrainConfig{}), TrainingDiverged);

  std::vector<DataTuple> slow(5);
  for (std::size_t i = 0; i < slow.size(); ++i) slow[i].x_r = Vec2(20.0 + i, 0.0);
  std::mt19937_64 rng(1);
  EXPECT_THROW(test_error(random_model(rng, Activation::kGaussian, 3), slow, Channel::kObject),
               InsufficientData);
}

TEST(TestError, HandComputed) {
  RbfnModel m;
  m.centers = Eigen::VectorXd::Constant(1, 3.0);
  m.widths = Eigen::VectorXd::Constant(1, 1.0);
  m.kind = Activation::kGaussian;
  m.w_object = WeightMatrix::Zero(2, 1);
  m.w_relative = WeightMatrix::Zero(2, 1);
  m.w_object(0, 0) = 1.0;  // gain 1 at s = 3 along the normal
  std::vector<DataTuple> data(2);
  for (auto& t : data) t.x_r = Vec2(30.0, 0.0);
  data[0].u = Vec2(1.0, 0.0);
  data[0].v_u = Vec2(1.0, 0.0);  // exact
  data[1].u = Vec2(1.0, 0.0);
  data[1].v_u = Vec2(2.0, 0.0);  // off by half
  EXPECT_NEAR(test_error(m, data, Channel::kObject), 0.25, 1e-15);
}

TEST(Serialization, JsonRoundTripIsExact) {
  std::mt19937_64 rng(8);
  const RbfnModel m = random_model(rng, Activation::kGaussian, 7);
  const RbfnModel back = from_json(to_json(m));
  EXPECT_EQ(back.kind, m.kind);
  EXPECT_EQ(back.centers, m.centers);
  EXPECT_EQ(back.widths, m.widths);
  EXPECT_EQ(back.w_object, m.w_object);
  EXPECT_EQ(back.w_relative, m.w_relative);
  EXPECT_EQ(to_json(back), to_json(m));
  EXPECT_THROW(from_json("{\"kind\": 3}"), std::exception);
}

TEST(Ablation, LocalFrameBeatsGlobalFrame) {
  const auto train = dataset(400, 1);
  const auto test = dataset(2000, 1001);
  TrainConfig cfg;
  cfg.epochs = 300;
  const RbfnModel local = train_offline(train, 32, Activation::kMultiquadric, cfg).model;
  const GlobalFrameModel global = fit_global_frame(train);
  EXPECT_LT(test_error(local, test, Channel::kObject), test_error(global, test, Channel::kObject));
}

TEST(InitialModel, CentersSpanTheData) {
  const auto data = dataset(100, 2);
  const RbfnModel m = initial_model(data, 8, Activation::kMultiquadric, 5.0, 5.0, 0.0);
  double lo = 1e9, hi = -1e9;
  for (const auto& t : data) {
    lo = std::min(lo, m.s_r(t.x_r));
    hi = std::max(hi, m.s_r(t.x_r));
  }
  EXPECT_NEAR(m.centers.minCoeff(), lo, 1e-12);
  EXPECT_NEAR(m.centers.maxCoeff(), hi, 1e-12);
  EXPECT_TRUE(m.w_object.isZero());
  EXPECT_NO_THROW(m.validate());
}

TEST(Activation, Asymptotics) {
  RbfnModel m;
  m.centers = Eigen::VectorXd::Constant(1, 3.0);
  m.widths = Eigen::VectorXd::Constant(1, 1.0);
  m.kind = Activation::kMultiquadric;
  EXPECT_DOUBLE_EQ(activation(3.0, m)(0), 1.0);
  EXPECT_DOUBLE_EQ(activation(4.0, m)(0), std::sqrt(2.0));
  EXPECT_NEAR(activation(1003.0, m)(0) / 1000.0, 1.0, 1e-6);
  m.kind = Activation::kGaussian;
  EXPECT_DOUBLE_EQ(activation(3.0, m)(0), 1.0);
  EXPECT_LT(activation(13.0, m)(0), 1e-40);
}

TEST(Predict, RotationEquivariance) {
  std::mt19937_64 rng(31);
  const RbfnModel m = random_model(rng, Activation::kMultiquadric, 6);
  std::uniform_real_distribution<double> d(-40.0, 40.0);
  std::uniform_real_distribution<double> a(-3.1, 3.1);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 x_r(d(rng), d(rng));
    if (x_r.norm() < 1.0) continue;
    const Mat2 Q = Rot2::FromAngle(a(rng)).matrix();
    for (Channel c : {Channel::kObject, Channel::kRelative}) {
      const Mat2 lhs = predict_g(m, Q * x_r, c);
      const Mat2 rhs = Q * predict_g(m, x_r, c) * Q.transpose();
      EXPECT_LT((lhs - rhs).norm(), 1e-10);
    }
  }
}

TEST(Predict, EqualRowsAreIsotropicAndZeroInputGivesZero) {
  std::mt19937_64 rng(32);
  RbfnModel m = random_model(rng, Activation::kGaussian, 4);
  m.w_object.row(1) = m.w_object.row(0);
  const Vec2 x_r(13.0, -21.0);
  const Mat2 g = predict_g(m, x_r, Channel::kObject);
  EXPECT_LT((g - g(0, 0) * Mat2::Identity()).norm(), 1e-12);
  EXPECT_EQ(predict_velocity(m, x_r, Vec2::Zero(), Channel::kRelative), Vec2::Zero());
  // Along the center line a diagonal local model keeps the output on that line.
  const Vec2 v = predict_velocity(m, x_r, 2.0 * x_r, Channel::kRelative);
  EXPECT_NEAR(cross(v, x_r), 0.0, 1e-9 * v.norm() * x_r.norm());
}

TEST(Predict, NoiselessModelRecoversPlantGains) {
  const auto train = dataset(800, 1, 0.0);
  TrainConfig cfg;
  cfg.epochs = 500;
  const RbfnModel m = train_offline(train, 16, Activation::kMultiquadric, cfg).model;
  const plant::PlantConfig truth;
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> s(2.0, 6.0), a(-3.1, 3.1);
  for (int i = 0; i < 200; ++i) {
    const double r = 10.0 * s(rng), angle = a(rng);
    const Vec2 x_r = r * Vec2(std::cos(angle), std::sin(angle));
    const Mat2 want = plant::ground_truth_g(truth, x_r, 5.0, 5.0).object;
    EXPECT_LT((predict_g(m, x_r, Channel::kObject) - want).norm(), 0.03);
  }
}

TEST(Training, RealizableTargetFitsExactly) {
  std::mt19937_64 rng(34);
  const RbfnModel truth = random_model(rng, Activation::kMultiquadric, 5);
  auto data = dataset(300, 5, 0.0);
  for (auto& t : data) {
    t.v_u = predict_velocity(truth, t.x_r, t.u, Channel::kObject);
    t.v_r = predict_velocity(truth, t.x_r, t.u, Channel::kRelative);
  }
  RbfnModel start = truth;
  start.w_object.setZero();
  start.w_relative.setZero();
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.refine_basis = false;
  cfg.weight_decay = 0.0;
  EXPECT_LT(train_from(start, data, cfg).final_loss, 1e-8);
}

TEST(Training, ShuffledDataGivesSameModel) {
  auto data = dataset(300, 6);
  TrainConfig cfg;
  cfg.epochs = 300;
  const RbfnModel a = train_offline(data, 12, Activation::kMultiquadric, cfg).model;
  std::mt19937_64 rng(2);
  std::shuffle(data.begin(), data.end(), rng);
  const RbfnModel b = train_offline(data, 12, Activation::kMultiquadric, cfg).model;
  for (double s : {2.1, 2.5, 3.0, 4.0, 5.5}) {
    const Vec2 x_r(10.0 * s, 0.0);
    EXPECT_LT((predict_g(a, x_r, Channel::kObject) - predict_g(b, x_r, Channel::kObject)).norm(), 1e-3);
    EXPECT_LT((predict_g(a, x_r, Channel::kRelative) - predict_g(b, x_r, Channel::kRelative)).norm(), 1e-3);
  }
}

TEST(TestError, ZeroModelScoresOne) {
  RbfnModel m;
  m.centers = Eigen::VectorXd::LinSpaced(4, 2.0, 6.0);
  m.widths = Eigen::VectorXd::Constant(4, 1.0);
  m.w_object = WeightMatrix::Zero(2, 4);
  m.w_relative = WeightMatrix::Zero(2, 4);
  const auto data = dataset(200, 7);
  EXPECT_DOUBLE_EQ(test_error(m, data, Channel::kObject), 1.0);
  EXPECT_DOUBLE_EQ(test_error(m, data, Channel::kRelative), 1.0);
}

TEST(TestError, NoisyTrainedModelNearOperatingPoint) {
  const auto train = dataset(800, 1);
  const auto test = dataset(2000, 1001);
  const RbfnModel m = train_offline(train, 32, Activation::kMultiquadric, TrainConfig{}).model;
  const double e = test_error(m, test, Channel::kObject);
  EXPECT_GE(e, 0.15);
  EXPECT_LE(e, 0.30);
}

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nocontact/geometry.hpp"
#include "nocontact/plant.hpp"

namespace nocontact::rbfn {

enum class Activation { kMultiquadric, kGaussian };

const char* to_string(Activation kind);
Activation activation_from_string(const std::string& name);

using WeightMatrix = Eigen::Matrix<double, 2, Eigen::Dynamic>;

/// Which velocity a network predicts: the object's (ẋ_u) or the relative
/// velocity (ẋ_r).
enum class Channel { kObject, kRelative };

/// Two RBF networks over the scalar s_r sharing one set of activations.
/// Row 0 of each weight matrix is the normal gain, row 1 the tangential gain.
struct RbfnModel {
  Activation kind = Activation::kMultiquadric;
  Eigen::VectorXd centers;  // µ_i, in s_r units
  Eigen::VectorXd widths;   // σ_i > 0
  WeightMatrix w_object;    // W_u, 2 x p
  WeightMatrix w_relative;  // W_r, 2 x p
  double robot_radius = 5.0;
  double object_radius = 5.0;
  RadiusNormalizer normalizer = RadiusNormalizer::kSum;

  Eigen::Index size() const { return centers.size(); }
  const WeightMatrix& weights(Channel c) const {
    return c == Channel::kObject ? w_object : w_relative;
  }
  WeightMatrix& weights(Channel c) {
    return c == Channel::kObject ? w_object : w_relative;
  }
  double s_r(const Vec2& x_r) const {
    return normalized_distance(x_r, robot_radius, object_radius, normalizer);
  }
  /// Throws DomainError if p < 1, shapes disagree, widths <= 0 or any entry
  /// is non-finite.
  void validate() const;
};

/// φ(s_r), length p.
Eigen::VectorXd activation(double s_r, const RbfnModel& model);

/// ĝ_k(x_r) = Rᵀ diag(Ŵ_k φ(s_r)) R.
Mat2 predict_g(const RbfnModel& model, const Vec2& x_r, Channel which);

Vec2 predict_velocity(const RbfnModel& model, const Vec2& x_r, const Vec2& u,
                      Channel which);

struct TrainConfig {
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int epochs = 2000;
  std::size_t batch_size = 0;  // 0 = full batch
  double weight_decay = 1e-6;
  double tolerance = 1e-12;  // stop when the loss improves by less than this
  std::uint64_t seed = 7;
  bool refine_basis = true;  // move centers/widths during the moment phase
  bool polish = true;        // exact least-squares weights on the frozen basis
  double center_margin = 0.05;
};

struct TrainResult {
  RbfnModel model;
  std::vector<double> loss_curve;  // one entry per epoch (plus polish)
  double final_loss = 0.0;
};

/// Initial model: p centers spread uniformly over the data's s_r range
/// extended by `margin` of the range on each end, widths 1/spacing, zero
/// weights. Throws DegenerateCenters when all s_r coincide.
RbfnModel initial_model(const std::vector<plant::DataTuple>& data, Eigen::Index p,
                        Activation kind, double robot_radius, double object_radius,
                        double margin = 0.05,
                        RadiusNormalizer normalizer = RadiusNormalizer::kSum);

/// Mean over samples of ‖e_u‖² + ‖e_r‖² plus weight decay on both matrices.
double loss(const RbfnModel& model, const std::vector<plant::DataTuple>& data,
            double weight_decay = 0.0);

/// Analytic gradient of `loss`, laid out like pack_parameters.
struct LossGradient {
  WeightMatrix w_object;
  WeightMatrix w_relative;
  Eigen::VectorXd centers;
  Eigen::VectorXd widths;
  double value = 0.0;
};

LossGradient loss_gradient(const RbfnModel& model,
                           const std::vector<plant::DataTuple>& data,
                           double weight_decay = 0.0);

/// Flat parameter vector [W_u row-major, W_r row-major, centers, widths].
Eigen::VectorXd pack_parameters(const RbfnModel& model);
void unpack_parameters(const Eigen::VectorXd& flat, RbfnModel& model);
Eigen::VectorXd pack_gradient(const LossGradient& g);

/// Fits a model to the tuples. Throws TrainingDiverged if the loss becomes
/// non-finite.
TrainResult train_offline(const std::vector<plant::DataTuple>& data, Eigen::Index p,
                          Activation kind, const TrainConfig& cfg,
                          double robot_radius = 5.0, double object_radius = 5.0);

/// Continues training an existing model (centers, widths, weights).
TrainResult train_from(RbfnModel model, const std::vector<plant::DataTuple>& data,
                       const TrainConfig& cfg);

/// Least-squares weights for the model's current basis (ridge
/// N·weight_decay). Centers and widths are untouched.
void fit_weights(RbfnModel& model, const std::vector<plant::DataTuple>& data,
                 double weight_decay);

inline constexpr double kDefaultVelocityFloor = 0.5;  // µm/s

/// Mean relative prediction error ‖v_k - ĝ_k u‖ / ‖v_k‖ over samples with
/// ‖v_k‖ >= floor. Throws InsufficientData if none remain.
double test_error(const RbfnModel& model, const std::vector<plant::DataTuple>& data,
                  Channel which, double velocity_floor = kDefaultVelocityFloor);

// Serialization: a JSON document holding kind, p, radii, centers, widths and
// both weight matrices row-major. Doubles are written in shortest round-trip
// form.
std::string to_json(const RbfnModel& model);
RbfnModel from_json(const std::string& text);
void save_model(const RbfnModel& model, const std::string& path);
RbfnModel load_model(const std::string& path);

}  // namespace nocontact::rbfn

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nocontact/geometry.hpp"
#include "nocontact/plant.hpp"
#include "nocontact/rbfn.hpp"

namespace nocontact::rbfn {

/// Ablation baseline without the local frame: each g_k is a full 2x2
/// matrix-valued multiquadric RBF expansion over the 2-D relative position,
/// expressed in the global frame.
struct GlobalFrameModel {
  Eigen::MatrixX2d centers;  // p x 2, grid over x_r [µm]
  double width = 1.0;        // shared inverse length [1/µm]
  // Row 2a+b holds the weights of entry (a, b) of g_k.
  Eigen::Matrix<double, 4, Eigen::Dynamic> w_object;
  Eigen::Matrix<double, 4, Eigen::Dynamic> w_relative;

  Eigen::VectorXd features(const Vec2& x_r) const;
  Mat2 predict_g(const Vec2& x_r, Channel which) const;
};

/// Least-squares fit on a `grid_per_axis`² center grid covering the data.
GlobalFrameModel fit_global_frame(const std::vector<plant::DataTuple>& data,
                                  int grid_per_axis = 6, double weight_decay = 1e-6);

double test_error(const GlobalFrameModel& model,
                  const std::vector<plant::DataTuple>& data, Channel which,
                  double velocity_floor = kDefaultVelocityFloor);

}  // namespace nocontact::rbfn

#include "nocontact/ablation.hpp"

#include <algorithm>
#include <cmath>

#include "nocontact/error.hpp"

namespace nocontact::rbfn {

using plant::DataTuple;

Eigen::VectorXd GlobalFrameModel::features(const Vec2& x_r) const {
  const Eigen::ArrayXd dx = centers.col(0).array() - x_r.x();
  const Eigen::ArrayXd dy = centers.col(1).array() - x_r.y();
  return (1.0 + width * width * (dx.square() + dy.square())).sqrt().matrix();
}

Mat2 GlobalFrameModel::predict_g(const Vec2& x_r, Channel which) const {
  const auto& w = which == Channel::kObject ? w_object : w_relative;
  const Eigen::Vector4d entries = w * features(x_r);
  Mat2 g;
  g << entries(0), entries(1), entries(2), entries(3);
  return g;
}

GlobalFrameModel fit_global_frame(const std::vector<DataTuple>& data, int grid_per_axis,
                                  double weight_decay) {
  if (data.empty()) throw InsufficientData("ablation: empty dataset");
  if (grid_per_axis < 2) throw DomainError("ablation: grid needs >= 2 points per axis");
  double extent = 0.0;
  for (const auto& t : data) extent = std::max(extent, t.x_r.cwiseAbs().maxCoeff());
  extent *= 1.05;
  const double spacing = 2.0 * extent / static_cast<double>(grid_per_axis - 1);

  GlobalFrameModel model;
  const Eigen::Index p = static_cast<Eigen::Index>(grid_per_axis) * grid_per_axis;
  model.centers.resize(p, 2);
  for (int i = 0; i < grid_per_axis; ++i) {
    for (int j = 0; j < grid_per_axis; ++j) {
      model.centers.row(i * grid_per_axis + j) << -extent + spacing * i, -extent + spacing * j;
    }
  }
  model.width = 1.0 / spacing;

  const auto n = static_cast<Eigen::Index>(data.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 2 * p, 2 * p);
  for (Eigen::Index r = 0; r < n; ++r) {
    const DataTuple& t = data[static_cast<std::size_t>(r)];
    const Eigen::VectorXd phi = model.features(t.x_r);
    A.row(r).head(p) = t.u.x() * phi.transpose();
    A.row(r).tail(p) = t.u.y() * phi.transpose();
  }
  A.bottomRows(2 * p) = std::sqrt(weight_decay * static_cast<double>(n)) *
                        Eigen::MatrixXd::Identity(2 * p, 2 * p);
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);

  model.w_object.resize(4, p);
  model.w_relative.resize(4, p);
  for (int k = 0; k < 2; ++k) {
    auto& w = k == 0 ? model.w_object : model.w_relative;
    for (int a = 0; a < 2; ++a) {
      Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 2 * p);
      for (Eigen::Index r = 0; r < n; ++r) {
        const DataTuple& t = data[static_cast<std::size_t>(r)];
        b(r) = (k == 0 ? t.v_u : t.v_r)(a);
      }
      const Eigen::VectorXd sol = qr.solve(b);
      w.row(2 * a) = sol.head(p).transpose();
      w.row(2 * a + 1) = sol.tail(p).transpose();
    }
  }
  return model;
}

double test_error(const GlobalFrameModel& model, const std::vector<DataTuple>& data,
                  Channel which, double velocity_floor) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& t : data) {
    const Vec2& v = which == Channel::kObject ? t.v_u : t.v_r;
    const double norm = v.norm();
    if (norm < velocity_floor) continue;
    sum += (v - model.predict_g(t.x_r, which) * t.u).norm() / norm;
    ++count;
  }
  if (count == 0) throw InsufficientData("ablation: no samples above the velocity floor");
  return sum / static_cast<double>(count);
}

}  // namespace nocontact::rbfn

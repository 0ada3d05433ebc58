#include "nocontact/rbfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "nocontact/error.hpp"

namespace nocontact::rbfn {

using plant::DataTuple;

const char* to_string(Activation kind) {
  return kind == Activation::kMultiquadric ? "multiquadric" : "gaussian";
}

Activation activation_from_string(const std::string& name) {
  if (name == "multiquadric" || name == "mq") return Activation::kMultiquadric;
  if (name == "gaussian" || name == "gauss") return Activation::kGaussian;
  throw ConfigError("unknown activation '" + name + "'");
}

void RbfnModel::validate() const {
  const Eigen::Index p = centers.size();
  if (p < 1) throw DomainError("rbfn: model needs at least one neuron");
  if (widths.size() != p || w_object.cols() != p || w_relative.cols() != p) {
    throw DomainError("rbfn: parameter shapes disagree");
  }
  if ((widths.array() <= 0.0).any()) throw DomainError("rbfn: widths must be positive");
  if (!centers.allFinite() || !widths.allFinite() || !w_object.allFinite() ||
      !w_relative.allFinite()) {
    throw DomainError("rbfn: non-finite parameters");
  }
}

namespace {

// φ and its partial derivatives with respect to µ and σ, elementwise.
struct ActivationParts {
  Eigen::ArrayXd value;
  Eigen::ArrayXd d_center;
  Eigen::ArrayXd d_width;
};

Eigen::ArrayXd activation_values(Activation kind, double s,
                                 const Eigen::VectorXd& centers,
                                 const Eigen::VectorXd& widths) {
  const Eigen::ArrayXd scaled = widths.array() * (s - centers.array());
  if (kind == Activation::kMultiquadric) return (1.0 + scaled.square()).sqrt();
  return (-scaled.square()).exp();
}

ActivationParts activation_parts(Activation kind, double s,
                                 const Eigen::VectorXd& centers,
                                 const Eigen::VectorXd& widths) {
  const Eigen::ArrayXd d = s - centers.array();
  const Eigen::ArrayXd sig = widths.array();
  ActivationParts out;
  if (kind == Activation::kMultiquadric) {
    out.value = (1.0 + (sig * d).square()).sqrt();
    out.d_center = -sig.square() * d / out.value;
    out.d_width = sig * d.square() / out.value;
  } else {
    out.value = (-(sig * d).square()).exp();
    out.d_center = 2.0 * sig.square() * d * out.value;
    out.d_width = -2.0 * sig * d.square() * out.value;
  }
  return out;
}

// Samples expressed in their own local frames. ‖e_k‖ is frame invariant, so
// the loss decouples into normal and tangential scalar fits.
struct LocalSamples {
  Eigen::VectorXd s;
  Eigen::MatrixX2d u;
  Eigen::MatrixX2d v_object;
  Eigen::MatrixX2d v_relative;

  Eigen::Index rows() const { return s.size(); }
};

LocalSamples to_local(const RbfnModel& model, const std::vector<DataTuple>& data) {
  const auto n = static_cast<Eigen::Index>(data.size());
  LocalSamples out;
  out.s.resize(n);
  out.u.resize(n, 2);
  out.v_object.resize(n, 2);
  out.v_relative.resize(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const DataTuple& t = data[static_cast<std::size_t>(i)];
    const Rot2 R = local_frame(t.x_r);
    out.s(i) = model.s_r(t.x_r);
    out.u.row(i) = (R * t.u).transpose();
    out.v_object.row(i) = (R * t.v_u).transpose();
    out.v_relative.row(i) = (R * t.v_r).transpose();
  }
  return out;
}

Eigen::MatrixXd design_matrix(const RbfnModel& model, const Eigen::VectorXd& s) {
  Eigen::MatrixXd phi(s.size(), model.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    phi.row(i) = activation_values(model.kind, s(i), model.centers, model.widths)
                     .matrix()
                     .transpose();
  }
  return phi;
}

LossGradient gradient_local(const RbfnModel& model, const LocalSamples& ls,
                            double weight_decay, bool with_basis) {
  const Eigen::Index n = ls.rows();
  const Eigen::Index p = model.size();
  LossGradient g;
  g.w_object = WeightMatrix::Zero(2, p);
  g.w_relative = WeightMatrix::Zero(2, p);
  g.centers = Eigen::VectorXd::Zero(p);
  g.widths = Eigen::VectorXd::Zero(p);
  if (n == 0) return g;
  const double inv_n = 1.0 / static_cast<double>(n);

  Eigen::MatrixXd phi(n, p);
  Eigen::MatrixXd d_center, d_width;
  if (with_basis) {
    d_center.resize(n, p);
    d_width.resize(n, p);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (with_basis) {
      const ActivationParts parts =
          activation_parts(model.kind, ls.s(i), model.centers, model.widths);
      phi.row(i) = parts.value.matrix().transpose();
      d_center.row(i) = parts.d_center.matrix().transpose();
      d_width.row(i) = parts.d_width.matrix().transpose();
    } else {
      phi.row(i) = activation_values(model.kind, ls.s(i), model.centers, model.widths)
                       .matrix()
                       .transpose();
    }
  }

  double total = 0.0;
  Eigen::MatrixXd d_phi;
  if (with_basis) d_phi = Eigen::MatrixXd::Zero(n, p);
  for (int k = 0; k < 2; ++k) {
    const WeightMatrix& W = k == 0 ? model.w_object : model.w_relative;
    WeightMatrix& gW = k == 0 ? g.w_object : g.w_relative;
    const Eigen::MatrixX2d& v = k == 0 ? ls.v_object : ls.v_relative;
    for (int axis = 0; axis < 2; ++axis) {
      const Eigen::VectorXd gain = phi * W.row(axis).transpose();
      const Eigen::ArrayXd u = ls.u.col(axis).array();
      const Eigen::ArrayXd r = v.col(axis).array() - gain.array() * u;
      total += r.square().sum() * inv_n;
      const Eigen::VectorXd ru = (r * u).matrix();
      gW.row(axis) = (-2.0 * inv_n) * (phi.transpose() * ru).transpose();
      if (with_basis) d_phi.noalias() += (-2.0 * inv_n) * ru * W.row(axis);
    }
    total += weight_decay * W.squaredNorm();
    gW += 2.0 * weight_decay * W;
  }
  if (with_basis) {
    g.centers = (d_phi.array() * d_center.array()).colwise().sum().transpose();
    g.widths = (d_phi.array() * d_width.array()).colwise().sum().transpose();
  }
  g.value = total;
  return g;
}

double loss_local(const RbfnModel& model, const LocalSamples& ls, double weight_decay) {
  const Eigen::Index n = ls.rows();
  if (n == 0) return 0.0;
  const Eigen::MatrixXd phi = design_matrix(model, ls.s);
  double total = 0.0;
  for (int k = 0; k < 2; ++k) {
    const WeightMatrix& W = k == 0 ? model.w_object : model.w_relative;
    const Eigen::MatrixX2d& v = k == 0 ? ls.v_object : ls.v_relative;
    for (int axis = 0; axis < 2; ++axis) {
      const Eigen::ArrayXd gain = (phi * W.row(axis).transpose()).array();
      const Eigen::ArrayXd r = v.col(axis).array() - gain * ls.u.col(axis).array();
      total += r.square().sum();
    }
    total += weight_decay * static_cast<double>(n) * W.squaredNorm();
  }
  return total / static_cast<double>(n);
}

void fit_weights_local(RbfnModel& model, const LocalSamples& ls, double weight_decay) {
  const Eigen::Index n = ls.rows();
  const Eigen::Index p = model.size();
  const Eigen::MatrixXd phi = design_matrix(model, ls.s);
  const double ridge = std::sqrt(std::max(weight_decay, 0.0) * static_cast<double>(n));
  for (int axis = 0; axis < 2; ++axis) {
    // Each (network, axis) pair is a linear fit of v = (φᵀw)·u.
    Eigen::MatrixXd A(n + p, p);
    A.topRows(n) = ls.u.col(axis).asDiagonal() * phi;
    A.bottomRows(p) = ridge * Eigen::MatrixXd::Identity(p, p);
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    for (int k = 0; k < 2; ++k) {
      const Eigen::MatrixX2d& v = k == 0 ? ls.v_object : ls.v_relative;
      Eigen::VectorXd b = Eigen::VectorXd::Zero(n + p);
      b.head(n) = v.col(axis);
      model.weights(k == 0 ? Channel::kObject : Channel::kRelative).row(axis) =
          qr.solve(b).transpose();
    }
  }
}

}  // namespace

Eigen::VectorXd activation(double s_r, const RbfnModel& model) {
  return activation_values(model.kind, s_r, model.centers, model.widths).matrix();
}

Mat2 predict_g(const RbfnModel& model, const Vec2& x_r, Channel which) {
  const Rot2 R = local_frame(x_r);
  const Eigen::VectorXd phi = activation(model.s_r(x_r), model);
  const Vec2 diag = model.weights(which) * phi;
  return R.matrix().transpose() * diag.asDiagonal() * R.matrix();
}

Vec2 predict_velocity(const RbfnModel& model, const Vec2& x_r, const Vec2& u,
                      Channel which) {
  return predict_g(model, x_r, which) * u;
}

RbfnModel initial_model(const std::vector<DataTuple>& data, Eigen::Index p,
                        Activation kind, double robot_radius, double object_radius,
                        double margin, RadiusNormalizer normalizer) {
  if (data.empty()) throw InsufficientData("rbfn: empty dataset");
  if (p < 1) throw DomainError("rbfn: neuron count must be >= 1");
  RbfnModel model;
  model.kind = kind;
  model.robot_radius = robot_radius;
  model.object_radius = object_radius;
  model.normalizer = normalizer;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& t : data) {
    const double s = model.s_r(t.x_r);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  const double range = hi - lo;
  if (!(range > 1e-12 * std::max(1.0, std::abs(hi)))) {
    throw DegenerateCenters("rbfn: all samples share the same relative distance");
  }
  lo -= margin * range;
  hi += margin * range;
  model.centers.resize(p);
  if (p == 1) {
    model.centers(0) = 0.5 * (lo + hi);
    model.widths = Eigen::VectorXd::Constant(1, 1.0 / (hi - lo));
  } else {
    const double spacing = (hi - lo) / static_cast<double>(p - 1);
    for (Eigen::Index i = 0; i < p; ++i) model.centers(i) = lo + spacing * static_cast<double>(i);
    model.widths = Eigen::VectorXd::Constant(p, 1.0 / spacing);
  }
  model.w_object = WeightMatrix::Zero(2, p);
  model.w_relative = WeightMatrix::Zero(2, p);
  return model;
}

double loss(const RbfnModel& model, const std::vector<DataTuple>& data,
            double weight_decay) {
  return loss_local(model, to_local(model, data), weight_decay);
}

LossGradient loss_gradient(const RbfnModel& model, const std::vector<DataTuple>& data,
                           double weight_decay) {
  return gradient_local(model, to_local(model, data), weight_decay, true);
}

Eigen::VectorXd pack_parameters(const RbfnModel& model) {
  const Eigen::Index p = model.size();
  Eigen::VectorXd flat(6 * p);
  for (Eigen::Index a = 0; a < 2; ++a) {
    flat.segment(a * p, p) = model.w_object.row(a).transpose();
    flat.segment((2 + a) * p, p) = model.w_relative.row(a).transpose();
  }
  flat.segment(4 * p, p) = model.centers;
  flat.segment(5 * p, p) = model.widths;
  return flat;
}

void unpack_parameters(const Eigen::VectorXd& flat, RbfnModel& model) {
  const Eigen::Index p = model.size();
  for (Eigen::Index a = 0; a < 2; ++a) {
    model.w_object.row(a) = flat.segment(a * p, p).transpose();
    model.w_relative.row(a) = flat.segment((2 + a) * p, p).transpose();
  }
  model.centers = flat.segment(4 * p, p);
  model.widths = flat.segment(5 * p, p);
}

Eigen::VectorXd pack_gradient(const LossGradient& g) {
  const Eigen::Index p = g.centers.size();
  Eigen::VectorXd flat(6 * p);
  for (Eigen::Index a = 0; a < 2; ++a) {
    flat.segment(a * p, p) = g.w_object.row(a).transpose();
    flat.segment((2 + a) * p, p) = g.w_relative.row(a).transpose();
  }
  flat.segment(4 * p, p) = g.centers;
  flat.segment(5 * p, p) = g.widths;
  return flat;
}

void fit_weights(RbfnModel& model, const std::vector<DataTuple>& data,
                 double weight_decay) {
  fit_weights_local(model, to_local(model, data), weight_decay);
}

TrainResult train_from(RbfnModel model, const std::vector<DataTuple>& data,
                       const TrainConfig& cfg) {
  if (data.empty()) throw InsufficientData("rbfn: empty dataset");
  if (!(cfg.learning_rate > 0.0) || !(cfg.beta1 > 0.0 && cfg.beta1 < 1.0) ||
      !(cfg.beta2 > 0.0 && cfg.beta2 < 1.0)) {
    throw ConfigError("rbfn: invalid optimizer settings");
  }
  model.validate();
  const LocalSamples all = to_local(model, data);
  const Eigen::Index n = all.rows();
  const Eigen::Index p = model.size();
  const bool full_batch = cfg.batch_size == 0 || static_cast<Eigen::Index>(cfg.batch_size) >= n;

  TrainResult result;
  Eigen::VectorXd theta = pack_parameters(model);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theta.size());
  std::mt19937_64 rng(cfg.seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  long step = 0;
  double previous = std::numeric_limits<double>::infinity();

  auto adam_step = [&](const LocalSamples& batch) {
    const LossGradient g = gradient_local(model, batch, cfg.weight_decay, cfg.refine_basis);
    Eigen::VectorXd grad = pack_gradient(g);
    if (!cfg.refine_basis) grad.tail(2 * p).setZero();
    ++step;
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
    theta.array() -= cfg.learning_rate * (m.array() / c1) /
                     ((v.array() / c2).sqrt() + cfg.epsilon);
    // φ depends on σ², so folding σ onto the positive axis keeps the model
    // unchanged while restoring the width invariant.
    theta.tail(p) = theta.tail(p).cwiseAbs().cwiseMax(1e-9);
    unpack_parameters(theta, model);
    return g.value;
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_loss = 0.0;
    if (full_batch) {
      epoch_loss = adam_step(all);
    } else {
      std::shuffle(order.begin(), order.end(), rng);
      const auto bs = static_cast<Eigen::Index>(cfg.batch_size);
      for (Eigen::Index start = 0; start < n; start += bs) {
        const Eigen::Index len = std::min(bs, n - start);
        LocalSamples batch;
        batch.s.resize(len);
        batch.u.resize(len, 2);
        batch.v_object.resize(len, 2);
        batch.v_relative.resize(len, 2);
        for (Eigen::Index j = 0; j < len; ++j) {
          const Eigen::Index src = order[static_cast<std::size_t>(start + j)];
          batch.s(j) = all.s(src);
          batch.u.row(j) = all.u.row(src);
          batch.v_object.row(j) = all.v_object.row(src);
          batch.v_relative.row(j) = all.v_relative.row(src);
        }
        epoch_loss += adam_step(batch) * static_cast<double>(len) / static_cast<double>(n);
      }
    }
    if (!std::isfinite(epoch_loss) || !theta.allFinite()) {
      throw TrainingDiverged("rbfn: loss became non-finite at epoch " +
                             std::to_string(epoch));
    }
    result.loss_curve.push_back(epoch_loss);
    if (full_batch && std::abs(previous - epoch_loss) < cfg.tolerance) break;
    previous = epoch_loss;
  }

  if (cfg.polish) {
    fit_weights_local(model, all, cfg.weight_decay);
    result.loss_curve.push_back(loss_local(model, all, cfg.weight_decay));
  }
  result.final_loss = loss_local(model, all, cfg.weight_decay);
  if (!std::isfinite(result.final_loss)) {
    throw TrainingDiverged("rbfn: final loss is non-finite");
  }
  model.validate();
  result.model = std::move(model);
  return result;
}

TrainResult train_offline(const std::vector<DataTuple>& data, Eigen::Index p,
                          Activation kind, const TrainConfig& cfg, double robot_radius,
                          double object_radius) {
  RbfnModel model =
      initial_model(data, p, kind, robot_radius, object_radius, cfg.center_margin);
  return train_from(std::move(model), data, cfg);
}

double test_error(const RbfnModel& model, const std::vector<DataTuple>& data,
                  Channel which, double velocity_floor) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& t : data) {
    const Vec2& v = which == Channel::kObject ? t.v_u : t.v_r;
    const double norm = v.norm();
    if (norm < velocity_floor) continue;
    sum += (v - predict_velocity(model, t.x_r, t.u, which)).norm() / norm;
    ++count;
  }
  if (count == 0) {
    throw InsufficientData("rbfn: no samples above the velocity floor");
  }
  return sum / static_cast<double>(count);
}

}  // namespace nocontact::rbfn

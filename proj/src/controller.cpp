#include "nocontact/controller.hpp"

#include <cmath>
#include <algorithm>
#include <fstream>
#include <limits>
#include <ostream>

#include "nocontact/csv.hpp"
#include "nocontact/error.hpp"

namespace nocontact::control {

using rbfn::Channel;
using rbfn::RbfnModel;

void ControllerParams::validate() const {
  const bool positive = gain > 0 && lambda > 0 && u_max > 0 && s_min > 0 && s_max > 0 &&
                        x_r_avg > 0 && tolerance > 0 && dt > 0;
  if (!positive) throw ConfigError("controller: parameters must be positive");
  if (!(tau1 >= 0.0) || !(tau2 >= 0.0) || !(lookahead >= 0.0)) {
    throw ConfigError("controller: tau1, tau2 and lookahead must be non-negative");
  }
  if (!(s_min < s_max)) throw ConfigError("controller: s_min must be below s_max");
  if (!(ridge >= 0.0) || !(weight_clamp > 0.0)) {
    throw ConfigError("controller: invalid ridge or weight clamp");
  }
}

TaskErrors task_errors(const SystemState& state, const Vec2& setpoint,
                       const ControllerParams& params, const Vec2& previous_desired) {
  TaskErrors out;
  out.object = state.object - setpoint;
  const double dist = out.object.norm();
  out.desired_relative = dist > 0.0 ? Vec2(-params.x_r_avg * out.object / dist)
                                    : previous_desired;
  out.relative = relative(state) - out.desired_relative;
  return out;
}

IdealVelocities ideal_velocities(const TaskErrors& errors, const ControllerParams& params) {
  return {-params.gain * errors.object, -params.gain * errors.relative};
}

QpProblem build_qp(const SystemState& state, const RbfnModel& model,
                   const IdealVelocities& ideal, const ControllerParams& params) {
  const Vec2 x_r = relative(state);
  const Mat2 g_u = rbfn::predict_g(model, x_r, Channel::kObject);
  const Mat2 g_r = rbfn::predict_g(model, x_r, Channel::kRelative);
  QpProblem qp;
  qp.hessian = g_u.transpose() * g_u + params.lambda * g_r.transpose() * g_r;
  const double rho = params.ridge * std::max(0.5 * qp.hessian.trace(), 1e-12);
  qp.hessian += rho * Mat2::Identity();
  qp.linear = g_u.transpose() * ideal.object + params.lambda * g_r.transpose() * ideal.relative;
  qp.radius = params.u_max;

  const double s = normalized_distance(x_r, state.robot_radius, state.object_radius,
                                       model.normalizer);
  const bool separating = params.constraint == DistanceConstraint::kSeparating;
  qp.normal = g_r.transpose() * x_r;  // d/dt ½‖x_r‖² = (ĝ_rᵀx_r)ᵀu
  if (s <= params.s_min) {
    qp.sense = separating ? ConstraintSense::kAtLeast : ConstraintSense::kAtMost;
  } else if (s >= params.s_max) {
    qp.sense = separating ? ConstraintSense::kAtMost : ConstraintSense::kAtLeast;
  } else {
    qp.sense = ConstraintSense::kNone;
  }
  return qp;
}

double update_stability_bound(const RbfnModel& model, const Vec2& x_r, const Vec2& u,
                              Channel which, const ControllerParams& params) {
  const Vec2 u_local = local_frame(x_r) * u;
  const double phi2 = rbfn::activation(model.s_r(x_r), model).squaredNorm();
  const double lambda_k = which == Channel::kObject ? 1.0 : params.lambda;
  const double rate = lambda_k * params.tau2 * u_local.cwiseAbs2().maxCoeff() * phi2;
  double bound = rate > 0.0 ? 2.0 / rate : std::numeric_limits<double>::infinity();
  if (params.update_rule == UpdateRule::kNormalizedEuler) {
    bound *= 1.0 + u_local.squaredNorm() * phi2;
  }
  return bound;
}

std::optional<RbfnModel> online_update(const RbfnModel& model, const Vec2& x_r,
                                       const Vec2& u, const TaskErrors& errors,
                                       const Vec2& e_object, const Vec2& e_relative,
                                       const ControllerParams& params, double dt) {
  const bool finite = x_r.allFinite() && u.allFinite() && errors.object.allFinite() &&
                      errors.relative.allFinite() && e_object.allFinite() &&
                      e_relative.allFinite() && std::isfinite(dt);
  if (!finite || !(x_r.norm() > 0.0) || !(dt > 0.0)) return std::nullopt;

  const Rot2 R = local_frame(x_r);
  const Eigen::VectorXd phi = rbfn::activation(model.s_r(x_r), model);
  const Vec2 u_local = R * u;
  double step = dt;
  if (params.update_rule == UpdateRule::kNormalizedEuler) {
    step /= 1.0 + u_local.squaredNorm() * phi.squaredNorm();
  }

  RbfnModel out = model;
  for (int k = 0; k < 2; ++k) {
    const Channel channel = k == 0 ? Channel::kObject : Channel::kRelative;
    const double lambda_k = k == 0 ? 1.0 : params.lambda;
    const Vec2& task = k == 0 ? errors.object : errors.relative;
    const Vec2& pred = k == 0 ? e_object : e_relative;
    // Σ_j R_ij (τ1 Δx_kj + τ2 e_kj) is row i of R applied to the mixed error.
    const Vec2 mixed = R * Vec2(params.tau1 * task + params.tau2 * pred);
    for (int i = 0; i < 2; ++i) {
      out.weights(channel).row(i) +=
          (step * lambda_k * mixed(i) * u_local(i)) * phi.transpose();
    }
  }
  if (!out.w_object.allFinite() || !out.w_relative.allFinite()) return std::nullopt;
  return out;
}

ControlInput p_controller_baseline(const SystemState& state, const Vec2& setpoint,
                                   double gain, double u_max) {
  Vec2 u = gain * (setpoint - state.object);
  const double len = u.norm();
  if (len > u_max) u *= u_max / len;
  return u;
}

AdaptiveController::AdaptiveController(RbfnModel model, ControllerParams params, bool adapt)
    : model_(std::move(model)), params_(params), adapt_(adapt) {
  params_.validate();
  model_.validate();
  initial_norm_object_ = std::max(model_.w_object.norm(), 1e-12);
  initial_norm_relative_ = std::max(model_.w_relative.norm(), 1e-12);
}

ControlInput AdaptiveController::command(const SystemState& state, const Vec2& setpoint) {
  const Vec2 fallback = has_desired_ ? desired_relative_ : relative(state);
  last_errors_ = task_errors(state, setpoint, params_, fallback);
  desired_relative_ = last_errors_.desired_relative;
  has_desired_ = true;
  const IdealVelocities ideal = ideal_velocities(last_errors_, params_);
  last_qp_ = build_qp(state, model_, ideal, params_);
  last_u_ = solve_qp(last_qp_);
  last_state_ = state;
  pending_ = true;
  return last_u_;
}

void AdaptiveController::observe(const SystemState& next) {
  if (!pending_) return;
  pending_ = false;
  if (!adapt_) return;
  const double dt = params_.dt;
  const Vec2 x_r = relative(last_state_);
  const Vec2 v_u = (next.object - last_state_.object) / dt;
  const Vec2 v_a = (next.robot - last_state_.robot) / dt;
  const Vec2 v_r = v_u - v_a;
  const Vec2 e_u = v_u - rbfn::predict_velocity(model_, x_r, last_u_, Channel::kObject);
  const Vec2 e_r = v_r - rbfn::predict_velocity(model_, x_r, last_u_, Channel::kRelative);
  TaskErrors task = last_errors_;
  const bool saturated = last_u_.norm() >= params_.u_max * (1.0 - 1e-9) ||
                         (last_qp_.sense != ConstraintSense::kNone &&
                          std::abs(last_qp_.normal.dot(last_u_)) <= 1e-9 * (1.0 + last_qp_.normal.norm()));
  if (params_.freeze_task_term_when_saturated && saturated) {
    // The τ1 term assumes the ideal velocity was realizable; it winds up
    // the weights otherwise.
    task.object.setZero();
    task.relative.setZero();
  }
  auto updated = online_update(model_, x_r, last_u_, task, e_u, e_r, params_, dt);
  if (!updated) {
    ++faults_;
    return;
  }
  model_ = std::move(*updated);
  const double lim_u = params_.weight_clamp * initial_norm_object_;
  const double lim_r = params_.weight_clamp * initial_norm_relative_;
  if (model_.w_object.norm() > lim_u) {
    model_.w_object *= lim_u / model_.w_object.norm();
    ++clamps_;
  }
  if (model_.w_relative.norm() > lim_r) {
    model_.w_relative *= lim_r / model_.w_relative.norm();
    ++clamps_;
  }
}

SystemState initial_state_for(const std::vector<Vec2>& reference,
                              const ControllerParams& params, double robot_radius,
                              double object_radius) {
  if (reference.empty()) throw DomainError("initial_state_for: empty reference");
  Vec2 dir(1.0, 0.0);
  for (std::size_t i = 1; i < reference.size(); ++i) {
    const Vec2 d = reference[i] - reference[0];
    if (d.norm() > 1e-9) {
      dir = d.normalized();
      break;
    }
  }
  SystemState s;
  s.robot_radius = robot_radius;
  s.object_radius = object_radius;
  s.object = reference.front();
  s.robot = s.object - params.x_r_avg * dir;
  return s;
}

namespace {

double polyline_length(const std::vector<Vec2>& pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += (pts[i] - pts[i - 1]).norm();
  return len;
}

}  // namespace

TrackLog track(const std::vector<Vec2>& reference, const SystemState& initial,
               const RbfnModel& model, const ControllerParams& params,
               plant::Plant& plant, const TrackOptions& options) {
  if (reference.empty()) throw DomainError("track: empty trajectory");
  params.validate();
  TrackLog log;
  log.reference = reference;
  AdaptiveController controller(model, params, options.adapt);
  const double timeout =
      options.timeout > 0.0 ? options.timeout : 120.0 + polyline_length(reference) / 0.5;
  const auto max_steps = static_cast<std::size_t>(std::ceil(timeout / params.dt));

  SystemState state = initial;
  std::size_t index = 0;
  double error_sum = 0.0;
  for (std::size_t step = 0;; ++step) {
    while (index < reference.size()) {
      const double d = (state.object - reference[index]).norm();
      if (d < params.tolerance) {
        ++index;
        continue;
      }
      if (index + 1 == reference.size() && index > 0) {
        // Passing the end along the last segment also completes the run.
        if ((state.object - reference[index]).dot(reference[index] - reference[index - 1]) > 0.0) {
          ++index;
          continue;
        }
      }
      if (index + 1 < reference.size()) {
        const Vec2 ahead = reference[index + 1] - reference[index];
        const bool passed = (state.object - reference[index]).dot(ahead) > 0.0;
        if (passed || (state.object - reference[index + 1]).norm() < d) {
          ++index;
          continue;
        }
      }
      break;
    }
    if (index == reference.size()) {
      log.completed = true;
      break;
    }
    if (step >= max_steps) break;

    std::size_t target = index;
    while (target + 1 < reference.size() &&
           (reference[target] - state.object).norm() < params.lookahead) {
      ++target;
    }
    const Vec2& setpoint = reference[target];
    ControlInput u;
    if (options.kind == ControllerKind::kAdaptiveQp) {
      u = controller.command(state, setpoint);
      const QpProblem& qp = controller.last_problem();
      if (qp.sense != ConstraintSense::kNone) {
        ++log.constrained_steps;
        if (qp.linear_violation(u) > 1e-9) ++log.constraint_violations;
      }
    } else {
      if (options.baseline_law == BaselineLaw::kGoalDirection) {
        u = p_controller_baseline(state, setpoint, options.baseline_gain, params.u_max);
      } else {
        const Vec2 dir = setpoint - state.object;
        const Vec2 x_r_des = dir.norm() > 0 ? Vec2(params.x_r_avg * dir.normalized()) : relative(state);
        const Vec2 target = options.baseline_law == BaselineLaw::kThroughObject ? Vec2(state.object + x_r_des) : Vec2(state.object - x_r_des);
        SystemState robot_as_object = state;
        robot_as_object.object = state.robot;
        u = p_controller_baseline(robot_as_object, target, options.baseline_gain, params.u_max);
      }
    }
    if (u.norm() > params.u_max + 1e-9) ++log.norm_violations;

    TrackRow row;
    row.t = static_cast<double>(step) * params.dt;
    row.state = state;
    row.s_r = normalized_distance(state, model.normalizer);
    row.u = u;
    row.setpoint_index = target;
    row.error = point_polyline_distance(state.object, reference);
    row.contact = false;
    error_sum += row.error;
    log.max_error = std::max(log.max_error, row.error);
    log.rows.push_back(row);

    const plant::StepResult next = plant.step(state, u);
    if (options.kind == ControllerKind::kAdaptiveQp) controller.observe(next.state);
    state = next.state;
    if (next.contact) {
      ++log.contact_events;
      log.contact = true;
      if (!log.first_contact_position) log.first_contact_position = state.object;
      log.rows.back().contact = true;
      if (options.stop_on_contact) break;
    }
  }
  log.update_faults = controller.fault_count();
  if (!log.rows.empty()) log.mean_error = error_sum / static_cast<double>(log.rows.size());
  return log;
}

void write_track_log(std::ostream& out, const TrackLog& log) {
  out << kTrackLogHeader << '\n';
  for (const auto& r : log.rows) {
    out << format_double(r.t) << ',' << format_double(r.state.object.x()) << ','
        << format_double(r.state.object.y()) << ',' << format_double(r.state.robot.x())
        << ',' << format_double(r.state.robot.y()) << ',' << format_double(r.s_r) << ','
        << format_double(r.u.x()) << ',' << format_double(r.u.y()) << ','
        << r.setpoint_index << ',' << format_double(r.error) << ','
        << (r.contact ? 1 : 0) << '\n';
  }
}

void write_track_log(const std::string& path, const TrackLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_track_log(out, log);
}

}  // namespace nocontact::control

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nocontact/geometry.hpp"
#include "nocontact/plant.hpp"
#include "nocontact/qp.hpp"
#include "nocontact/rbfn.hpp"

namespace nocontact::control {

/// Projected field angular velocity (ω cos α, ω sin α) [rad/s].
using ControlInput = Vec2;

/// How the distance-keeping half-plane is oriented.
enum class DistanceConstraint {
  // At s_r <= s_min the relative distance may not shrink (x_rᵀĝ_r u >= 0);
  // at s_r >= s_max it may not grow (x_rᵀĝ_r u <= 0).
  kSeparating,
  // The inequality directions exactly as commonly printed: <= 0 at s_min,
  // >= 0 at s_max. Kept for comparison; it drives the pair together.
  kAsPrinted,
};

/// Discretization of the continuous-time weight update law.
enum class UpdateRule {
  kEuler,            // W += dt·Ẇ
  kNormalizedEuler,  // W += dt·Ẇ / (1 + ‖Ru‖²‖φ‖²)
};

struct ControllerParams {
  double gain = 1.0;     // α [1/s]
  double lambda = 2.0;   // weight of the relative-position term
  double u_max = 2.0 * 3.14159265358979323846;  // [rad/s]
  double s_min = 2.25;
  double s_max = 4.0;
  double tau1 = 0.1;
  double tau2 = 0.1;
  double x_r_avg = 25.0;    // desired robot-object center distance [µm]
  double tolerance = 1.0;   // setpoint tolerance ε [µm]
  double lookahead = 12.0;  // the tracked setpoint is the first one at least this far ahead [µm]
  double dt = 0.05;         // [s]
  double ridge = 1e-8;      // relative ridge on the QP Hessian
  double weight_clamp = 1e3;  // max ‖W‖_F as a multiple of the initial norm
  DistanceConstraint constraint = DistanceConstraint::kSeparating;
  UpdateRule update_rule = UpdateRule::kNormalizedEuler;
  bool freeze_task_term_when_saturated = true;

  /// Throws ConfigError unless the gains and limits are positive, τ₁, τ₂ and
  /// the lookahead are non-negative, and s_min < s_max.
  void validate() const;
};

struct TaskErrors {
  Vec2 object;            // Δx_u = x_u - x_u^des
  Vec2 relative;          // Δx_r = x_r - x_r^des
  Vec2 desired_relative;  // x_r^des
};

/// Setpoint errors. When x_u sits exactly on the setpoint the pushing
/// direction is undefined and `previous_desired` is kept.
TaskErrors task_errors(const SystemState& state, const Vec2& setpoint,
                       const ControllerParams& params, const Vec2& previous_desired);

struct IdealVelocities {
  Vec2 object;
  Vec2 relative;
};

IdealVelocities ideal_velocities(const TaskErrors& errors, const ControllerParams& params);

QpProblem build_qp(const SystemState& state, const rbfn::RbfnModel& model,
                   const IdealVelocities& ideal, const ControllerParams& params);

/// Largest dt for which the plain Euler update with τ1 = 0 decreases the
/// prediction error on a fixed sample: 2 / (λ_k τ2 max_i (Ru)_i² ‖φ‖²).
double update_stability_bound(const rbfn::RbfnModel& model, const Vec2& x_r,
                              const Vec2& u, rbfn::Channel which,
                              const ControllerParams& params);

/// One step of the adaptive weight law for both networks. Returns nullopt
/// (model untouched) when any input is non-finite.
std::optional<rbfn::RbfnModel> online_update(const rbfn::RbfnModel& model, const Vec2& x_r,
                                             const Vec2& u, const TaskErrors& errors,
                                             const Vec2& e_object, const Vec2& e_relative,
                                             const ControllerParams& params, double dt);

/// Model-free baseline: command along the goal direction, saturated at u_max.
ControlInput p_controller_baseline(const SystemState& state, const Vec2& setpoint,
                                   double gain, double u_max);

/// Sense → solve → actuate → update loop state for one plant.
class AdaptiveController {
 public:
  AdaptiveController(rbfn::RbfnModel model, ControllerParams params, bool adapt = true);

  /// Solves for the next input toward `setpoint` and remembers the context
  /// needed by observe().
  ControlInput command(const SystemState& state, const Vec2& setpoint);

  /// Feeds the measured next state; runs the weight update when enabled.
  void observe(const SystemState& next);

  const rbfn::RbfnModel& model() const { return model_; }
  const ControllerParams& params() const { return params_; }
  const QpProblem& last_problem() const { return last_qp_; }
  const TaskErrors& last_errors() const { return last_errors_; }
  std::size_t fault_count() const { return faults_; }
  std::size_t clamp_count() const { return clamps_; }

 private:
  rbfn::RbfnModel model_;
  ControllerParams params_;
  bool adapt_;
  double initial_norm_object_;
  double initial_norm_relative_;
  Vec2 desired_relative_{Vec2::Zero()};
  bool has_desired_ = false;
  SystemState last_state_;
  ControlInput last_u_{Vec2::Zero()};
  TaskErrors last_errors_{};
  QpProblem last_qp_{};
  bool pending_ = false;
  std::size_t faults_ = 0;
  std::size_t clamps_ = 0;
};

enum class ControllerKind { kAdaptiveQp, kProportional };

enum class BaselineLaw { kGoalDirection, kThroughObject, kStandoff };

struct TrackOptions {
  ControllerKind kind = ControllerKind::kAdaptiveQp;
  bool adapt = true;
  double baseline_gain = 1.0;  // [rad/s per µm]
  BaselineLaw baseline_law = BaselineLaw::kGoalDirection;
  double timeout = 0.0;        // [s]; 0 picks one from the path length
  bool stop_on_contact = true;
};

struct TrackRow {
  double t;
  SystemState state;
  double s_r;
  ControlInput u;
  std::size_t setpoint_index;
  double error;  // distance from x_u to the reference polyline [µm]
  bool contact;
};

struct TrackLog {
  std::vector<TrackRow> rows;
  std::vector<Vec2> reference;
  bool completed = false;        // reached the final setpoint
  bool contact = false;          // any contact event
  std::size_t contact_events = 0;
  std::optional<Vec2> first_contact_position;
  std::size_t norm_violations = 0;        // ‖u‖ > u_max + 1e-9
  std::size_t constraint_violations = 0;  // active distance constraint broken at solve time
  std::size_t constrained_steps = 0;      // steps with an active distance constraint
  std::size_t update_faults = 0;
  double mean_error = 0.0;
  double max_error = 0.0;

  bool failed() const { return contact || !completed; }
};

/// Drives the object along `reference` (a polyline of setpoints) starting
/// from `initial`.
TrackLog track(const std::vector<Vec2>& reference, const SystemState& initial,
               const rbfn::RbfnModel& model, const ControllerParams& params,
               plant::Plant& plant, const TrackOptions& options = {});

/// A start state with the object on the first setpoint and the robot
/// x_r_avg behind it, opposite the initial direction of travel.
SystemState initial_state_for(const std::vector<Vec2>& reference,
                              const ControllerParams& params, double robot_radius = 5.0,
                              double object_radius = 5.0);

inline constexpr const char* kTrackLogHeader =
    "t,x_u.x,x_u.y,x_a.x,x_a.y,s_r,u.x,u.y,setpoint_index,err_u,contact_flag";

void write_track_log(std::ostream& out, const TrackLog& log);
void write_track_log(const std::string& path, const TrackLog& log);

}  // namespace nocontact::control

#include "nocontact/plant.hpp"

#include <cmath>
#include <numbers>

#include "nocontact/error.hpp"

namespace nocontact::plant {

SteadyState1d steady_state_1d(const RollingParams& p, double phase_lag) {
  if (!(phase_lag > 0.0 && phase_lag < std::numbers::pi)) {
    throw DomainError("steady_state_1d: phase lag must lie in (0, pi)");
  }
  const bool positive = p.magnetic_moment > 0 && p.field_amplitude > 0 &&
                        p.viscous_moment_coeff > 0 && p.robot_drag_coeff > 0 &&
                        p.object_drag_coeff > 0 && p.robot_radius > 0 &&
                        p.slip_ratio > 0;
  if (!positive || p.slip_ratio > p.robot_radius) {
    throw DegenerateParameters(
        "steady_state_1d: parameters must be positive with slip ratio <= radius");
  }
  const double torque = p.magnetic_moment * p.field_amplitude * std::sin(phase_lag);
  // Substituting v_o = v_r = a·ω into both balances leaves one unknown:
  //   τ_m = (C_m + (C_d^r + C_d^o)·a·r)·ω
  const double drag_sum = p.robot_drag_coeff + p.object_drag_coeff;
  const double denom = p.viscous_moment_coeff + drag_sum * p.slip_ratio * p.robot_radius;
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    throw DegenerateParameters("steady_state_1d: singular parameter combination");
  }
  SteadyState1d out{};
  out.angular_velocity = torque / denom;
  out.robot_speed = p.slip_ratio * out.angular_velocity;
  out.object_speed = out.robot_speed;
  out.drag_force = drag_sum * out.robot_speed;
  return out;
}

double MobilityCurve::operator()(double s_r) const {
  const double excess = std::max(s_r, cutoff) - cutoff;
  return amplitude * std::exp(-decay * excess);
}

bool Arena::contains(const Vec2& p, double margin) const {
  return p.x() >= lower.x() + margin && p.y() >= lower.y() + margin &&
         p.x() <= upper.x() - margin && p.y() <= upper.y() - margin;
}

double brownian_for_mean_displacement(double mean_per_second) {
  return mean_per_second / std::sqrt(std::numbers::pi / 2.0);
}

void PlantConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("plant: dt must be positive");
  if (!(brownian >= 0.0)) throw ConfigError("plant: brownian intensity must be >= 0");
  if (!(translation_gain > 0.0)) throw ConfigError("plant: translation gain must be positive");
  if (normal.amplitude < 0 || tangential.amplitude < 0 || normal.decay < 0 ||
      tangential.decay < 0) {
    throw ConfigError("plant: mobility curves must be non-negative and non-increasing");
  }
  if (!(arena.upper.x() > arena.lower.x() && arena.upper.y() > arena.lower.y())) {
    throw ConfigError("plant: arena bounds are empty");
  }
}

PlantConfig PlantConfig::with_mobility_scale(double factor) const {
  PlantConfig out = *this;
  out.normal.amplitude *= factor;
  out.tangential.amplitude *= factor;
  return out;
}

ControlGains ground_truth_g(const PlantConfig& cfg, const Vec2& x_r,
                            double robot_radius, double object_radius) {
  const Rot2 frame = local_frame(x_r);
  const double s = normalized_distance(x_r, robot_radius, object_radius, cfg.normalizer);
  const Mat2& R = frame.matrix();
  const Vec2 diag(cfg.normal(s), cfg.tangential(s));
  ControlGains g;
  g.object = R.transpose() * diag.asDiagonal() * R;
  // Uniform field: robot translation does not depend on where the object is.
  g.robot = cfg.translation_gain * Mat2::Identity();
  g.relative = g.object - g.robot;
  return g;
}

Plant::Plant(PlantConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
  cfg_.validate();
}

StepResult Plant::step(const SystemState& state, const Vec2& u) {
  const ControlGains g = ground_truth_g(cfg_, relative(state), state.robot_radius,
                                        state.object_radius);
  const double noise = cfg_.brownian * std::sqrt(cfg_.dt);
  StepResult out;
  out.state = state;
  // Draws are sequenced; constructor arguments have unspecified order.
  Vec2 xi_u, xi_a;
  xi_u.x() = normal_(rng_);
  xi_u.y() = normal_(rng_);
  xi_a.x() = normal_(rng_);
  xi_a.y() = normal_(rng_);
  out.state.object += g.object * u * cfg_.dt + noise * xi_u;
  out.state.robot += g.robot * u * cfg_.dt + noise * xi_a;
  const Vec2 x_r = relative(out.state);
  out.contact = x_r.squaredNorm() == 0.0 ||
                normalized_distance(x_r, state.robot_radius, state.object_radius,
                                    cfg_.normalizer) <= kContactThreshold;
  return out;
}

std::vector<DataTuple> collect_dataset(const ExcitationPolicy& policy,
                                       std::size_t n, const PlantConfig& cfg) {
  if (n == 0) throw DomainError("collect_dataset: n must be positive");
  if (!(policy.s_max > policy.s_min) || !(policy.u_max > 0.0)) {
    throw ConfigError("collect_dataset: invalid excitation policy");
  }
  Plant plant(cfg);
  // Scene sampling uses its own stream so the plant noise sequence does not
  // depend on how many samples were rejected.
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double radius_sum = policy.robot_radius + policy.object_radius;
  const double divisor =
      cfg.normalizer == RadiusNormalizer::kSum ? radius_sum : 0.5 * radius_sum;

  std::vector<DataTuple> data;
  data.reserve(n);
  const std::size_t max_attempts = 1000 * n;
  std::size_t attempts = 0;
  while (data.size() < n) {
    if (++attempts > max_attempts) {
      throw DomainError("collect_dataset: arena too small for the excitation policy");
    }
    const Vec2& lo = cfg.arena.lower;
    const Vec2& hi = cfg.arena.upper;
    SystemState state;
    state.robot_radius = policy.robot_radius;
    state.object_radius = policy.object_radius;
    state.object.x() = lo.x() + unit(rng) * (hi.x() - lo.x());
    state.object.y() = lo.y() + unit(rng) * (hi.y() - lo.y());
    const double s = policy.s_min + (policy.s_max - policy.s_min) *
                                        std::pow(unit(rng), policy.s_exponent);
    const double bearing = 2.0 * std::numbers::pi * unit(rng);
    state.robot = state.object - s * divisor * Vec2(std::cos(bearing), std::sin(bearing));
    const double heading = 2.0 * std::numbers::pi * unit(rng);
    const double magnitude =
        policy.u_max * (policy.u_min_fraction + (1.0 - policy.u_min_fraction) * unit(rng));
    const Vec2 u = magnitude * Vec2(std::cos(heading), std::sin(heading));
    if (!cfg.arena.contains(state.object, policy.arena_margin) ||
        !cfg.arena.contains(state.robot, policy.arena_margin)) {
      continue;
    }
    const StepResult next = plant.step(state, u);
    if (!cfg.arena.contains(next.state.object) || !cfg.arena.contains(next.state.robot)) {
      continue;
    }
    DataTuple t;
    t.x_r = relative(state);
    t.v_u = (next.state.object - state.object) / cfg.dt;
    const Vec2 v_a = (next.state.robot - state.robot) / cfg.dt;
    t.v_r = t.v_u - v_a;
    t.u = u;
    data.push_back(t);
  }
  return data;
}

std::vector<std::size_t> s_histogram(const std::vector<DataTuple>& data,
                                     double robot_radius, double object_radius,
                                     double lo, double hi, std::size_t bins,
                                     RadiusNormalizer normalizer) {
  std::vector<std::size_t> counts(bins, 0);
  if (bins == 0 || !(hi > lo)) return counts;
  const double width = (hi - lo) / static_cast<double>(bins);
  for (const auto& t : data) {
    const double s = normalized_distance(t.x_r, robot_radius, object_radius, normalizer);
    if (s < lo || s >= hi) continue;
    const auto bin = std::min(bins - 1, static_cast<std::size_t>((s - lo) / width));
    ++counts[bin];
  }
  return counts;
}

double s_coverage(const std::vector<DataTuple>& data, double robot_radius,
                  double object_radius, double lo, double hi, std::size_t bins,
                  RadiusNormalizer normalizer) {
  const auto counts = s_histogram(data, robot_radius, object_radius, lo, hi, bins, normalizer);
  if (counts.empty()) return 0.0;
  std::size_t filled = 0;
  for (auto c : counts) filled += c > 0 ? 1 : 0;
  return static_cast<double>(filled) / static_cast<double>(counts.size());
}

}  // namespace nocontact::plant

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nocontact/geometry.hpp"

namespace nocontact::plant {

/// Parameters of the 1-D rolling robot + object system. SI units.
struct RollingParams {
  double magnetic_moment = 1.0;       // m [A·m²]
  double field_amplitude = 1.0;       // B [T]
  double viscous_moment_coeff = 1.0;  // C_m^r [N·m·s]
  double robot_drag_coeff = 1.0;      // C_d^r [N·s/m]
  double object_drag_coeff = 1.0;     // C_d^o [N·s/m]
  double robot_radius = 1.0;          // r [m]
  double slip_ratio = 1.0;            // a = v_r / ω_r [m], a <= r
};

struct SteadyState1d {
  double angular_velocity;  // ω_r
  double robot_speed;       // v_r
  double object_speed;      // v_o
  double drag_force;        // F_d
};

/// Steady rolling push along a line: magnetic torque balanced by viscous
/// torque and surface drag, with v_r = a·ω_r and the object moving with the
/// robot (v_o = v_r). `phase_lag` is the moment-field angle Φ in (0, π).
SteadyState1d steady_state_1d(const RollingParams& params, double phase_lag);

/// Distance-dependent gain, A·exp(-κ (s - s_c)) for s >= s_c and A below the
/// cutoff s_c.
struct MobilityCurve {
  double amplitude = 1.0;  // µm/rad
  double decay = 1.0;
  double cutoff = 2.0;

  double operator()(double s_r) const;
};

struct Arena {
  Vec2 lower{0.0, 0.0};
  Vec2 upper{512.0, 512.0};

  bool contains(const Vec2& p, double margin = 0.0) const;
};

/// Brownian intensity σ_B [µm/√s] whose 2-D displacement after one second has
/// the given mean magnitude (E‖ξ‖ = σ·√(π/2) for a standard planar normal).
double brownian_for_mean_displacement(double mean_per_second);

/// Intensity at which held-out relative prediction error of a well-trained
/// model lands near 0.2 with one-step finite-difference velocities.
inline constexpr double kDefaultBrownianIntensity = 0.05;

struct PlantConfig {
  MobilityCurve normal{1.35, 1.0, 2.0};
  MobilityCurve tangential{0.5, 1.5, 2.0};
  double translation_gain = 1.0;  // k [µm/rad], robot velocity = k·u
  double brownian = kDefaultBrownianIntensity;
  double dt = 0.05;  // [s]
  std::uint64_t seed = 1;
  Arena arena;
  RadiusNormalizer normalizer = RadiusNormalizer::kSum;

  /// Throws ConfigError when dt <= 0, σ_B < 0 or gains are negative.
  void validate() const;
  /// Copy with both mobility amplitudes multiplied by `factor`.
  PlantConfig with_mobility_scale(double factor) const;
};

/// Control vector fields at one relative position: ẋ_u = object·u,
/// ẋ_a = robot·u, ẋ_r = relative·u.
struct ControlGains {
  Mat2 object;
  Mat2 robot;
  Mat2 relative;
};

ControlGains ground_truth_g(const PlantConfig& cfg, const Vec2& x_r,
                            double robot_radius, double object_radius);

struct StepResult {
  SystemState state;
  bool contact = false;
};

/// Synthetic robot/object plant integrated with Euler–Maruyama. Owns its RNG,
/// so a given seed reproduces trajectories bit for bit.
class Plant {
 public:
  explicit Plant(PlantConfig cfg);

  StepResult step(const SystemState& state, const Vec2& u);

  const PlantConfig& config() const { return cfg_; }

 private:
  PlantConfig cfg_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// One offline sample {x_r, v_u, v_r, u}.
struct DataTuple {
  Vec2 x_r;
  Vec2 v_u;
  Vec2 v_r;
  Vec2 u;
};

/// Scripted excitation standing in for manual data collection: each sample
/// places the pair at a random relative distance and applies a random field
/// command for one step.
struct ExcitationPolicy {
  double s_min = 2.0;
  double s_max = 6.0;
  // s is drawn as s_min + (s_max - s_min) * U^exponent; values > 1 put more
  // samples close to contact where the object actually moves.
  double s_exponent = 2.0;
  double u_max = 2.0 * 3.14159265358979323846;
  double u_min_fraction = 0.5;
  double robot_radius = 5.0;
  double object_radius = 5.0;
  double arena_margin = 40.0;
};

/// Returns `n` tuples with velocities from one-step forward differences.
/// Samples that leave the arena are rejected and redrawn.
std::vector<DataTuple> collect_dataset(const ExcitationPolicy& policy,
                                       std::size_t n, const PlantConfig& cfg);

/// Histogram of s_r over [lo, hi) with `bins` equal bins.
std::vector<std::size_t> s_histogram(const std::vector<DataTuple>& data,
                                     double robot_radius, double object_radius,
                                     double lo, double hi, std::size_t bins,
                                     RadiusNormalizer normalizer = RadiusNormalizer::kSum);

/// Fraction of non-empty bins of s_histogram.
double s_coverage(const std::vector<DataTuple>& data, double robot_radius,
                  double object_radius, double lo = 2.0, double hi = 6.0,
                  std::size_t bins = 16,
                  RadiusNormalizer normalizer = RadiusNormalizer::kSum);

}  // namespace nocontact::plant

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nocontact/controller.hpp"
#include "nocontact/geometry.hpp"
#include "nocontact/planner.hpp"
#include "nocontact/plant.hpp"
#include "nocontact/rbfn.hpp"

namespace nocontact {

enum class TrajectoryKind { kLetter, kCircle, kSCurve, kWaypoints };

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::kSCurve;
  std::string letter = "A";
  Vec2 origin{180.0, 180.0};  // letter placement
  Vec2 center{256.0, 256.0};  // circle center
  double radius = 50.0;
  Vec2 start{136.0, 256.0};   // S-curve start
  double length = 240.0;
  double amplitude = 50.0;
  std::string file;           // waypoint CSV
  double spacing = 2.0;
};

/// Throws ConfigError for a bad spec and IoError for a missing file.
std::vector<Vec2> build_trajectory(const TrajectorySpec& spec);

struct RbfnSpec {
  int neurons = 32;
  rbfn::Activation activation = rbfn::Activation::kMultiquadric;
  std::size_t train_size = 800;
  std::size_t test_size = 2000;
  std::uint64_t data_seed = 1;         // plant seed of the tracking model's dataset
  std::uint64_t test_seed_offset = 1000;
  rbfn::TrainConfig train;
};

/// Pass/fail limits used by the report.
struct Thresholds {
  double test_error_min = 0.10;  // median e_u at the largest training size
  double test_error_max = 0.30;
  double circle_rel_error_max = 0.05;  // at the largest radius and λ = 2
  double smooth_fraction_min = 0.9;    // smoothed ≤ raw curvature
  double norm_tolerance = 1e-9;
  double planner_runtime_max = 60.0;   // [s]
  double suite_runtime_max = 300.0;    // [s]
};

struct ExperimentPlan {
  std::vector<std::size_t> data_sizes{100, 200, 400, 800};
  std::size_t data_trials = 10;
  std::size_t ablation_size = 400;
  int ablation_grid = 6;
  std::vector<int> sweep_neurons{8, 16, 32, 64};
  std::vector<std::string> letters{"I", "C", "R", "A"};
  std::vector<double> radii{25.0, 50.0, 75.0};
  std::vector<double> lambdas{1.0, 2.0, 5.0};
  std::size_t planner_trials = 20;
  double mobility_scale = 1.3;     // plant perturbation for the adaptation check
  std::size_t adaptation_trials = 10;
};

struct ScenarioConfig {
  plant::PlantConfig plant;
  plant::ExcitationPolicy excitation;
  control::ControllerParams controller;
  control::TrackOptions track;
  RbfnSpec rbfn;
  planner::PlannerParams planner;
  planner::SmoothOptions smoothing;
  std::string world = std::string(NOCONTACT_DATA_DIR) + "/clutter_world.json";
  Vec2 start{30.0, 30.0};
  Vec2 goal{480.0, 480.0};
  TrajectorySpec trajectory;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::string output_dir = "out";
  Thresholds thresholds;
  ExperimentPlan experiments;

  /// Throws ConfigError on an empty seed list or invalid sub-configs.
  void validate() const;
};

/// Environment variable naming the output root.
inline constexpr const char* kOutputEnv = "NOCONTACT_OUT";

/// Overrides keys present in `doc`; unknown keys throw ConfigError.
void apply_json(ScenarioConfig& cfg, const nlohmann::json& doc);
/// One `section.key=value` override; the value is parsed as JSON and falls
/// back to a plain string.
void apply_override(ScenarioConfig& cfg, const std::string& assignment);
nlohmann::json to_json(const ScenarioConfig& cfg);

/// Defaults, then the file when `path` is non-empty, then `$NOCONTACT_OUT`
/// for the output directory.
ScenarioConfig load_config(const std::string& path = "");

}  // namespace nocontact

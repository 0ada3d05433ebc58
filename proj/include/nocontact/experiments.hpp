#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nocontact/config.hpp"
#include "nocontact/controller.hpp"
#include "nocontact/planner.hpp"
#include "nocontact/plant.hpp"
#include "nocontact/rbfn.hpp"

namespace nocontact::experiments {

/// Dataset of `n` tuples from the configured plant reseeded with `seed`.
std::vector<plant::DataTuple> collect(const ScenarioConfig& cfg, std::size_t n,
                                      std::uint64_t seed);
/// Offline training with the configured optimizer; `neurons` and `kind`
/// override the rbfn section of the config.
rbfn::TrainResult train(const ScenarioConfig& cfg, const std::vector<plant::DataTuple>& data,
                        int neurons, rbfn::Activation kind);
/// The model the tracking experiments share: rbfn.train_size tuples at
/// rbfn.data_seed, trained with the rbfn section of the config.
rbfn::RbfnModel tracking_model(const ScenarioConfig& cfg);

struct DataEfficiencyRow {
  std::size_t size;
  std::uint64_t trial;
  double e_object;
  double e_relative;
};

struct DataEfficiencyResult {
  std::vector<DataEfficiencyRow> rows;
  std::vector<std::size_t> sizes;
  std::vector<double> median_object;  // per size
  std::vector<double> median_relative;
  std::vector<double> ablation_local;   // e_u per trial at the ablation size
  std::vector<double> ablation_global;
  double median_ablation_local = 0.0;
  double median_ablation_global = 0.0;
  double seconds = 0.0;
};

DataEfficiencyResult run_data_efficiency(const ScenarioConfig& cfg);

struct SweepCell {
  int neurons;
  rbfn::Activation kind;
  double e_object;
  double e_relative;
};

/// neurons × {multiquadric, gaussian} at rbfn.train_size, one shared
/// train/test pair.
std::vector<SweepCell> run_activation_sweep(const ScenarioConfig& cfg);

struct RunSummary {
  std::string scenario;
  std::uint64_t seed = 0;
  bool completed = false;
  bool contact = false;
  std::size_t contact_events = 0;
  std::size_t steps = 0;
  double mean_error = 0.0;
  double max_error = 0.0;
  double relative_error = 0.0;  // mean error / scale (the radius for circles)
  double steady_error = 0.0;    // mean error over the second half of the run
  double max_u_norm = 0.0;
  std::size_t norm_violations = 0;
  std::size_t constraint_violations = 0;
  std::size_t constrained_steps = 0;
  std::size_t update_faults = 0;
};

RunSummary summarize(const control::TrackLog& log, const std::string& scenario,
                     std::uint64_t seed, double scale = 1.0);

/// One tracking run on a fresh plant seeded with `seed`.
control::TrackLog run_track(const ScenarioConfig& cfg, const rbfn::RbfnModel& model,
                            const std::vector<Vec2>& reference, std::uint64_t seed,
                            const control::TrackOptions& options);

std::vector<RunSummary> run_letters(const ScenarioConfig& cfg, const rbfn::RbfnModel& model);

struct LambdaCell {
  double radius;
  double lambda;
  std::vector<RunSummary> runs;
  double median_relative_error;
};

std::vector<LambdaCell> run_lambda_sweep(const ScenarioConfig& cfg, const rbfn::RbfnModel& model);

struct ComparisonResult {
  std::vector<RunSummary> qp;
  std::vector<RunSummary> baseline;
  std::vector<control::TrackLog> qp_logs;
  std::vector<control::TrackLog> baseline_logs;
};

/// QP controller and P-baseline on the configured trajectory, same seeds.
ComparisonResult run_controller_comparison(const ScenarioConfig& cfg,
                                           const rbfn::RbfnModel& model);

struct AdaptationResult {
  std::vector<RunSummary> adaptive;
  std::vector<RunSummary> frozen;
  double median_adaptive = 0.0;  // steady error
  double median_frozen = 0.0;
};

/// Plant mobility scaled by experiments.mobility_scale, model trained on the
/// nominal plant, online update on and off.
AdaptationResult run_adaptation(const ScenarioConfig& cfg, const rbfn::RbfnModel& model);

struct PlannerTrial {
  std::uint64_t seed;
  planner::PlanMethod method;
  bool found = false;
  double max_curvature = 0.0;
  bool collision_free = false;
  std::size_t waypoints = 0;
};

struct PlannerResult {
  std::vector<PlannerTrial> trials;
  double median_co_rrt = 0.0;
  double median_no_smooth = 0.0;
  double median_rrt = 0.0;
  std::size_t no_path = 0;
  bool all_free = true;
  double smooth_not_worse = 0.0;  // fraction of seeds with smoothed ≤ raw curvature
  double seconds = 0.0;
  std::vector<planner::PlannedPath> example;  // first seed, all three methods
};

PlannerResult run_planner_comparison(const ScenarioConfig& cfg, const planner::World& world);

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

struct SuiteReport {
  DataEfficiencyResult data;
  std::vector<SweepCell> sweep;
  std::vector<RunSummary> letters;
  std::vector<LambdaCell> lambda;
  ComparisonResult comparison;
  AdaptationResult adaptation;
  PlannerResult planner;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool all_pass() const;
};

SuiteReport run_suite(const ScenarioConfig& cfg);
/// Pass/fail lines against cfg.thresholds.
std::vector<Check> evaluate(const SuiteReport& report, const ScenarioConfig& cfg);

nlohmann::json to_json(const SuiteReport& report);
/// report.json, report.txt and one CSV per experiment under `dir`.
void write_report(const SuiteReport& report, const std::string& dir);

double median(std::vector<double> values);

}  // namespace nocontact::experiments

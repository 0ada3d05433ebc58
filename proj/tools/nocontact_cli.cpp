// Command-line front end. Exit codes: 0 success, 1 I/O or unexpected error,
// 2 usage, 3 task failure (contact, unfinished run, no path), 4 numeric
// divergence.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nocontact/config.hpp"
#include "nocontact/controller.hpp"
#include "nocontact/csv.hpp"
#include "nocontact/error.hpp"
#include "nocontact/experiments.hpp"
#include "nocontact/planner.hpp"
#include "nocontact/rbfn.hpp"
#include "nocontact/svg.hpp"
#include "nocontact/trajectories.hpp"

namespace fs = std::filesystem;
using namespace nocontact;

namespace {

constexpr int kOk = 0;
constexpr int kIo = 1;
constexpr int kUsage = 2;
constexpr int kTaskFailure = 3;
constexpr int kDiverged = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Vec2 parse_point(const std::string& text) {
  const auto parts = split_csv_line(text);
  if (parts.size() != 2) throw UsageError("expected x,y but got '" + text + "'");
  try {
    return Vec2(parse_double(parts[0]), parse_double(parts[1]));
  } catch (const std::exception&) {
    throw UsageError("expected x,y but got '" + text + "'");
  }
}

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out;

  ScenarioConfig load() const {
    ScenarioConfig cfg = load_config(config_path);
    for (const auto& o : overrides) apply_override(cfg, o);
    if (!out.empty()) cfg.output_dir = out;
    cfg.validate();
    fs::create_directories(cfg.output_dir);
    return cfg;
  }
};

std::string in_out(const ScenarioConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << doc.dump(2) << '\n';
}

bool log_finite(const control::TrackLog& log) {
  for (const auto& r : log.rows) {
    if (!r.state.object.allFinite() || !r.state.robot.allFinite() || !r.u.allFinite()) {
      return false;
    }
  }
  return true;
}

nlohmann::json run_json(const experiments::RunSummary& s) {
  return {{"scenario", s.scenario},       {"seed", s.seed},
          {"completed", s.completed},     {"contact_events", s.contact_events},
          {"steps", s.steps},             {"mean_error", s.mean_error},
          {"max_error", s.max_error},     {"relative_error", s.relative_error},
          {"max_u_norm", s.max_u_norm},   {"norm_violations", s.norm_violations},
          {"constraint_violations", s.constraint_violations}};
}

// ---- collect ----------------------------------------------------------------

struct CollectArgs {
  long long n = -1;
  long long seed = -1;
  std::string output;
};

int cmd_collect(const Common& common, const CollectArgs& a) {
  ScenarioConfig cfg = common.load();
  if (a.n == 0) throw UsageError("collect: --n must be positive");
  const std::size_t n = a.n > 0 ? static_cast<std::size_t>(a.n) : cfg.rbfn.train_size;
  const std::uint64_t seed = a.seed >= 0 ? static_cast<std::uint64_t>(a.seed) : cfg.rbfn.data_seed;
  const auto data = experiments::collect(cfg, n, seed);
  const std::string path = a.output.empty() ? in_out(cfg, "dataset.csv") : a.output;
  write_dataset(path, data);
  const double lo = 2.0, hi = 6.0;
  const std::size_t bins = 16;
  const auto hist = plant::s_histogram(data, cfg.excitation.robot_radius,
                                       cfg.excitation.object_radius, lo, hi, bins,
                                       cfg.plant.normalizer);
  std::cout << "wrote " << data.size() << " tuples to " << path << "\n";
  std::cout << "s_r histogram:\n";
  std::size_t peak = 1;
  for (auto h : hist) peak = std::max(peak, h);
  for (std::size_t b = 0; b < bins; ++b) {
    const double from = lo + (hi - lo) * b / bins;
    std::cout << "  [" << format_double(from) << ", " << format_double(from + (hi - lo) / bins)
              << ") " << hist[b] << ' ' << std::string(40 * hist[b] / peak, '#') << "\n";
  }
  return kOk;
}

// ---- train ------------------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string test;
  int neurons = 0;
  std::string activation;
  std::string output;
  bool sweep = false;
};

int cmd_train(const Common& common, const TrainArgs& a) {
  ScenarioConfig cfg = common.load();
  const std::string data_path = a.data.empty() ? in_out(cfg, "dataset.csv") : a.data;
  const auto data = read_dataset(data_path);
  if (data.empty()) throw UsageError("train: dataset is empty");
  const int p = a.neurons > 0 ? a.neurons : cfg.rbfn.neurons;
  const rbfn::Activation kind =
      a.activation.empty() ? cfg.rbfn.activation : rbfn::activation_from_string(a.activation);
  const auto test = a.test.empty()
                        ? experiments::collect(cfg, cfg.rbfn.test_size, cfg.rbfn.test_seed_offset)
                        : read_dataset(a.test);

  if (a.sweep) {
    const std::string path = in_out(cfg, "activation_sweep.csv");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "neurons,activation,e_u,e_r\n";
    std::cout << "neurons activation     e_u      e_r\n";
    for (int n : cfg.experiments.sweep_neurons) {
      for (auto k : {rbfn::Activation::kMultiquadric, rbfn::Activation::kGaussian}) {
        const auto model = experiments::train(cfg, data, n, k).model;
        const double eu = rbfn::test_error(model, test, rbfn::Channel::kObject);
        const double er = rbfn::test_error(model, test, rbfn::Channel::kRelative);
        out << n << ',' << rbfn::to_string(k) << ',' << format_double(eu) << ','
            << format_double(er) << '\n';
        std::printf("%7d %-12s %8.4f %8.4f\n", n, rbfn::to_string(k), eu, er);
      }
    }
    std::cout << "wrote " << path << "\n";
    return kOk;
  }

  const auto result = experiments::train(cfg, data, p, kind);
  const std::string model_path = a.output.empty() ? in_out(cfg, "model.json") : a.output;
  rbfn::save_model(result.model, model_path);
  const std::string curve_path = in_out(cfg, "training_curve.csv");
  {
    std::ofstream out(curve_path);
    if (!out) throw IoError("cannot write " + curve_path);
    out << "epoch,loss\n";
    for (std::size_t i = 0; i < result.loss_curve.size(); ++i) {
      out << i << ',' << format_double(result.loss_curve[i]) << '\n';
    }
  }
  std::cout << "final loss " << format_double(result.final_loss) << "\n";
  std::cout << "held-out e_u " << rbfn::test_error(result.model, test, rbfn::Channel::kObject)
            << ", e_r " << rbfn::test_error(result.model, test, rbfn::Channel::kRelative) << "\n";
  std::cout << "wrote " << model_path << " and " << curve_path << "\n";
  return kOk;
}

// ---- track ------------------------------------------------------------------

struct TrackArgs {
  std::string model;
  std::string letter;
  double circle = 0.0;
  bool s_curve = false;
  std::string waypoints;
  double lambda = 0.0;
  long long seed = -1;
  std::string controller = "qp";
  bool no_adapt = false;
  std::string name = "track";
};

rbfn::RbfnModel model_or_train(const ScenarioConfig& cfg, const std::string& path) {
  if (!path.empty()) return rbfn::load_model(path);
  const std::string fallback = in_out(cfg, "model.json");
  if (fs::exists(fallback)) return rbfn::load_model(fallback);
  return experiments::tracking_model(cfg);
}

int cmd_track(const Common& common, const TrackArgs& a) {
  ScenarioConfig cfg = common.load();
  const int chosen = !a.letter.empty() + (a.circle > 0.0) + a.s_curve + !a.waypoints.empty();
  if (chosen > 1) throw UsageError("track: pick one of --letter, --circle, --s-curve, --waypoints");
  if (!a.letter.empty()) {
    cfg.trajectory.kind = TrajectoryKind::kLetter;
    cfg.trajectory.letter = a.letter;
  } else if (a.circle > 0.0) {
    cfg.trajectory.kind = TrajectoryKind::kCircle;
    cfg.trajectory.radius = a.circle;
  } else if (a.s_curve) {
    cfg.trajectory.kind = TrajectoryKind::kSCurve;
  } else if (!a.waypoints.empty()) {
    cfg.trajectory.kind = TrajectoryKind::kWaypoints;
    cfg.trajectory.file = a.waypoints;
  }
  if (a.lambda > 0.0) cfg.controller.lambda = a.lambda;
  std::vector<Vec2> ref;
  try {
    ref = build_trajectory(cfg.trajectory);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  if (ref.empty()) throw UsageError("track: empty trajectory");
  control::TrackOptions opt = cfg.track;
  if (a.controller == "qp") {
    opt.kind = control::ControllerKind::kAdaptiveQp;
  } else if (a.controller == "p") {
    opt.kind = control::ControllerKind::kProportional;
  } else {
    throw UsageError("track: --controller must be qp or p");
  }
  if (a.no_adapt) opt.adapt = false;
  const std::uint64_t seed = a.seed >= 0 ? static_cast<std::uint64_t>(a.seed) : cfg.seeds.front();
  const auto model = model_or_train(cfg, a.model);
  const auto log = experiments::run_track(cfg, model, ref, seed, opt);
  const double scale = cfg.trajectory.kind == TrajectoryKind::kCircle ? cfg.trajectory.radius : 1.0;
  const auto summary = experiments::summarize(log, a.name, seed, scale);
  control::write_track_log(in_out(cfg, a.name + ".csv"), log);
  write_track_svg(in_out(cfg, a.name + ".svg"), log);
  write_json(in_out(cfg, a.name + "_report.json"), run_json(summary));
  std::cout << "completed " << summary.completed << ", contact events " << summary.contact_events
            << ", mean error " << summary.mean_error << " um, max error " << summary.max_error
            << " um, steps " << summary.steps << "\n";
  if (!log_finite(log)) return kDiverged;
  return log.failed() ? kTaskFailure : kOk;
}

// ---- compare-controllers ----------------------------------------------------

int cmd_compare(const Common& common, const std::string& model_path) {
  ScenarioConfig cfg = common.load();
  const auto model = model_or_train(cfg, model_path);
  const auto result = experiments::run_controller_comparison(cfg, model);
  nlohmann::json doc{{"qp", nlohmann::json::array()}, {"p_baseline", nlohmann::json::array()}};
  std::size_t qp_failures = 0, baseline_contacts = 0;
  bool finite = true;
  for (std::size_t i = 0; i < result.qp.size(); ++i) {
    const auto seed = std::to_string(result.qp[i].seed);
    control::write_track_log(in_out(cfg, "compare_qp_seed" + seed + ".csv"), result.qp_logs[i]);
    control::write_track_log(in_out(cfg, "compare_p_seed" + seed + ".csv"),
                             result.baseline_logs[i]);
    write_track_svg(in_out(cfg, "compare_qp_seed" + seed + ".svg"), result.qp_logs[i]);
    write_track_svg(in_out(cfg, "compare_p_seed" + seed + ".svg"), result.baseline_logs[i]);
    doc["qp"].push_back(run_json(result.qp[i]));
    doc["p_baseline"].push_back(run_json(result.baseline[i]));
    qp_failures += result.qp_logs[i].failed();
    baseline_contacts += result.baseline[i].contact_events;
    finite = finite && log_finite(result.qp_logs[i]) && log_finite(result.baseline_logs[i]);
    std::cout << "seed " << seed << ": qp completed " << result.qp[i].completed << " contacts "
              << result.qp[i].contact_events << " mean error " << result.qp[i].mean_error
              << " | p completed " << result.baseline[i].completed << " contacts "
              << result.baseline[i].contact_events << " mean error "
              << result.baseline[i].mean_error << "\n";
  }
  write_json(in_out(cfg, "compare_report.json"), doc);
  std::cout << "QP failures " << qp_failures << ", P-baseline contact events " << baseline_contacts
            << "\n";
  if (!finite) return kDiverged;
  return qp_failures ? kTaskFailure : kOk;
}

// ---- plan -------------------------------------------------------------------

struct PlanArgs {
  std::string world;
  std::string start;
  std::string goal;
  std::string method = "co-rrt";
  long long seed = -1;
  bool compare = false;
};

void write_curve(const std::string& path, const std::vector<Vec2>& pts) { save_waypoints(pts, path); }

int cmd_plan(const Common& common, const PlanArgs& a) {
  ScenarioConfig cfg = common.load();
  if (!a.world.empty()) cfg.world = a.world;
  if (!a.start.empty()) cfg.start = parse_point(a.start);
  if (!a.goal.empty()) cfg.goal = parse_point(a.goal);
  const auto world = planner::load_world(cfg.world);

  if (a.compare) {
    const auto r = experiments::run_planner_comparison(cfg, world);
    const std::string path = in_out(cfg, "planner_comparison.csv");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "seed,method,found,max_curvature,collision_free,waypoints\n";
    for (const auto& t : r.trials) {
      out << t.seed << ',' << planner::to_string(t.method) << ',' << t.found << ','
          << format_double(t.max_curvature) << ',' << t.collision_free << ',' << t.waypoints
          << '\n';
    }
    write_plan_svg(in_out(cfg, "planner_comparison.svg"), world, r.example);
    const bool order = r.median_co_rrt < r.median_no_smooth && r.median_no_smooth < r.median_rrt;
    write_json(in_out(cfg, "planner_report.json"),
               {{"median_co_rrt", r.median_co_rrt},
                {"median_co_rrt_nosmooth", r.median_no_smooth},
                {"median_rrt", r.median_rrt},
                {"no_path", r.no_path},
                {"all_collision_free", r.all_free},
                {"ordering", order},
                {"smoothed_not_worse_fraction", r.smooth_not_worse}});
    std::cout << "median max curvature [rad/um]: co-rrt " << r.median_co_rrt << ", co-rrt-nosmooth "
              << r.median_no_smooth << ", rrt " << r.median_rrt << "\n";
    std::cout << "ordering " << (order ? "holds" : "broken") << ", no-path seeds " << r.no_path
              << ", all collision-free " << r.all_free << "\n";
    return kOk;
  }

  planner::PlanMethod method;
  try {
    method = planner::plan_method_from_string(a.method);
  } catch (const std::exception&) {
    throw UsageError("plan: --method must be co-rrt, rrt or co-rrt-nosmooth");
  }
  planner::PlannerParams pp = cfg.planner;
  if (a.seed >= 0) pp.seed = static_cast<std::uint64_t>(a.seed);
  planner::PlannedPath path;
  try {
    path = planner::plan_path(world, cfg.start, cfg.goal, method, pp, cfg.smoothing);
  } catch (const NoPathFound& e) {
    std::cerr << "no path: " << e.what() << "\n";
    return kTaskFailure;
  }
  const std::string tag = std::string("plan_") + planner::to_string(method);
  write_curve(in_out(cfg, tag + "_waypoints.csv"), path.waypoints);
  write_curve(in_out(cfg, tag + "_reference.csv"), planner::path_reference(path));
  write_plan_svg(in_out(cfg, tag + ".svg"), world, {path});
  write_json(in_out(cfg, tag + "_report.json"),
             {{"method", planner::to_string(method)},
              {"waypoints", path.waypoints.size()},
              {"max_curvature", path.max_curvature},
              {"collision_free", path.collision_free}});
  std::cout << planner::to_string(method) << ": " << path.waypoints.size()
            << " waypoints, max curvature " << path.max_curvature << " rad/um, collision-free "
            << path.collision_free << "\n";
  return path.collision_free ? kOk : kTaskFailure;
}

// ---- report -----------------------------------------------------------------

int cmd_report(const Common& common) {
  ScenarioConfig cfg = common.load();
  const auto report = experiments::run_suite(cfg);
  const std::string dir = in_out(cfg, "report");
  experiments::write_report(report, dir);
  for (const auto& c : report.checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  }
  std::cout << "suite runtime " << report.seconds << " s; wrote " << dir << "\n";
  return report.all_pass() ? kOk : kTaskFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated non-contact micromanipulation: data collection, model training, "
               "tracking, controller comparison and planning"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("-c,--config", common.config_path, "JSON scenario config");
  app.add_option("-s,--set", common.overrides, "Override a config key, e.g. controller.lambda=5");
  app.add_option("-o,--out", common.out,
                 std::string("Output directory (default: $") + kOutputEnv + " or ./out)");

  CollectArgs ca;
  auto* collect = app.add_subcommand("collect", "Collect an offline dataset from the plant");
  collect->add_option("-n,--n", ca.n, "Number of tuples");
  collect->add_option("--seed", ca.seed, "Plant seed");
  collect->add_option("--output", ca.output, "Dataset CSV path");

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Train the RBFN model on a dataset");
  train->add_option("--data", ta.data, "Dataset CSV");
  train->add_option("--test", ta.test, "Held-out dataset CSV");
  train->add_option("-p,--neurons", ta.neurons, "Number of RBF neurons");
  train->add_option("--activation", ta.activation, "multiquadric or gaussian");
  train->add_option("--output", ta.output, "Model JSON path");
  train->add_flag("--sweep", ta.sweep, "Neuron/activation grid instead of one model");

  TrackArgs tr;
  auto* track = app.add_subcommand("track", "Track one trajectory");
  track->add_option("--model", tr.model, "Model JSON");
  track->add_option("--letter", tr.letter, "Bundled letter (I, C, R, A)");
  track->add_option("--circle", tr.circle, "Circle radius [um]");
  track->add_flag("--s-curve", tr.s_curve, "S-curve scenario");
  track->add_option("--waypoints", tr.waypoints, "Waypoint CSV (x,y)");
  track->add_option("--lambda", tr.lambda, "Relative-position weight");
  track->add_option("--seed", tr.seed, "Plant seed");
  track->add_option("--controller", tr.controller, "qp or p");
  track->add_flag("--no-adapt", tr.no_adapt, "Disable the online weight update");
  track->add_option("--name", tr.name, "Output file stem");

  std::string compare_model;
  auto* compare = app.add_subcommand("compare-controllers",
                                     "QP controller against the P-baseline on the same seeds");
  compare->add_option("--model", compare_model, "Model JSON");

  PlanArgs pa;
  auto* plan = app.add_subcommand("plan", "Plan a path through an obstacle world");
  plan->add_option("--world", pa.world, "World JSON");
  plan->add_option("--start", pa.start, "Start x,y");
  plan->add_option("--goal", pa.goal, "Goal x,y");
  plan->add_option("--method", pa.method, "co-rrt, rrt or co-rrt-nosmooth");
  plan->add_option("--seed", pa.seed, "Planner seed");
  plan->add_flag("--compare", pa.compare, "Run all methods over the configured seeds");

  auto* report = app.add_subcommand("report", "Run every experiment and check the thresholds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (collect->parsed()) return cmd_collect(common, ca);
    if (train->parsed()) return cmd_train(common, ta);
    if (track->parsed()) return cmd_track(common, tr);
    if (compare->parsed()) return cmd_compare(common, compare_model);
    if (plan->parsed()) return cmd_plan(common, pa);
    if (report->parsed()) return cmd_report(common);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const NoPathFound& e) {
    std::cerr << "no path: " << e.what() << "\n";
    return kTaskFailure;
  } catch (const TrainingDiverged& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return kDiverged;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}

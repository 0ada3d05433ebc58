#include "nocontact/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nocontact/ablation.hpp"
#include "nocontact/csv.hpp"
#include "nocontact/error.hpp"
#include "nocontact/svg.hpp"
#include "nocontact/trajectories.hpp"

namespace nocontact::experiments {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::string circle_name(double radius, double lambda) {
  std::ostringstream s;
  s << "circle_r" << format_double(radius) << "_l" << format_double(lambda);
  return s.str();
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<plant::DataTuple> collect(const ScenarioConfig& cfg, std::size_t n,
                                      std::uint64_t seed) {
  plant::PlantConfig pc = cfg.plant;
  pc.seed = seed;
  return plant::collect_dataset(cfg.excitation, n, pc);
}

rbfn::TrainResult train(const ScenarioConfig& cfg, const std::vector<plant::DataTuple>& data,
                        int neurons, rbfn::Activation kind) {
  return rbfn::train_offline(data, neurons, kind, cfg.rbfn.train, cfg.excitation.robot_radius,
                             cfg.excitation.object_radius);
}

rbfn::RbfnModel tracking_model(const ScenarioConfig& cfg) {
  const auto data = collect(cfg, cfg.rbfn.train_size, cfg.rbfn.data_seed);
  return train(cfg, data, cfg.rbfn.neurons, cfg.rbfn.activation).model;
}

DataEfficiencyResult run_data_efficiency(const ScenarioConfig& cfg) {
  const auto t0 = Clock::now();
  const auto& plan = cfg.experiments;
  DataEfficiencyResult out;
  out.sizes = plan.data_sizes;
  std::vector<std::vector<double>> eu(plan.data_sizes.size()), er(plan.data_sizes.size());
  for (std::uint64_t trial = 1; trial <= plan.data_trials; ++trial) {
    const auto test = collect(cfg, cfg.rbfn.test_size, cfg.rbfn.test_seed_offset + trial);
    for (std::size_t k = 0; k < plan.data_sizes.size(); ++k) {
      const std::size_t n = plan.data_sizes[k];
      const auto data = collect(cfg, n, trial);
      const auto model = train(cfg, data, cfg.rbfn.neurons, cfg.rbfn.activation).model;
      const double u = rbfn::test_error(model, test, rbfn::Channel::kObject);
      const double r = rbfn::test_error(model, test, rbfn::Channel::kRelative);
      out.rows.push_back({n, trial, u, r});
      eu[k].push_back(u);
      er[k].push_back(r);
      if (n == plan.ablation_size) {
        out.ablation_local.push_back(u);
        const auto global = rbfn::fit_global_frame(data, plan.ablation_grid,
                                                   cfg.rbfn.train.weight_decay);
        out.ablation_global.push_back(rbfn::test_error(global, test, rbfn::Channel::kObject));
      }
    }
  }
  for (std::size_t k = 0; k < plan.data_sizes.size(); ++k) {
    out.median_object.push_back(median(eu[k]));
    out.median_relative.push_back(median(er[k]));
  }
  out.median_ablation_local = median(out.ablation_local);
  out.median_ablation_global = median(out.ablation_global);
  out.seconds = seconds_since(t0);
  return out;
}

std::vector<SweepCell> run_activation_sweep(const ScenarioConfig& cfg) {
  const auto data = collect(cfg, cfg.rbfn.train_size, cfg.rbfn.data_seed);
  const auto test = collect(cfg, cfg.rbfn.test_size, cfg.rbfn.test_seed_offset);
  std::vector<SweepCell> out;
  for (int p : cfg.experiments.sweep_neurons) {
    for (auto kind : {rbfn::Activation::kMultiquadric, rbfn::Activation::kGaussian}) {
      const auto model = train(cfg, data, p, kind).model;
      out.push_back({p, kind, rbfn::test_error(model, test, rbfn::Channel::kObject),
                     rbfn::test_error(model, test, rbfn::Channel::kRelative)});
    }
  }
  return out;
}

RunSummary summarize(const control::TrackLog& log, const std::string& scenario,
                     std::uint64_t seed, double scale) {
  RunSummary s;
  s.scenario = scenario;
  s.seed = seed;
  s.completed = log.completed;
  s.contact = log.contact;
  s.contact_events = log.contact_events;
  s.steps = log.rows.size();
  s.mean_error = log.mean_error;
  s.max_error = log.max_error;
  s.relative_error = log.mean_error / scale;
  s.norm_violations = log.norm_violations;
  s.constraint_violations = log.constraint_violations;
  s.constrained_steps = log.constrained_steps;
  s.update_faults = log.update_faults;
  double tail = 0.0;
  std::size_t n = 0;
  for (std::size_t i = log.rows.size() / 2; i < log.rows.size(); ++i) {
    tail += log.rows[i].error;
    ++n;
  }
  s.steady_error = n ? tail / static_cast<double>(n) : 0.0;
  for (const auto& r : log.rows) s.max_u_norm = std::max(s.max_u_norm, r.u.norm());
  return s;
}

control::TrackLog run_track(const ScenarioConfig& cfg, const rbfn::RbfnModel& model,
                            const std::vector<Vec2>& reference, std::uint64_t seed,
                            const control::TrackOptions& options) {
  plant::PlantConfig pc = cfg.plant;
  pc.seed = seed;
  plant::Plant plant(pc);
  const SystemState initial = control::initial_state_for(
      reference, cfg.controller, cfg.excitation.robot_radius, cfg.excitation.object_radius);
  return control::track(reference, initial, model, cfg.controller, plant, options);
}

std::vector<RunSummary> run_letters(const ScenarioConfig& cfg, const rbfn::RbfnModel& model) {
  std::vector<RunSummary> out;
  control::TrackOptions opt = cfg.track;
  opt.kind = control::ControllerKind::kAdaptiveQp;
  for (const auto& letter : cfg.experiments.letters) {
    const auto ref = letter_trajectory(letter, cfg.trajectory.origin);
    for (auto seed : cfg.seeds) {
      out.push_back(summarize(run_track(cfg, model, ref, seed, opt), "letter_" + letter, seed));
    }
  }
  return out;
}

std::vector<LambdaCell> run_lambda_sweep(const ScenarioConfig& cfg, const rbfn::RbfnModel& model) {
  std::vector<LambdaCell> out;
  control::TrackOptions opt = cfg.track;
  opt.kind = control::ControllerKind::kAdaptiveQp;
  for (double radius : cfg.experiments.radii) {
    const auto ref = circle_trajectory(cfg.trajectory.center, radius, cfg.trajectory.spacing);
    for (double lambda : cfg.experiments.lambdas) {
      ScenarioConfig c = cfg;
      c.controller.lambda = lambda;
      LambdaCell cell{radius, lambda, {}, 0.0};
      std::vector<double> rel;
      for (auto seed : cfg.seeds) {
        cell.runs.push_back(summarize(run_track(c, model, ref, seed, opt),
                                      circle_name(radius, lambda), seed, radius));
        if (cell.runs.back().completed) rel.push_back(cell.runs.back().relative_error);
      }
      cell.median_relative_error = median(rel);
      out.push_back(std::move(cell));
    }
  }
  return out;
}

ComparisonResult run_controller_comparison(const ScenarioConfig& cfg,
                                           const rbfn::RbfnModel& model) {
  ComparisonResult out;
  const auto ref = build_trajectory(cfg.trajectory);
  control::TrackOptions qp = cfg.track;
  qp.kind = control::ControllerKind::kAdaptiveQp;
  control::TrackOptions p = cfg.track;
  p.kind = control::ControllerKind::kProportional;
  for (auto seed : cfg.seeds) {
    out.qp_logs.push_back(run_track(cfg, model, ref, seed, qp));
    out.qp.push_back(summarize(out.qp_logs.back(), "qp", seed));
    out.baseline_logs.push_back(run_track(cfg, model, ref, seed, p));
    out.baseline.push_back(summarize(out.baseline_logs.back(), "p-baseline", seed));
  }
  return out;
}

AdaptationResult run_adaptation(const ScenarioConfig& cfg, const rbfn::RbfnModel& model) {
  AdaptationResult out;
  ScenarioConfig c = cfg;
  c.plant = cfg.plant.with_mobility_scale(cfg.experiments.mobility_scale);
  const auto ref = build_trajectory(cfg.trajectory);
  control::TrackOptions opt = cfg.track;
  opt.kind = control::ControllerKind::kAdaptiveQp;
  std::vector<double> on, off;
  for (std::uint64_t seed = 1; seed <= cfg.experiments.adaptation_trials; ++seed) {
    opt.adapt = true;
    out.adaptive.push_back(summarize(run_track(c, model, ref, seed, opt), "adaptive", seed));
    opt.adapt = false;
    out.frozen.push_back(summarize(run_track(c, model, ref, seed, opt), "frozen", seed));
    if (out.adaptive.back().completed) on.push_back(out.adaptive.back().steady_error);
    if (out.frozen.back().completed) off.push_back(out.frozen.back().steady_error);
  }
  out.median_adaptive = median(on);
  out.median_frozen = median(off);
  return out;
}

PlannerResult run_planner_comparison(const ScenarioConfig& cfg, const planner::World& world) {
  const auto t0 = Clock::now();
  PlannerResult out;
  std::vector<double> curv[3];
  std::size_t compared = 0, not_worse = 0;
  const planner::PlanMethod methods[3] = {planner::PlanMethod::kCoRrt,
                                          planner::PlanMethod::kCoRrtNoSmooth,
                                          planner::PlanMethod::kRrt};
  for (std::uint64_t seed = 1; seed <= cfg.experiments.planner_trials; ++seed) {
    planner::PlannerParams pp = cfg.planner;
    pp.seed = seed;
    for (int m = 0; m < 3; ++m) {
      PlannerTrial trial{seed, methods[m]};
      try {
        auto path = planner::plan_path(world, cfg.start, cfg.goal, methods[m], pp, cfg.smoothing);
        trial.found = true;
        trial.max_curvature = path.max_curvature;
        trial.collision_free = path.collision_free;
        trial.waypoints = path.waypoints.size();
        out.all_free = out.all_free && path.collision_free;
        curv[m].push_back(path.max_curvature);
        if (m == 0 && path.waypoints.size() >= 3) {
          ++compared;
          if (path.max_curvature <= planner::max_curvature(path.waypoints)) ++not_worse;
        }
        if (seed == 1) out.example.push_back(std::move(path));
      } catch (const NoPathFound&) {
        ++out.no_path;
      }
      out.trials.push_back(trial);
    }
  }
  out.median_co_rrt = median(curv[0]);
  out.median_no_smooth = median(curv[1]);
  out.median_rrt = median(curv[2]);
  out.smooth_not_worse = compared ? static_cast<double>(not_worse) / compared : 0.0;
  out.seconds = seconds_since(t0);
  return out;
}

bool SuiteReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

SuiteReport run_suite(const ScenarioConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport r;
  r.data = run_data_efficiency(cfg);
  r.sweep = run_activation_sweep(cfg);
  const auto model = tracking_model(cfg);
  r.letters = run_letters(cfg, model);
  r.lambda = run_lambda_sweep(cfg, model);
  r.comparison = run_controller_comparison(cfg, model);
  r.adaptation = run_adaptation(cfg, model);
  r.planner = run_planner_comparison(cfg, planner::load_world(cfg.world));
  r.seconds = seconds_since(t0);
  r.checks = evaluate(r, cfg);
  return r;
}

std::vector<Check> evaluate(const SuiteReport& r, const ScenarioConfig& cfg) {
  const auto& th = cfg.thresholds;
  std::vector<Check> out;
  auto fmt = [](double v) { return format_double(std::round(v * 1e4) / 1e4); };

  {
    bool ok = !r.data.median_object.empty();
    std::string d = "median e_u:";
    for (std::size_t k = 0; k < r.data.median_object.size(); ++k) {
      d += " n=" + std::to_string(r.data.sizes[k]) + ":" + fmt(r.data.median_object[k]);
      if (k > 0 && r.data.median_object[k] > r.data.median_object[k - 1]) ok = false;
    }
    out.push_back({"data_efficiency_non_increasing", ok, d});
    const double last = r.data.median_object.empty() ? std::nan("") : r.data.median_object.back();
    out.push_back({"test_error_band", last >= th.test_error_min && last <= th.test_error_max,
                   "median e_u at largest n = " + fmt(last) + " in [" + fmt(th.test_error_min) +
                       ", " + fmt(th.test_error_max) + "]"});
    out.push_back({"decoupling_advantage",
                   r.data.median_ablation_local < r.data.median_ablation_global,
                   "local " + fmt(r.data.median_ablation_local) + " < global " +
                       fmt(r.data.median_ablation_global)});
  }

  {
    std::vector<const RunSummary*> qp_runs;
    for (const auto& s : r.letters) qp_runs.push_back(&s);
    for (const auto& c : r.lambda) {
      for (const auto& s : c.runs) qp_runs.push_back(&s);
    }
    for (const auto& s : r.comparison.qp) qp_runs.push_back(&s);
    for (const auto& s : r.adaptation.adaptive) qp_runs.push_back(&s);
    for (const auto& s : r.adaptation.frozen) qp_runs.push_back(&s);
    std::size_t norm = 0, line = 0, contacts = 0, active = 0;
    for (const auto* s : qp_runs) {
      norm += s->norm_violations;
      line += s->constraint_violations;
      contacts += s->contact_events;
      active += s->constrained_steps;
    }
    for (const auto& s : r.comparison.baseline) norm += s.norm_violations;
    out.push_back({"constraint_soundness", norm == 0 && line == 0 && contacts == 0,
                   std::to_string(qp_runs.size()) + " QP runs: norm violations " +
                       std::to_string(norm) + ", distance violations " + std::to_string(line) +
                       " over " + std::to_string(active) + " constrained steps, contacts " +
                       std::to_string(contacts)});
  }

  {
    bool ok = !r.letters.empty();
    std::string d;
    for (const auto& s : r.letters) {
      if (!s.completed || s.contact || !(s.max_error > s.mean_error)) ok = false;
    }
    for (const auto& letter : cfg.experiments.letters) {
      std::vector<double> mean, max;
      for (const auto& s : r.letters) {
        if (s.scenario == "letter_" + letter && s.completed) {
          mean.push_back(s.mean_error);
          max.push_back(s.max_error);
        }
      }
      d += letter + ": mean " + fmt(median(mean)) + " max " + fmt(median(max)) + "; ";
    }
    out.push_back({"letters_max_exceeds_mean", ok, d});
  }

  {
    const auto& radii = cfg.experiments.radii;
    const auto& lambdas = cfg.experiments.lambdas;
    auto cell = [&](double radius, double lambda) -> const LambdaCell* {
      for (const auto& c : r.lambda) {
        if (c.radius == radius && c.lambda == lambda) return &c;
      }
      return nullptr;
    };
    bool trend = !radii.empty() && !lambdas.empty();
    std::string d;
    std::vector<double> sorted = radii;
    std::sort(sorted.begin(), sorted.end());
    for (double lambda : lambdas) {
      d += "λ=" + fmt(lambda) + ":";
      for (std::size_t k = 0; k < sorted.size(); ++k) {
        const auto* c = cell(sorted[k], lambda);
        if (!c) {
          trend = false;
          continue;
        }
        d += " " + fmt(c->median_relative_error);
        if (k > 0) {
          const auto* prev = cell(sorted[k - 1], lambda);
          if (prev && !(prev->median_relative_error > c->median_relative_error)) trend = false;
        }
      }
      d += "; ";
    }
    bool small_radius_gain = false;
    if (!sorted.empty() && !lambdas.empty()) {
      const double lo = *std::min_element(lambdas.begin(), lambdas.end());
      const double hi = *std::max_element(lambdas.begin(), lambdas.end());
      const auto* a = cell(sorted.front(), lo);
      const auto* b = cell(sorted.front(), hi);
      small_radius_gain = a && b && b->median_relative_error < a->median_relative_error;
    }
    out.push_back({"curvature_lambda_trend", trend && small_radius_gain, d});
    const auto* big = sorted.empty() ? nullptr : cell(sorted.back(), 2.0);
    out.push_back({"large_circle_accuracy",
                   big && big->median_relative_error < th.circle_rel_error_max,
                   big ? "median relative error " + fmt(big->median_relative_error) + " < " +
                             fmt(th.circle_rel_error_max)
                       : "no λ=2 cell at the largest radius"});
  }

  {
    std::size_t baseline_contacts = 0, baseline_seeds = 0, qp_clean = 0, baseline_done = 0;
    for (const auto& s : r.comparison.baseline) {
      baseline_contacts += s.contact_events;
      baseline_seeds += s.contact;
      baseline_done += s.completed;
    }
    for (const auto& s : r.comparison.qp) qp_clean += s.completed && !s.contact;
    const std::size_t n = r.comparison.qp.size();
    // Per seed: the baseline touches the object and the QP run is clean.
    out.push_back({"controller_comparison", n > 0 && baseline_seeds == n && qp_clean == n,
                   "P-baseline contact on " + std::to_string(baseline_seeds) + "/" +
                       std::to_string(r.comparison.baseline.size()) + " seeds, completed " +
                       std::to_string(baseline_done) + "; QP clean completion " +
                       std::to_string(qp_clean) + "/" + std::to_string(n) + ", " +
                       std::to_string(baseline_contacts) + " baseline contact events"});
  }

  out.push_back({"adaptation_benefit",
                 r.adaptation.median_adaptive < r.adaptation.median_frozen,
                 "median steady error adaptive " + fmt(r.adaptation.median_adaptive) +
                     " vs frozen " + fmt(r.adaptation.median_frozen) + " at mobility x" +
                     fmt(cfg.experiments.mobility_scale)});

  {
    const auto& p = r.planner;
    const bool order = p.median_co_rrt < p.median_no_smooth && p.median_no_smooth < p.median_rrt;
    out.push_back({"planner_ordering", order && p.all_free && p.seconds < th.planner_runtime_max,
                   "median max curvature co-rrt " + fmt(p.median_co_rrt) + " < no-smooth " +
                       fmt(p.median_no_smooth) + " < rrt " + fmt(p.median_rrt) +
                       (p.all_free ? ", all collision-free" : ", COLLISION") + ", no-path " +
                       std::to_string(p.no_path)});
    out.push_back({"smoothing_reduces_curvature", p.smooth_not_worse >= th.smooth_fraction_min,
                   "smoothed <= raw on " + fmt(100.0 * p.smooth_not_worse) + "% of seeds"});
  }

  out.push_back({"suite_runtime", r.seconds < th.suite_runtime_max,
                 "runtime " + fmt(r.seconds) + " s, limit " + fmt(th.suite_runtime_max) + " s"});
  return out;
}

nlohmann::json to_json(const SuiteReport& r) {
  using nlohmann::json;
  auto run = [](const RunSummary& s) {
    return json{{"scenario", s.scenario},
                {"seed", s.seed},
                {"completed", s.completed},
                {"contact", s.contact},
                {"contact_events", s.contact_events},
                {"steps", s.steps},
                {"mean_error", s.mean_error},
                {"max_error", s.max_error},
                {"relative_error", s.relative_error},
                {"steady_error", s.steady_error},
                {"max_u_norm", s.max_u_norm},
                {"norm_violations", s.norm_violations},
                {"constraint_violations", s.constraint_violations},
                {"constrained_steps", s.constrained_steps},
                {"update_faults", s.update_faults}};
  };
  auto runs = [&](const std::vector<RunSummary>& v) {
    json a = json::array();
    for (const auto& s : v) a.push_back(run(s));
    return a;
  };
  json doc;
  doc["data_efficiency"] = {{"sizes", r.data.sizes},
                            {"median_e_u", r.data.median_object},
                            {"median_e_r", r.data.median_relative},
                            {"ablation_local", r.data.median_ablation_local},
                            {"ablation_global", r.data.median_ablation_global}};
  json sweep = json::array();
  for (const auto& c : r.sweep) {
    sweep.push_back({{"neurons", c.neurons},
                     {"activation", rbfn::to_string(c.kind)},
                     {"e_u", c.e_object},
                     {"e_r", c.e_relative}});
  }
  doc["activation_sweep"] = sweep;
  doc["letters"] = runs(r.letters);
  json lam = json::array();
  for (const auto& c : r.lambda) {
    lam.push_back({{"radius", c.radius},
                   {"lambda", c.lambda},
                   {"median_relative_error", c.median_relative_error},
                   {"runs", runs(c.runs)}});
  }
  doc["lambda_sweep"] = lam;
  doc["controller_comparison"] = {{"qp", runs(r.comparison.qp)},
                                  {"p_baseline", runs(r.comparison.baseline)}};
  doc["adaptation"] = {{"median_adaptive", r.adaptation.median_adaptive},
                       {"median_frozen", r.adaptation.median_frozen},
                       {"adaptive", runs(r.adaptation.adaptive)},
                       {"frozen", runs(r.adaptation.frozen)}};
  doc["planner"] = {{"median_co_rrt", r.planner.median_co_rrt},
                    {"median_co_rrt_nosmooth", r.planner.median_no_smooth},
                    {"median_rrt", r.planner.median_rrt},
                    {"no_path", r.planner.no_path},
                    {"all_collision_free", r.planner.all_free},
                    {"smoothed_not_worse_fraction", r.planner.smooth_not_worse},
                    {"seconds", r.planner.seconds}};
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  doc["checks"] = checks;
  doc["seconds"] = r.seconds;
  return doc;
}

void write_report(const SuiteReport& r, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path root(dir);
  {
    auto out = open_out(root / "report.json");
    out << to_json(r).dump(2) << '\n';
  }
  {
    auto out = open_out(root / "report.txt");
    for (const auto& c : r.checks) {
      out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    }
  }
  {
    auto out = open_out(root / "data_efficiency.csv");
    out << "n,trial,e_u,e_r\n";
    for (const auto& row : r.data.rows) {
      out << row.size << ',' << row.trial << ',' << format_double(row.e_object) << ','
          << format_double(row.e_relative) << '\n';
    }
  }
  {
    auto out = open_out(root / "activation_sweep.csv");
    out << "neurons,activation,e_u,e_r\n";
    for (const auto& c : r.sweep) {
      out << c.neurons << ',' << rbfn::to_string(c.kind) << ',' << format_double(c.e_object)
          << ',' << format_double(c.e_relative) << '\n';
    }
  }
  auto write_runs = [&](const std::string& name, const std::vector<RunSummary>& runs) {
    auto out = open_out(root / name);
    out << "scenario,seed,completed,contact_events,steps,mean_error,max_error,relative_error,"
           "steady_error,max_u_norm,norm_violations,constraint_violations\n";
    for (const auto& s : runs) {
      out << s.scenario << ',' << s.seed << ',' << s.completed << ',' << s.contact_events << ','
          << s.steps << ',' << format_double(s.mean_error) << ',' << format_double(s.max_error)
          << ',' << format_double(s.relative_error) << ',' << format_double(s.steady_error)
          << ',' << format_double(s.max_u_norm) << ',' << s.norm_violations << ','
          << s.constraint_violations << '\n';
    }
  };
  write_runs("letters.csv", r.letters);
  std::vector<RunSummary> lam;
  for (const auto& c : r.lambda) lam.insert(lam.end(), c.runs.begin(), c.runs.end());
  write_runs("lambda_sweep.csv", lam);
  std::vector<RunSummary> cmp = r.comparison.qp;
  cmp.insert(cmp.end(), r.comparison.baseline.begin(), r.comparison.baseline.end());
  write_runs("controller_comparison.csv", cmp);
  std::vector<RunSummary> ad = r.adaptation.adaptive;
  ad.insert(ad.end(), r.adaptation.frozen.begin(), r.adaptation.frozen.end());
  write_runs("adaptation.csv", ad);
  {
    auto out = open_out(root / "planner_comparison.csv");
    out << "seed,method,found,max_curvature,collision_free,waypoints\n";
    for (const auto& t : r.planner.trials) {
      out << t.seed << ',' << planner::to_string(t.method) << ',' << t.found << ','
          << format_double(t.max_curvature) << ',' << t.collision_free << ',' << t.waypoints
          << '\n';
    }
  }
  if (!r.comparison.qp_logs.empty()) {
    write_track_svg((root / "compare_qp.svg").string(), r.comparison.qp_logs.front());
    write_track_svg((root / "compare_p.svg").string(), r.comparison.baseline_logs.front());
  }
}

}  // namespace nocontact::experiments

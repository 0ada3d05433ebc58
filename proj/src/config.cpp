#include "nocontact/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>
#include <utility>

#include "nocontact/error.hpp"
#include "nocontact/trajectories.hpp"

namespace nocontact {
namespace {

using nlohmann::json;

template <class E>
struct EnumNames;

#define NOCONTACT_ENUM_NAMES(E, ...)                                        \
  template <>                                                              \
  struct EnumNames<E> {                                                    \
    static const std::vector<std::pair<E, std::string_view>>& get() {      \
      static const std::vector<std::pair<E, std::string_view>> t{__VA_ARGS__}; \
      return t;                                                            \
    }                                                                      \
  };

NOCONTACT_ENUM_NAMES(rbfn::Activation, {rbfn::Activation::kMultiquadric, "multiquadric"},
                     {rbfn::Activation::kGaussian, "gaussian"})
NOCONTACT_ENUM_NAMES(RadiusNormalizer, {RadiusNormalizer::kSum, "sum"},
                     {RadiusNormalizer::kMean, "mean"})
NOCONTACT_ENUM_NAMES(control::DistanceConstraint,
                     {control::DistanceConstraint::kSeparating, "separating"},
                     {control::DistanceConstraint::kAsPrinted, "as-printed"})
NOCONTACT_ENUM_NAMES(control::UpdateRule, {control::UpdateRule::kEuler, "euler"},
                     {control::UpdateRule::kNormalizedEuler, "normalized-euler"})
NOCONTACT_ENUM_NAMES(control::ControllerKind, {control::ControllerKind::kAdaptiveQp, "qp"},
                     {control::ControllerKind::kProportional, "p"})
NOCONTACT_ENUM_NAMES(control::BaselineLaw,
                     {control::BaselineLaw::kGoalDirection, "goal-direction"},
                     {control::BaselineLaw::kThroughObject, "through-object"},
                     {control::BaselineLaw::kStandoff, "standoff"})
NOCONTACT_ENUM_NAMES(planner::BezierMode, {planner::BezierMode::kPiecewise, "piecewise"},
                     {planner::BezierMode::kGlobal, "global"})
NOCONTACT_ENUM_NAMES(planner::TurningForm, {planner::TurningForm::kDirections, "directions"},
                     {planner::TurningForm::kLiteralPositions, "literal-positions"})
NOCONTACT_ENUM_NAMES(TrajectoryKind, {TrajectoryKind::kLetter, "letter"},
                     {TrajectoryKind::kCircle, "circle"}, {TrajectoryKind::kSCurve, "s-curve"},
                     {TrajectoryKind::kWaypoints, "waypoints"})

#undef NOCONTACT_ENUM_NAMES

template <class T, class = void>
struct IsEnumMapped : std::false_type {};
template <class T>
struct IsEnumMapped<T, std::void_t<decltype(EnumNames<T>::get())>> : std::true_type {};

template <class T>
json encode(const T& value) {
  if constexpr (std::is_same_v<T, Vec2>) {
    return json::array({value.x(), value.y()});
  } else if constexpr (IsEnumMapped<T>::value) {
    for (const auto& [e, name] : EnumNames<T>::get()) {
      if (e == value) return std::string(name);
    }
    return nullptr;
  } else {
    return value;
  }
}

template <class T>
void decode(const json& j, T& out, const std::string& path) {
  if constexpr (std::is_same_v<T, Vec2>) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
      throw ConfigError("config: " + path + " must be [x, y]");
    }
    out = Vec2(j[0].get<double>(), j[1].get<double>());
  } else if constexpr (IsEnumMapped<T>::value) {
    if (!j.is_string()) throw ConfigError("config: " + path + " must be a string");
    const std::string s = j.get<std::string>();
    for (const auto& [e, name] : EnumNames<T>::get()) {
      if (name == s) {
        out = e;
        return;
      }
    }
    throw ConfigError("config: unknown value '" + s + "' for " + path);
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) throw ConfigError("config: " + path + " must be a boolean");
    out = j.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!j.is_string()) throw ConfigError("config: " + path + " must be a string");
    out = j.get<std::string>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer()) throw ConfigError("config: " + path + " must be an integer");
    if (std::is_unsigned_v<T> && j.get<long long>() < 0) {
      throw ConfigError("config: " + path + " must be non-negative");
    }
    out = j.get<T>();
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!j.is_number()) throw ConfigError("config: " + path + " must be a number");
    out = j.get<T>();
  } else {
    // std::vector of one of the above
    if (!j.is_array()) throw ConfigError("config: " + path + " must be an array");
    T items;
    for (std::size_t i = 0; i < j.size(); ++i) {
      typename T::value_type item{};
      decode(j[i], item, path + "[" + std::to_string(i) + "]");
      items.push_back(item);
    }
    out = std::move(items);
  }
}

json::json_pointer pointer(const std::string& dotted) {
  std::string p = "/" + dotted;
  for (char& c : p) {
    if (c == '.') c = '/';
  }
  return json::json_pointer(p);
}

struct Writer {
  json doc = json::object();
  template <class T>
  void operator()(const std::string& path, T& value) {
    if constexpr (!IsEnumMapped<T>::value && !std::is_same_v<T, Vec2> &&
                  !std::is_arithmetic_v<T> && !std::is_same_v<T, std::string>) {
      json arr = json::array();
      for (const auto& v : value) arr.push_back(encode(v));
      doc[pointer(path)] = arr;
    } else {
      doc[pointer(path)] = encode(value);
    }
  }
};

struct Reader {
  const json& doc;
  std::set<std::string> known;
  template <class T>
  void operator()(const std::string& path, T& value) {
    known.insert(path);
    const auto ptr = pointer(path);
    if (doc.contains(ptr)) decode(doc.at(ptr), value, path);
  }
};

template <class V>
void visit(ScenarioConfig& c, V& v) {
  auto curve = [&v](const std::string& p, plant::MobilityCurve& m) {
    v(p + ".amplitude", m.amplitude);
    v(p + ".decay", m.decay);
    v(p + ".cutoff", m.cutoff);
  };
  curve("plant.normal", c.plant.normal);
  curve("plant.tangential", c.plant.tangential);
  v("plant.translation_gain", c.plant.translation_gain);
  v("plant.brownian", c.plant.brownian);
  v("plant.dt", c.plant.dt);
  v("plant.seed", c.plant.seed);
  v("plant.arena.lower", c.plant.arena.lower);
  v("plant.arena.upper", c.plant.arena.upper);
  v("plant.normalizer", c.plant.normalizer);

  v("excitation.s_min", c.excitation.s_min);
  v("excitation.s_max", c.excitation.s_max);
  v("excitation.s_exponent", c.excitation.s_exponent);
  v("excitation.u_max", c.excitation.u_max);
  v("excitation.u_min_fraction", c.excitation.u_min_fraction);
  v("excitation.robot_radius", c.excitation.robot_radius);
  v("excitation.object_radius", c.excitation.object_radius);
  v("excitation.arena_margin", c.excitation.arena_margin);

  auto& k = c.controller;
  v("controller.gain", k.gain);
  v("controller.lambda", k.lambda);
  v("controller.u_max", k.u_max);
  v("controller.s_min", k.s_min);
  v("controller.s_max", k.s_max);
  v("controller.tau1", k.tau1);
  v("controller.tau2", k.tau2);
  v("controller.x_r_avg", k.x_r_avg);
  v("controller.tolerance", k.tolerance);
  v("controller.lookahead", k.lookahead);
  v("controller.dt", k.dt);
  v("controller.ridge", k.ridge);
  v("controller.weight_clamp", k.weight_clamp);
  v("controller.constraint", k.constraint);
  v("controller.update_rule", k.update_rule);
  v("controller.freeze_task_term_when_saturated", k.freeze_task_term_when_saturated);

  v("track.kind", c.track.kind);
  v("track.adapt", c.track.adapt);
  v("track.baseline_gain", c.track.baseline_gain);
  v("track.baseline_law", c.track.baseline_law);
  v("track.timeout", c.track.timeout);
  v("track.stop_on_contact", c.track.stop_on_contact);

  v("rbfn.neurons", c.rbfn.neurons);
  v("rbfn.activation", c.rbfn.activation);
  v("rbfn.train_size", c.rbfn.train_size);
  v("rbfn.test_size", c.rbfn.test_size);
  v("rbfn.data_seed", c.rbfn.data_seed);
  v("rbfn.test_seed_offset", c.rbfn.test_seed_offset);
  auto& t = c.rbfn.train;
  v("rbfn.train.learning_rate", t.learning_rate);
  v("rbfn.train.beta1", t.beta1);
  v("rbfn.train.beta2", t.beta2);
  v("rbfn.train.epsilon", t.epsilon);
  v("rbfn.train.epochs", t.epochs);
  v("rbfn.train.batch_size", t.batch_size);
  v("rbfn.train.weight_decay", t.weight_decay);
  v("rbfn.train.tolerance", t.tolerance);
  v("rbfn.train.seed", t.seed);
  v("rbfn.train.refine_basis", t.refine_basis);
  v("rbfn.train.polish", t.polish);
  v("rbfn.train.center_margin", t.center_margin);

  v("planner.step", c.planner.step);
  v("planner.max_iters", c.planner.max_iters);
  v("planner.goal_bias", c.planner.goal_bias);
  v("planner.theta_max", c.planner.theta_max);
  v("planner.angle_weight", c.planner.angle_weight);
  v("planner.seed", c.planner.seed);
  v("planner.form", c.planner.form);

  v("smoothing.mode", c.smoothing.mode);
  v("smoothing.degree", c.smoothing.degree);
  v("smoothing.handle_scale", c.smoothing.handle_scale);
  v("smoothing.max_repairs", c.smoothing.max_repairs);
  v("smoothing.check_spacing", c.smoothing.check_spacing);
  v("smoothing.tune_handles", c.smoothing.tune_handles);

  v("world", c.world);
  v("start", c.start);
  v("goal", c.goal);

  v("trajectory.kind", c.trajectory.kind);
  v("trajectory.letter", c.trajectory.letter);
  v("trajectory.origin", c.trajectory.origin);
  v("trajectory.center", c.trajectory.center);
  v("trajectory.radius", c.trajectory.radius);
  v("trajectory.start", c.trajectory.start);
  v("trajectory.length", c.trajectory.length);
  v("trajectory.amplitude", c.trajectory.amplitude);
  v("trajectory.file", c.trajectory.file);
  v("trajectory.spacing", c.trajectory.spacing);

  v("seeds", c.seeds);
  v("output_dir", c.output_dir);

  v("thresholds.test_error_min", c.thresholds.test_error_min);
  v("thresholds.test_error_max", c.thresholds.test_error_max);
  v("thresholds.circle_rel_error_max", c.thresholds.circle_rel_error_max);
  v("thresholds.smooth_fraction_min", c.thresholds.smooth_fraction_min);
  v("thresholds.norm_tolerance", c.thresholds.norm_tolerance);
  v("thresholds.planner_runtime_max", c.thresholds.planner_runtime_max);
  v("thresholds.suite_runtime_max", c.thresholds.suite_runtime_max);

  auto& e = c.experiments;
  v("experiments.data_sizes", e.data_sizes);
  v("experiments.data_trials", e.data_trials);
  v("experiments.ablation_size", e.ablation_size);
  v("experiments.ablation_grid", e.ablation_grid);
  v("experiments.sweep_neurons", e.sweep_neurons);
  v("experiments.letters", e.letters);
  v("experiments.radii", e.radii);
  v("experiments.lambdas", e.lambdas);
  v("experiments.planner_trials", e.planner_trials);
  v("experiments.mobility_scale", e.mobility_scale);
  v("experiments.adaptation_trials", e.adaptation_trials);
}

void collect_leaves(const json& j, const std::string& prefix, std::vector<std::string>& out) {
  if (j.is_object() && !j.empty()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      collect_leaves(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else {
    out.push_back(prefix);
  }
}

}  // namespace

std::vector<Vec2> build_trajectory(const TrajectorySpec& spec) {
  switch (spec.kind) {
    case TrajectoryKind::kLetter:
      return letter_trajectory(spec.letter, spec.origin);
    case TrajectoryKind::kCircle:
      if (!(spec.radius > 0.0)) throw ConfigError("trajectory: radius must be positive");
      return circle_trajectory(spec.center, spec.radius, spec.spacing);
    case TrajectoryKind::kSCurve:
      if (!(spec.length > 0.0)) throw ConfigError("trajectory: length must be positive");
      return s_curve_trajectory(spec.start, spec.length, spec.amplitude, spec.spacing);
    case TrajectoryKind::kWaypoints: {
      if (spec.file.empty()) throw ConfigError("trajectory: waypoint file not set");
      auto pts = load_waypoints(spec.file);
      if (pts.empty()) throw ConfigError("trajectory: waypoint file is empty");
      return pts;
    }
  }
  throw ConfigError("trajectory: unknown kind");
}

void ScenarioConfig::validate() const {
  plant.validate();
  controller.validate();
  if (seeds.empty()) throw ConfigError("config: seeds must not be empty");
  if (plant.dt != controller.dt) throw ConfigError("config: plant.dt and controller.dt differ");
  if (rbfn.neurons < 1) throw ConfigError("config: rbfn.neurons must be >= 1");
  if (rbfn.train_size == 0) throw ConfigError("config: rbfn.train_size must be positive");
  if (!(planner.step > 0.0) || planner.max_iters < 1) {
    throw ConfigError("config: planner step and max_iters must be positive");
  }
  if (experiments.data_sizes.empty() || experiments.data_trials == 0) {
    throw ConfigError("config: data-efficiency plan is empty");
  }
}

void apply_json(ScenarioConfig& cfg, const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  Reader reader{doc, {}};
  visit(cfg, reader);
  std::vector<std::string> leaves;
  collect_leaves(doc, "", leaves);
  for (const auto& leaf : leaves) {
    if (!leaf.empty() && !reader.known.count(leaf)) {
      throw ConfigError("config: unknown key '" + leaf + "'");
    }
  }
}

void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("config: override must look like key=value: " + assignment);
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json doc = json::object();
  doc[pointer(key)] = value;
  apply_json(cfg, doc);
}

nlohmann::json to_json(const ScenarioConfig& cfg) {
  ScenarioConfig copy = cfg;
  Writer writer;
  visit(copy, writer);
  return writer.doc;
}

ScenarioConfig load_config(const std::string& path) {
  ScenarioConfig cfg;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const json doc = json::parse(buf.str(), nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config: " + path + " is not valid JSON");
    apply_json(cfg, doc);
  }
  if (const char* env = std::getenv(kOutputEnv); env && *env) cfg.output_dir = env;
  return cfg;
}

}  // namespace nocontact

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nocontact/error.hpp"
#include "nocontact/rbfn.hpp"

namespace nocontact::rbfn {

namespace {

using nlohmann::json;

json row_major(const WeightMatrix& w) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < w.cols(); ++c) row.push_back(w(r, c));
    rows.push_back(row);
  }
  return rows;
}

Eigen::VectorXd vector_from(const json& j, Eigen::Index p, const char* name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != p) {
    throw ConfigError(std::string("model: '") + name + "' must have p entries");
  }
  Eigen::VectorXd v(p);
  for (Eigen::Index i = 0; i < p; ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

WeightMatrix matrix_from(const json& j, Eigen::Index p, const char* name) {
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError(std::string("model: '") + name + "' must have two rows");
  }
  WeightMatrix w(2, p);
  for (Eigen::Index r = 0; r < 2; ++r) {
    w.row(r) = vector_from(j.at(static_cast<std::size_t>(r)), p, name).transpose();
  }
  return w;
}

}  // namespace

std::string to_json(const RbfnModel& model) {
  json j;
  j["kind"] = to_string(model.kind);
  j["p"] = model.size();
  j["robot_radius"] = model.robot_radius;
  j["object_radius"] = model.object_radius;
  j["normalizer"] = model.normalizer == RadiusNormalizer::kSum ? "sum" : "mean";
  j["centers"] = std::vector<double>(model.centers.data(), model.centers.data() + model.size());
  j["widths"] = std::vector<double>(model.widths.data(), model.widths.data() + model.size());
  j["W_u"] = row_major(model.w_object);
  j["W_r"] = row_major(model.w_relative);
  return j.dump(2) + "\n";
}

RbfnModel from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model: invalid JSON: ") + e.what());
  }
  try {
    RbfnModel model;
    model.kind = activation_from_string(j.at("kind").get<std::string>());
    const auto p = j.at("p").get<Eigen::Index>();
    if (p < 1) throw ConfigError("model: p must be >= 1");
    model.robot_radius = j.value("robot_radius", 5.0);
    model.object_radius = j.value("object_radius", 5.0);
    model.normalizer = j.value("normalizer", std::string("sum")) == "mean"
                           ? RadiusNormalizer::kMean
                           : RadiusNormalizer::kSum;
    model.centers = vector_from(j.at("centers"), p, "centers");
    model.widths = vector_from(j.at("widths"), p, "widths");
    model.w_object = matrix_from(j.at("W_u"), p, "W_u");
    model.w_relative = matrix_from(j.at("W_r"), p, "W_r");
    model.validate();
    return model;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

void save_model(const RbfnModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << to_json(model);
  if (!out) throw IoError("failed writing '" + path + "'");
}

RbfnModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace nocontact::rbfn

#include "nocontact/trajectories.hpp"

#include <cmath>
#include <fstream>

#include "nocontact/csv.hpp"
#include "nocontact/error.hpp"

namespace nocontact {

namespace {
constexpr double kPi = 3.14159265358979323846;
}  // namespace

double polyline_length(const std::vector<Vec2>& polyline) {
  double len = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) len += (polyline[i] - polyline[i - 1]).norm();
  return len;
}

std::vector<Vec2> resample(const std::vector<Vec2>& polyline, double spacing) {
  if (!(spacing > 0.0)) throw DomainError("resample: spacing must be positive");
  std::vector<Vec2> out;
  if (polyline.empty()) return out;
  out.push_back(polyline.front());
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    const Vec2 a = polyline[i - 1];
    const Vec2 b = polyline[i];
    const double len = (b - a).norm();
    if (len == 0.0) continue;
    const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
    for (int k = 1; k <= n; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / n));
  }
  return out;
}

std::vector<Vec2> circle_trajectory(const Vec2& center, double radius, double spacing) {
  if (!(radius > 0.0)) throw DomainError("circle_trajectory: radius must be positive");
  const int n = std::max(16, static_cast<int>(std::ceil(2.0 * kPi * radius / spacing)));
  std::vector<Vec2> out;
  for (int k = 0; k <= n; ++k) {
    const double a = 2.0 * kPi * k / n;
    out.push_back(center + radius * Vec2(std::cos(a), std::sin(a)));
  }
  return out;
}

std::vector<Vec2> s_curve_trajectory(const Vec2& start, double length, double amplitude,
                                     double spacing) {
  if (!(length > 0.0)) throw DomainError("s_curve_trajectory: length must be positive");
  // Dense parametric sampling, then even spacing by arc length.
  std::vector<Vec2> dense;
  const int n = 4000;
  for (int k = 0; k <= n; ++k) {
    const double x = length * k / n;
    dense.push_back(start + Vec2(x, amplitude * std::sin(2.0 * kPi * x / length)));
  }
  std::vector<Vec2> out{dense.front()};
  double since = 0.0;
  for (std::size_t i = 1; i < dense.size(); ++i) {
    since += (dense[i] - dense[i - 1]).norm();
    if (since >= spacing || i + 1 == dense.size()) {
      out.push_back(dense[i]);
      since = 0.0;
    }
  }
  return out;
}

std::map<std::string, std::vector<Vec2>> load_letters(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open letters file '" + path + "'");
  std::string line;
  std::getline(in, line);
  if (line.rfind("letter,x,y", 0) != 0) throw ConfigError("letters file: bad header");
  std::map<std::string, std::vector<Vec2>> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 3) throw ConfigError("letters file: expected 3 fields");
    out[f[0]].push_back(Vec2(parse_double(f[1]), parse_double(f[2])));
  }
  return out;
}

std::string default_letters_path() { return std::string(NOCONTACT_DATA_DIR) + "/letters.csv"; }

std::vector<Vec2> letter_trajectory(const std::string& name, const Vec2& origin,
                                    const std::string& path) {
  const auto letters = load_letters(path);
  const auto it = letters.find(name);
  if (it == letters.end()) throw ConfigError("unknown letter '" + name + "'");
  std::vector<Vec2> out = it->second;
  for (Vec2& p : out) p += origin;
  return out;
}

std::vector<Vec2> load_waypoints(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open waypoint file '" + path + "'");
  std::string line;
  std::getline(in, line);
  std::vector<Vec2> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() < 2) throw ConfigError("waypoint file: expected x,y");
    out.push_back(Vec2(parse_double(f[0]), parse_double(f[1])));
  }
  return out;
}

void save_waypoints(const std::vector<Vec2>& pts, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "x,y\n";
  for (const Vec2& p : pts) out << format_double(p.x()) << ',' << format_double(p.y()) << '\n';
}

}  // namespace nocontact

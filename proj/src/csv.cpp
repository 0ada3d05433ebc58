#include "nocontact/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nocontact/error.hpp"

namespace nocontact {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r' || text.back() == '\t')) {
    text.remove_suffix(1);
  }
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

void write_dataset(std::ostream& out, const std::vector<plant::DataTuple>& data) {
  out << kDatasetHeader << '\n';
  for (const auto& t : data) {
    out << format_double(t.x_r.x()) << ',' << format_double(t.x_r.y()) << ','
        << format_double(t.v_u.x()) << ',' << format_double(t.v_u.y()) << ','
        << format_double(t.v_r.x()) << ',' << format_double(t.v_r.y()) << ','
        << format_double(t.u.x()) << ',' << format_double(t.u.y()) << '\n';
  }
}

void write_dataset(const std::string& path, const std::vector<plant::DataTuple>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_dataset(out, data);
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<plant::DataTuple> read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("dataset: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kDatasetHeader) throw ConfigError("dataset: unexpected header '" + line + "'");
  std::vector<plant::DataTuple> data;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) {
      throw ConfigError("dataset: row " + std::to_string(row) + " has " +
                        std::to_string(f.size()) + " fields, expected 8");
    }
    plant::DataTuple t;
    t.x_r = Vec2(parse_double(f[0]), parse_double(f[1]));
    t.v_u = Vec2(parse_double(f[2]), parse_double(f[3]));
    t.v_r = Vec2(parse_double(f[4]), parse_double(f[5]));
    t.u = Vec2(parse_double(f[6]), parse_double(f[7]));
    data.push_back(t);
  }
  return data;
}

std::vector<plant::DataTuple> read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset '" + path + "'");
  return read_dataset(in);
}

}  // namespace nocontact

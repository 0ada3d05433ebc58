#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nocontact/plant.hpp"

namespace nocontact {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

double parse_double(std::string_view text);

/// Splits one CSV line on commas (no quoting; none of our formats need it).
std::vector<std::string> split_csv_line(const std::string& line);

inline constexpr const char* kDatasetHeader = "x_r.x,x_r.y,v_u.x,v_u.y,v_r.x,v_r.y,u.x,u.y";

void write_dataset(std::ostream& out, const std::vector<plant::DataTuple>& data);
void write_dataset(const std::string& path, const std::vector<plant::DataTuple>& data);

/// Throws IoError on a missing/unreadable file and ConfigError on a malformed
/// header or row.
std::vector<plant::DataTuple> read_dataset(std::istream& in);
std::vector<plant::DataTuple> read_dataset(const std::string& path);

}  // namespace nocontact

#pragma once

#include <map>
#include <string>
#include <vector>

#include "nocontact/geometry.hpp"

namespace nocontact {

/// Points along a polyline every `spacing` µm; interior vertices are kept.
std::vector<Vec2> resample(const std::vector<Vec2>& polyline, double spacing);

double polyline_length(const std::vector<Vec2>& polyline);

/// Closed counter-clockwise circle starting at center + (R, 0).
std::vector<Vec2> circle_trajectory(const Vec2& center, double radius, double spacing = 2.0);

/// One full sine period along +x: y = start.y + amplitude·sin(2π (x - start.x) / length).
std::vector<Vec2> s_curve_trajectory(const Vec2& start, double length = 240.0,
                                     double amplitude = 50.0, double spacing = 2.0);

/// Letter strokes from a CSV with header `letter,x,y`.
std::map<std::string, std::vector<Vec2>> load_letters(const std::string& path);

/// The bundled letters file under the data directory.
std::string default_letters_path();

/// Letter `name` translated so its local origin sits at `origin`.
std::vector<Vec2> letter_trajectory(const std::string& name, const Vec2& origin,
                                    const std::string& path = default_letters_path());

/// Waypoints from a CSV with header `x,y`.
std::vector<Vec2> load_waypoints(const std::string& path);
void save_waypoints(const std::vector<Vec2>& pts, const std::string& path);

}  // namespace nocontact

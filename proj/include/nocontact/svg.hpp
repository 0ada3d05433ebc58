#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nocontact/controller.hpp"
#include "nocontact/planner.hpp"

namespace nocontact {

inline constexpr const char* kReferenceColor = "#1f77b4";  // blue
inline constexpr const char* kActualColor = "#ff7f0e";     // orange

/// Reference path in blue, the object's path in orange, and robot/object
/// circles at the first and last logged states.
void write_track_svg(std::ostream& out, const control::TrackLog& log);
void write_track_svg(const std::string& path, const control::TrackLog& log);

/// Obstacles (inflated outline dashed), raw waypoints and smoothed curves.
void write_plan_svg(std::ostream& out, const planner::World& world,
                    const std::vector<planner::PlannedPath>& paths);
void write_plan_svg(const std::string& path, const planner::World& world,
                    const std::vector<planner::PlannedPath>& paths);

}  // namespace nocontact

#include "nocontact/svg.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "nocontact/csv.hpp"
#include "nocontact/error.hpp"

namespace nocontact {
namespace {

struct Box {
  Vec2 lo{INFINITY, INFINITY};
  Vec2 hi{-INFINITY, -INFINITY};

  void add(const Vec2& p, double pad = 0.0) {
    lo = lo.cwiseMin(p - Vec2(pad, pad));
    hi = hi.cwiseMax(p + Vec2(pad, pad));
  }
};

// SVG y grows downward; flip so +y is up.
class Canvas {
 public:
  Canvas(std::ostream& out, const Box& box, double margin) : out_(out), box_(box), m_(margin) {
    const Vec2 size = box_.hi - box_.lo + Vec2(2 * m_, 2 * m_);
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_double(size.x())
         << "\" height=\"" << format_double(size.y()) << "\" viewBox=\"0 0 "
         << format_double(size.x()) << ' ' << format_double(size.y()) << "\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }
  ~Canvas() { out_ << "</svg>\n"; }

  std::string x(const Vec2& p) const { return format_double(p.x() - box_.lo.x() + m_); }
  std::string y(const Vec2& p) const { return format_double(box_.hi.y() - p.y() + m_); }

  void polyline(const std::vector<Vec2>& pts, const char* color, double width,
                const char* extra = "") {
    out_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
         << format_double(width) << "\" " << extra << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out_ << (i ? " " : "") << x(pts[i]) << ',' << y(pts[i]);
    }
    out_ << "\"/>\n";
  }

  void circle(const Vec2& c, double r, const char* stroke, const char* fill,
              const char* extra = "") {
    out_ << "<circle cx=\"" << x(c) << "\" cy=\"" << y(c) << "\" r=\"" << format_double(r)
         << "\" stroke=\"" << stroke << "\" fill=\"" << fill << "\" " << extra << "/>\n";
  }

 private:
  std::ostream& out_;
  Box box_;
  double m_;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

void write_track_svg(std::ostream& out, const control::TrackLog& log) {
  Box box;
  for (const Vec2& p : log.reference) box.add(p);
  for (const auto& r : log.rows) {
    box.add(r.state.object, r.state.object_radius);
    box.add(r.state.robot, r.state.robot_radius);
  }
  if (!(box.lo.x() <= box.hi.x())) box.add(Vec2::Zero());
  Canvas c(out, box, 10.0);
  c.polyline(log.reference, kReferenceColor, 1.5);
  std::vector<Vec2> actual;
  for (const auto& r : log.rows) actual.push_back(r.state.object);
  c.polyline(actual, kActualColor, 1.5);
  if (log.rows.empty()) return;
  for (const auto* r : {&log.rows.front(), &log.rows.back()}) {
    c.circle(r->state.object, r->state.object_radius, "black", "#cccccc");
    c.circle(r->state.robot, r->state.robot_radius, "black", "#444444");
  }
  if (log.first_contact_position) {
    c.circle(*log.first_contact_position, 3.0, "red", "none", "stroke-width=\"1.5\"");
  }
}

void write_track_svg(const std::string& path, const control::TrackLog& log) {
  auto out = open_out(path);
  write_track_svg(out, log);
}

void write_plan_svg(std::ostream& out, const planner::World& world,
                    const std::vector<planner::PlannedPath>& paths) {
  Box box;
  box.add(world.lower);
  box.add(world.upper);
  Canvas c(out, box, 10.0);
  c.polyline({world.lower, Vec2(world.upper.x(), world.lower.y()), world.upper,
              Vec2(world.lower.x(), world.upper.y()), world.lower},
             "black", 1.0);
  for (const auto& d : world.obstacles) {
    c.circle(d.center, d.radius, "none", "#888888");
    if (world.clearance > 0.0) {
      c.circle(d.center, d.radius + world.clearance, "#888888", "none",
               "stroke-dasharray=\"4 3\"");
    }
  }
  for (const auto& p : paths) {
    c.polyline(p.waypoints, p.method == planner::PlanMethod::kRrt ? "#2ca02c" : kReferenceColor,
               1.0);
    if (p.smoothed) c.polyline(p.smoothed->sample(200), kActualColor, 1.5);
  }
}

void write_plan_svg(const std::string& path, const planner::World& world,
                    const std::vector<planner::PlannedPath>& paths) {
  auto out = open_out(path);
  write_plan_svg(out, world, paths);
}

}  // namespace nocontact

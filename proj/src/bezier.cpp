#include "nocontact/bezier.hpp"

#include <algorithm>
#include <cmath>

#include "nocontact/error.hpp"

namespace nocontact::planner {
namespace {

Vec2 de_casteljau(std::vector<Vec2> pts, double t) {
  if (pts.empty()) return Vec2::Zero();
  for (std::size_t n = pts.size(); n > 1; --n) {
    for (std::size_t i = 0; i + 1 < n; ++i) pts[i] = (1.0 - t) * pts[i] + t * pts[i + 1];
  }
  return pts.front();
}

std::vector<Vec2> elevate(std::vector<Vec2> ctrl, int degree) {
  while (static_cast<int>(ctrl.size()) - 1 < degree) {
    const int n = static_cast<int>(ctrl.size()) - 1;
    std::vector<Vec2> up(ctrl.size() + 1);
    up.front() = ctrl.front();
    up.back() = ctrl.back();
    for (int i = 1; i <= n; ++i) {
      const double a = static_cast<double>(i) / (n + 1);
      up[i] = a * ctrl[i - 1] + (1.0 - a) * ctrl[i];
    }
    ctrl = std::move(up);
  }
  return ctrl;
}

double polygon_length(const std::vector<Vec2>& pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += (pts[i] - pts[i - 1]).norm();
  return len;
}

std::vector<Vec2> dedupe(const std::vector<Vec2>& in) {
  std::vector<Vec2> out;
  for (const Vec2& p : in) {
    if (out.empty() || (p - out.back()).norm() > 1e-12) out.push_back(p);
  }
  return out;
}

// Unit tangent at each waypoint: segment direction at the ends, averaged
// adjacent directions inside.
std::vector<Vec2> tangents(const std::vector<Vec2>& p) {
  const std::size_t n = p.size();
  std::vector<Vec2> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 in = i > 0 ? Vec2((p[i] - p[i - 1]).normalized()) : Vec2::Zero();
    const Vec2 out = i + 1 < n ? Vec2((p[i + 1] - p[i]).normalized()) : Vec2::Zero();
    const Vec2 sum = in + out;
    t[i] = sum.norm() > 1e-9 ? Vec2(sum.normalized()) : out.norm() > 0 ? out : in;
  }
  return t;
}

// First colliding sample of a segment, as its parameter; negative when free.
double first_collision(const BezierSegment& seg, const PointFree& is_free, double spacing) {
  const int n = std::max(2, static_cast<int>(std::ceil(polygon_length(seg.control) / spacing)) + 1);
  for (int k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / (n - 1);
    if (!is_free(seg.eval(t))) return t;
  }
  return -1.0;
}

BezierCurve piecewise(const std::vector<Vec2>& p, const SmoothOptions& opt,
                      const PointFree& is_free) {
  if (opt.degree < 3) {
    throw DomainError("bezier_smooth: piecewise mode needs degree >= 3 for C1 joins");
  }
  const std::size_t n = p.size();
  const std::vector<Vec2> tan = tangents(p);
  std::vector<double> base(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double in = i > 0 ? (p[i] - p[i - 1]).norm() : INFINITY;
    const double out = i + 1 < n ? (p[i + 1] - p[i]).norm() : INFINITY;
    base[i] = opt.handle_scale * std::min(in, out);
  }
  std::vector<double> scale(n, 1.0);

  auto build = [&] {
    BezierCurve c;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h0 = base[i] * scale[i];
      const double h1 = base[i + 1] * scale[i + 1];
      c.segments.push_back(
          {elevate({p[i], p[i] + h0 * tan[i], p[i + 1] - h1 * tan[i + 1], p[i + 1]},
                   opt.degree)});
    }
    return c;
  };

  if (opt.tune_handles) {
    // Coordinate descent on each knot's handle length against the max
    // curvature of the two pieces it shapes.
    constexpr double kGains[] = {0.5, 0.625, 0.75, 0.875, 1.0, 1.125, 1.25, 1.375, 1.5};
    auto local_curvature = [&](std::size_t i) {
      BezierCurve near;
      for (std::size_t s = i > 0 ? i - 1 : 0; s <= i && s + 1 < n; ++s) {
        const double h0 = base[s] * scale[s];
        const double h1 = base[s + 1] * scale[s + 1];
        near.segments.push_back({{p[s], p[s] + h0 * tan[s], p[s + 1] - h1 * tan[s + 1], p[s + 1]}});
      }
      return max_curvature(near, 200);
    };
    for (int sweep = 0; sweep < 3; ++sweep) {
      for (std::size_t i = 1; i + 1 < n; ++i) {
        double best_gain = scale[i];
        double best = local_curvature(i);
        for (double g : kGains) {
          scale[i] = g;
          const double k = local_curvature(i);
          if (k < best) {
            best = k;
            best_gain = g;
          }
        }
        scale[i] = best_gain;
      }
    }
  }

  BezierCurve curve = build();
  if (!is_free) return curve;
  for (int round = 0; round <= opt.max_repairs; ++round) {
    bool clean = true;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (first_collision(curve.segments[i], is_free, opt.check_spacing) < 0.0) continue;
      clean = false;
      const double f = round < opt.max_repairs ? 0.5 : 0.0;
      scale[i] *= f;
      scale[i + 1] *= f;
    }
    if (clean) break;
    curve = build();
  }
  return curve;
}

struct Piece {
  std::size_t a;
  std::size_t b;
};

BezierCurve global(const std::vector<Vec2>& p, const SmoothOptions& opt,
                   const PointFree& is_free) {
  const std::size_t n = p.size();
  const std::vector<Vec2> tan = tangents(p);
  std::vector<Piece> pieces{{0, n - 1}};
  std::vector<double> scale(n, 1.0);  // handle scale per split waypoint

  auto build = [&] {
    // Interior split points get handles H- and H+ with q_L (P - H-) = q_R (H+ - P).
    const std::size_t m = pieces.size();
    std::vector<int> deg(m);
    for (std::size_t k = 0; k < m; ++k) {
      deg[k] = static_cast<int>(pieces[k].b - pieces[k].a) + (k > 0) + (k + 1 < m);
    }
    std::vector<Vec2> join(m, Vec2::Zero());  // D at the right end of piece k
    for (std::size_t k = 0; k + 1 < m; ++k) {
      const std::size_t w = pieces[k].b;
      const double left = deg[k] * (p[w] - p[w - 1]).norm();
      const double right = deg[k + 1] * (p[w + 1] - p[w]).norm();
      join[k] = opt.handle_scale * scale[w] * std::min(left, right) * tan[w];
    }
    BezierCurve c;
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<Vec2> ctrl{p[pieces[k].a]};
      if (k > 0) ctrl.push_back(p[pieces[k].a] + join[k - 1] / deg[k]);
      for (std::size_t i = pieces[k].a + 1; i < pieces[k].b; ++i) ctrl.push_back(p[i]);
      if (k + 1 < m) ctrl.push_back(p[pieces[k].b] - join[k] / deg[k]);
      ctrl.push_back(p[pieces[k].b]);
      c.segments.push_back({elevate(std::move(ctrl), 1)});
    }
    return c;
  };

  BezierCurve curve = build();
  if (!is_free) return curve;
  const int limit = opt.max_repairs * static_cast<int>(n);
  for (int round = 0; round < limit; ++round) {
    bool clean = true;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const double t = first_collision(curve.segments[k], is_free, opt.check_spacing);
      if (t < 0.0) continue;
      clean = false;
      const Piece piece = pieces[k];
      if (piece.b - piece.a >= 2) {
        auto at = static_cast<std::size_t>(std::lround(t * static_cast<double>(piece.b - piece.a)));
        const std::size_t w = std::clamp(piece.a + at, piece.a + 1, piece.b - 1);
        pieces[k] = {piece.a, w};
        pieces.insert(pieces.begin() + static_cast<std::ptrdiff_t>(k) + 1, Piece{w, piece.b});
      } else {
        const bool last = round + 1 >= limit;
        for (std::size_t w : {piece.a, piece.b}) scale[w] = last ? 0.0 : 0.5 * scale[w];
      }
      break;
    }
    if (clean) break;
    curve = build();
  }
  return curve;
}

}  // namespace

double bernstein(int q, int i, double t) {
  if (i < 0 || i > q) return 0.0;
  double c = 1.0;
  for (int k = 1; k <= i; ++k) c = c * (q - i + k) / k;
  return c * std::pow(t, i) * std::pow(1.0 - t, q - i);
}

std::vector<Vec2> hodograph(const std::vector<Vec2>& control) {
  std::vector<Vec2> d;
  const double q = static_cast<double>(control.size()) - 1.0;
  for (std::size_t i = 0; i + 1 < control.size(); ++i) {
    d.push_back(q * (control[i + 1] - control[i]));
  }
  return d;
}

Vec2 BezierSegment::eval(double t) const { return de_casteljau(control, t); }

Vec2 BezierSegment::derivative(double t) const { return de_casteljau(hodograph(control), t); }

Vec2 BezierSegment::second_derivative(double t) const {
  return de_casteljau(hodograph(hodograph(control)), t);
}

double BezierSegment::curvature(double t) const {
  const Vec2 d1 = derivative(t);
  const double speed = d1.norm();
  if (speed == 0.0) return 0.0;
  return std::abs(cross(d1, second_derivative(t))) / (speed * speed * speed);
}

std::vector<Vec2> BezierCurve::sample(int per_segment) const {
  std::vector<Vec2> out;
  const int n = std::max(per_segment, 2);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    for (int k = s == 0 ? 0 : 1; k < n; ++k) {
      out.push_back(segments[s].eval(static_cast<double>(k) / (n - 1)));
    }
  }
  return out;
}

BezierCurve bezier_smooth(const std::vector<Vec2>& waypoints, const SmoothOptions& options,
                          const PointFree& is_free) {
  if (waypoints.size() < 2) throw DomainError("bezier_smooth: need at least 2 waypoints");
  if (options.degree < 2) throw DomainError("bezier_smooth: degree must be >= 2");
  const std::vector<Vec2> p = dedupe(waypoints);
  if (p.size() < 2) throw DomainError("bezier_smooth: waypoints coincide");
  if (p.size() == 2) {
    const int q = options.mode == BezierMode::kPiecewise ? options.degree : 1;
    return BezierCurve{{BezierSegment{elevate({p[0], p[1]}, q)}}};
  }
  return options.mode == BezierMode::kPiecewise ? piecewise(p, options, is_free)
                                                : global(p, options, is_free);
}

bool curve_is_free(const BezierCurve& curve, const PointFree& is_free, double spacing) {
  for (const auto& seg : curve.segments) {
    if (first_collision(seg, is_free, spacing) >= 0.0) return false;
  }
  return true;
}

double triple_curvature(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double ab = (b - a).norm();
  const double bc = (c - b).norm();
  const double ca = (a - c).norm();
  const double area2 = std::abs(cross(b - a, c - b));
  if (ab == 0.0 || bc == 0.0 || ca == 0.0 || area2 <= 1e-12 * ab * bc) return 0.0;
  return 2.0 * area2 / (ab * bc * ca);
}

double max_curvature(const std::vector<Vec2>& polyline) {
  if (polyline.size() < 3) throw DomainError("max_curvature: need at least 3 points");
  double best = 0.0;
  for (std::size_t i = 1; i + 1 < polyline.size(); ++i) {
    best = std::max(best, triple_curvature(polyline[i - 1], polyline[i], polyline[i + 1]));
  }
  return best;
}

double max_curvature(const BezierCurve& curve, int per_segment) {
  if (curve.segments.empty() || per_segment < 3) {
    throw DomainError("max_curvature: need at least 3 evaluation points");
  }
  double best = 0.0;
  for (const auto& seg : curve.segments) {
    if (seg.degree() < 2) continue;
    const std::vector<Vec2> d1 = hodograph(seg.control);
    const std::vector<Vec2> d2 = hodograph(d1);
    for (int k = 0; k < per_segment; ++k) {
      const double t = static_cast<double>(k) / (per_segment - 1);
      const Vec2 v = de_casteljau(d1, t);
      const double speed = v.norm();
      if (speed == 0.0) continue;
      best = std::max(best, std::abs(cross(v, de_casteljau(d2, t))) / (speed * speed * speed));
    }
  }
  return best;
}

}  // namespace nocontact::planner

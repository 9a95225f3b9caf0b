#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace trajkit {

/// 2D vector / point in abstract scene units.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  bool operator==(const Vec2&) const = default;

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  /// Scalar 2D cross product (z component of the 3D cross).
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm_inf() const { return std::max(std::fabs(x), std::fabs(y)); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

using Point2 = Vec2;

/// Axis-aligned rectangle. Empty until the first expand().
struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  static Rect around(Point2 p) { return {p.x, p.y, p.x, p.y}; }

  void expand(Point2 p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  double area() const { return width() * height(); }
  bool contains(Point2 p, double eps = 0.0) const {
    return p.x >= min_x - eps && p.x <= max_x + eps && p.y >= min_y - eps &&
           p.y <= max_y + eps;
  }
  Point2 clamp(Point2 p) const {
    return {std::min(std::max(p.x, min_x), max_x),
            std::min(std::max(p.y, min_y), max_y)};
  }
};

/// Ordered 2D positions sampled at uniform frame spacing dt.
///
/// The observed/predicted split (obs_len + pred_len) only matters for
/// evaluation; analysis and generation treat the full point list.
struct Trajectory {
  std::vector<Point2> points;
  double dt = 1.0;
  int obs_len = 8;
  int pred_len = 12;

  std::size_t size() const { return points.size(); }
  bool eval_shape() const {
    return static_cast<int>(points.size()) == obs_len + pred_len;
  }
};

/// A group of agent trajectories sharing a frame clock.
struct Scene {
  struct Agent {
    int id = 0;
    Trajectory traj;
  };

  int id = 0;
  long frame0 = 0;
  Rect bounds;
  std::vector<Agent> agents;
};

struct Dataset {
  std::string label;
  std::vector<Scene> scenes;

  std::size_t trajectory_count() const {
    std::size_t n = 0;
    for (const auto& s : scenes) n += s.agents.size();
    return n;
  }
  bool empty() const { return trajectory_count() == 0; }

  /// Flat view over every trajectory, scene order then agent order.
  std::vector<const Trajectory*> all_trajectories() const {
    std::vector<const Trajectory*> out;
    out.reserve(trajectory_count());
    for (const auto& s : scenes)
      for (const auto& a : s.agents) out.push_back(&a.traj);
    return out;
  }

  /// Wraps a loose list of trajectories as single-agent scenes.
  static Dataset from_trajectories(std::vector<Trajectory> trajs,
                                   std::string label = "");
};

/// Smallest axis-aligned rectangle containing every point.
Rect tight_bbox(const std::vector<Point2>& points);
inline Rect tight_bbox(const Trajectory& t) { return tight_bbox(t.points); }

/// Total polyline length.
double path_length(const std::vector<Point2>& points);

}  // namespace trajkit

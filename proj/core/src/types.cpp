#include "trajkit/types.hpp"

namespace trajkit {

Rect tight_bbox(const std::vector<Point2>& points) {
  if (points.empty()) throw std::invalid_argument("tight_bbox: no points");
  Rect r = Rect::around(points.front());
  for (const auto& p : points) r.expand(p);
  return r;
}

double path_length(const std::vector<Point2>& points) {
  double len = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i)
    len += (points[i] - points[i - 1]).norm();
  return len;
}

Dataset Dataset::from_trajectories(std::vector<Trajectory> trajs,
                                   std::string label) {
  Dataset d;
  d.label = std::move(label);
  d.scenes.reserve(trajs.size());
  int id = 0;
  for (auto& t : trajs) {
    Scene s;
    s.id = id++;
    s.bounds = tight_bbox(t);
    s.agents.push_back({0, std::move(t)});
    d.scenes.push_back(std::move(s));
  }
  return d;
}

}  // namespace trajkit

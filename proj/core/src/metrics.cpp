#include "trajkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "trajkit/io.hpp"

namespace trajkit {

TurnScore turn_score(Vec2 a, Vec2 b) {
  TurnScore ts;
  const double na = a.norm();
  const double nb = b.norm();
  ts.cross_mag = std::fabs(a.cross(b));
  if (na == 0.0 || nb == 0.0) return ts;  // repeated point, no turn

  const double s = std::min(ts.cross_mag / (na * nb), 1.0);
  ts.theta = std::fabs(std::asin(s));
  if (a.dot(b) < 0.0) ts.theta += M_PI / 2.0;  // obtuse turn
  ts.score = std::ceil(180.0 * ts.theta / (10.0 * M_PI)) * ts.cross_mag;
  return ts;
}

AbscoreReport abscore(const Trajectory& t) {
  if (t.points.size() < 3)
    throw std::invalid_argument("abscore: need at least 3 points");

  AbscoreReport rep;
  rep.per_turn.reserve(t.points.size() - 2);
  for (std::size_t i = 0; i + 2 < t.points.size(); ++i) {
    const Vec2 a = t.points[i + 1] - t.points[i];
    const Vec2 b = t.points[i + 2] - t.points[i + 1];
    rep.per_turn.push_back(turn_score(a, b));
    rep.raw += rep.per_turn.back().score;
  }

  const double area = tight_bbox(t).area();
  if (area > kAbscoreAreaEpsilon) {
    rep.scaling_mode = AbscoreScaling::area;
    rep.scaled = rep.raw / area;
  } else {
    rep.scaling_mode = AbscoreScaling::length;
    const double len = path_length(t.points);
    rep.scaled = len > 0.0 ? rep.raw / len : 0.0;
  }
  return rep;
}

double ade(const std::vector<Point2>& pred, const std::vector<Point2>& gt,
           double std_divisor) {
  if (pred.size() != gt.size() || pred.empty())
    throw std::invalid_argument("ade: length mismatch");
  if (std_divisor <= 0.0)
    throw std::invalid_argument("ade: std divisor must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    sum += (pred[i] - gt[i]).norm();
  return sum / static_cast<double>(pred.size()) / std_divisor;
}

double fde(const std::vector<Point2>& pred, const std::vector<Point2>& gt) {
  if (pred.size() != gt.size() || pred.empty())
    throw std::invalid_argument("fde: length mismatch");
  return (pred.back() - gt.back()).norm();
}

EvalReport evaluate(const std::vector<std::vector<std::vector<Point2>>>& samples,
                    const std::vector<std::vector<Point2>>& gt,
                    const EvalConfig& cfg) {
  if (gt.empty()) throw std::invalid_argument("evaluate: empty dataset");
  if (samples.size() != gt.size())
    throw std::invalid_argument("evaluate: samples/gt count mismatch");
  if (cfg.k < 1) throw std::invalid_argument("evaluate: k must be >= 1");
  if (cfg.standardization <= 0.0)
    throw std::invalid_argument("evaluate: standardization must be positive");

  EvalReport rep;
  rep.config = cfg;
  rep.per_trajectory.reserve(gt.size());

  double ade_sum = 0.0;
  double fde_sum = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const auto& cands = samples[i];
    if (static_cast<int>(cands.size()) != cfg.k)
      throw std::invalid_argument("evaluate: trajectory " + std::to_string(i) +
                                  " has " + std::to_string(cands.size()) +
                                  " samples, expected " +
                                  std::to_string(cfg.k));
    double best_fde = std::numeric_limits<double>::infinity();
    double best_ade = std::numeric_limits<double>::infinity();
    double coupled_ade = 0.0;
    for (const auto& cand : cands) {
      const double f = fde(cand, gt[i]);
      const double a = ade(cand, gt[i]);
      if (f < best_fde) {
        best_fde = f;
        coupled_ade = a;
      }
      best_ade = std::min(best_ade, a);
    }
    const double traj_ade = cfg.decoupled ? best_ade : coupled_ade;
    const double traj_fde = best_fde;
    ade_sum += traj_ade;
    fde_sum += traj_fde;
    rep.per_trajectory.emplace_back(traj_ade, traj_fde);
  }

  const double n = static_cast<double>(gt.size());
  rep.ade = ade_sum / n;
  rep.fde = fde_sum / n;
  if (cfg.legacy_scale_bug) {
    rep.ade /= cfg.standardization;
    for (auto& [a, f] : rep.per_trajectory) a /= cfg.standardization;
  }
  return rep;
}

std::string to_json(const AbscoreReport& r) {
  std::ostringstream os;
  os << "{\"raw\":" << format_double(r.raw)
     << ",\"scaled\":" << format_double(r.scaled) << ",\"scaling_mode\":\""
     << (r.scaling_mode == AbscoreScaling::area ? "area" : "length")
     << "\",\"per_turn\":[";
  for (std::size_t i = 0; i < r.per_turn.size(); ++i) {
    if (i) os << ',';
    os << "{\"theta\":" << format_double(r.per_turn[i].theta)
       << ",\"cross_mag\":" << format_double(r.per_turn[i].cross_mag)
       << ",\"score\":" << format_double(r.per_turn[i].score) << '}';
  }
  os << "]}";
  return os.str();
}

std::string to_json(const EvalReport& r) {
  std::ostringstream os;
  os << "{\"ade\":" << format_double(r.ade)
     << ",\"fde\":" << format_double(r.fde) << ",\"config\":{\"k\":"
     << r.config.k
     << ",\"standardization\":" << format_double(r.config.standardization)
     << ",\"legacy_scale_bug\":" << (r.config.legacy_scale_bug ? "true" : "false")
     << ",\"decoupled\":" << (r.config.decoupled ? "true" : "false")
     << "},\"per_trajectory\":[";
  for (std::size_t i = 0; i < r.per_trajectory.size(); ++i) {
    if (i) os << ',';
    os << '[' << format_double(r.per_trajectory[i].first) << ','
       << format_double(r.per_trajectory[i].second) << ']';
  }
  os << "]}";
  return os.str();
}

}  // namespace trajkit

#include "trajkit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "trajkit/io.hpp"
#include "trajkit/metrics.hpp"

namespace trajkit {

std::string to_string(TrajClass c) {
  switch (c) {
    case TrajClass::T1: return "T1";
    case TrajClass::T2: return "T2";
    case TrajClass::T2F: return "T2F";
    case TrajClass::T3: return "T3";
    case TrajClass::T3F: return "T3F";
    case TrajClass::T4: return "T4";
    case TrajClass::T5: return "T5";
    case TrajClass::T6: return "T6";
    case TrajClass::T7: return "T7";
  }
  return "?";
}

TrajClass traj_class_from_string(const std::string& s) {
  static const std::map<std::string, TrajClass> lut = {
      {"T1", TrajClass::T1},   {"T2", TrajClass::T2},
      {"T2F", TrajClass::T2F}, {"T3", TrajClass::T3},
      {"T3F", TrajClass::T3F}, {"T4", TrajClass::T4},
      {"T5", TrajClass::T5},   {"T6", TrajClass::T6},
      {"T7", TrajClass::T7}};
  auto it = lut.find(s);
  if (it == lut.end())
    throw std::invalid_argument("unknown trajectory class '" + s + "'");
  return it->second;
}

int unique_points(const Trajectory& t, double tol) {
  if (t.points.empty())
    throw std::invalid_argument("unique_points: empty trajectory");
  std::vector<Point2> reps;
  reps.reserve(t.points.size());
  for (const auto& p : t.points) {
    bool fresh = true;
    for (const auto& r : reps) {
      if ((p - r).norm_inf() <= tol) {
        fresh = false;
        break;
      }
    }
    if (fresh) reps.push_back(p);
  }
  return static_cast<int>(reps.size());
}

namespace {

struct StepShape {
  double mean_len = 0.0;       // mean Euclidean step length
  double circ_var = 1.0;       // 1 - mean resultant length of step directions
  std::size_t moving_steps = 0;
};

StepShape step_shape(const std::vector<Point2>& pts) {
  StepShape s;
  double len_sum = 0.0;
  Vec2 dir_sum{0.0, 0.0};
  const std::size_t nsteps = pts.size() - 1;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Vec2 d = pts[i + 1] - pts[i];
    const double n = d.norm();
    len_sum += n;
    if (n > 0.0) {
      dir_sum += d * (1.0 / n);
      ++s.moving_steps;
    }
  }
  s.mean_len = len_sum / static_cast<double>(nsteps);
  if (s.moving_steps > 0)
    s.circ_var = 1.0 - dir_sum.norm() / static_cast<double>(s.moving_steps);
  return s;
}

bool fits_box(const Rect& r, double side) {
  return r.width() <= side && r.height() <= side;
}

bool is_backtracker(const std::vector<Point2>& pts,
                    const ClassifyConfig& cfg) {
  const int n = static_cast<int>(pts.size());
  for (int k = cfg.backtrack_min_forward; k < n - 1; ++k) {
    const int span = std::min(k, n - 1 - k);
    if (span < cfg.backtrack_min_span) continue;
    bool match = true;
    for (int j = 1; j <= span; ++j) {
      if ((pts[k + j] - pts[k - j]).norm_inf() > cfg.backtrack_tol) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

/// Remove the uniform translation (p_last - p_first)/steps from each step.
std::vector<Point2> dedrift(const std::vector<Point2>& pts) {
  const double steps = static_cast<double>(pts.size() - 1);
  const Vec2 m = (pts.back() - pts.front()) * (1.0 / steps);
  std::vector<Point2> out;
  out.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    out.push_back(pts[i] - m * static_cast<double>(i));
  return out;
}

}  // namespace

TrajClass classify(const Trajectory& t, const ClassifyConfig& cfg) {
  if (!t.eval_shape())
    throw std::invalid_argument(
        "classify: trajectory must have obs_len+pred_len points");
  const auto& pts = t.points;

  const int uniq = unique_points(t, cfg.unique_tol);
  if (uniq == 1) return TrajClass::T1;

  if (is_backtracker(pts, cfg)) return TrajClass::T6;

  if ((pts.front() - pts.back()).norm_inf() <= cfg.small_box)
    return TrajClass::T4;

  const StepShape shape = step_shape(pts);
  if (shape.mean_len > cfg.drift_min_step &&
      shape.circ_var < cfg.drift_max_circvar) {
    const Rect dedrifted = tight_bbox(dedrift(pts));
    if (fits_box(dedrifted, cfg.small_box)) return TrajClass::T2F;
    if (fits_box(dedrifted, cfg.large_box)) return TrajClass::T3F;
  }

  if (shape.circ_var > cfg.haphazard_min_circvar &&
      shape.mean_len > cfg.haphazard_min_step)
    return TrajClass::T5;

  const Rect box = tight_bbox(pts);
  if (uniq >= 3 && uniq <= 8 && fits_box(box, cfg.small_box))
    return TrajClass::T2;
  if (uniq >= 3 && uniq <= 9 && fits_box(box, cfg.large_box))
    return TrajClass::T3;

  // Near-linear by scaled abscore, and the residual bucket.
  return TrajClass::T7;
}

DatasetProfile profile(const Dataset& d, const ClassifyConfig& cfg) {
  if (d.empty()) throw std::invalid_argument("profile: empty dataset");

  DatasetProfile p;
  double sum = 0.0;
  double sum_sq = 0.0;
  p.abscore_stats.min = std::numeric_limits<double>::infinity();
  p.abscore_stats.max = -std::numeric_limits<double>::infinity();
  for (const Trajectory* t : d.all_trajectories()) {
    ++p.count;
    p.unique_counts[unique_points(*t, cfg.unique_tol)]++;
    p.class_counts[classify(*t, cfg)]++;
    const double raw = abscore(*t).raw;
    sum += raw;
    sum_sq += raw * raw;
    p.abscore_stats.min = std::min(p.abscore_stats.min, raw);
    p.abscore_stats.max = std::max(p.abscore_stats.max, raw);
  }
  const double n = static_cast<double>(p.count);
  p.abscore_stats.mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - p.abscore_stats.mean * p.abscore_stats.mean);
  p.abscore_stats.std = std::sqrt(var);
  return p;
}

std::string to_json(const DatasetProfile& p) {
  std::ostringstream os;
  const double n = static_cast<double>(p.count);
  os << "{\"count\":" << p.count << ",\"unique_counts\":{";
  bool first = true;
  for (const auto& [u, c] : p.unique_counts) {
    if (!first) os << ',';
    first = false;
    os << '"' << u << "\":" << c;
  }
  os << "},\"unique_props\":{";
  first = true;
  for (const auto& [u, c] : p.unique_counts) {
    if (!first) os << ',';
    first = false;
    os << '"' << u << "\":" << format_double(static_cast<double>(c) / n);
  }
  os << "},\"class_counts\":{";
  first = true;
  for (const auto& [cls, c] : p.class_counts) {
    if (!first) os << ',';
    first = false;
    os << '"' << to_string(cls) << "\":" << c;
  }
  os << "},\"class_props\":{";
  first = true;
  for (const auto& [cls, c] : p.class_counts) {
    if (!first) os << ',';
    first = false;
    os << '"' << to_string(cls) << "\":" << format_double(static_cast<double>(c) / n);
  }
  os << "},\"abscore\":{\"min\":" << format_double(p.abscore_stats.min)
     << ",\"max\":" << format_double(p.abscore_stats.max)
     << ",\"mean\":" << format_double(p.abscore_stats.mean)
     << ",\"std\":" << format_double(p.abscore_stats.std) << "}}";
  return os.str();
}

void write_analysis_csv(const Dataset& d, const std::string& path,
                        const ClassifyConfig& cfg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "scene,agent,unique_points,class,abscore_raw,abscore_scaled\n";
  for (const auto& s : d.scenes) {
    for (const auto& a : s.agents) {
      const auto rep = abscore(a.traj);
      out << s.id << ',' << a.id << ',' << unique_points(a.traj, cfg.unique_tol)
          << ',' << to_string(classify(a.traj, cfg)) << ','
          << format_double(rep.raw) << ',' << format_double(rep.scaled)
          << '\n';
    }
  }
}

}  // namespace trajkit

#pragma once

#include <string>
#include <vector>

#include "trajkit/types.hpp"

namespace trajkit {

/// One turn of a trajectory at an interior point.
///
/// theta is the absolute turn angle in [0, pi]; cross_mag the magnitude of
/// the 2D cross product of the incoming and outgoing step vectors; score
/// the ceiling-quantized angle factor times cross_mag.
struct TurnScore {
  double theta = 0.0;
  double cross_mag = 0.0;
  double score = 0.0;
};

enum class AbscoreScaling { area, length };

/// Abruptness score of a whole trajectory: raw sum over turns plus the
/// areally scaled variant used to compare trajectories of different extent.
struct AbscoreReport {
  double raw = 0.0;
  double scaled = 0.0;
  AbscoreScaling scaling_mode = AbscoreScaling::area;
  std::vector<TurnScore> per_turn;
};

/// Scores a single turn given incoming step a and outgoing step b.
///
/// theta = |asin(|a x b| / (|a||b|))|, bumped by pi/2 when the turn is
/// obtuse (a.b < 0); score = ceil(180 theta / (10 pi)) * |a x b|, i.e. the
/// turn angle in degrees quantized to 10-degree steps. Zero vectors score 0.
TurnScore turn_score(Vec2 a, Vec2 b);

/// Sums turn_score over consecutive point triples. Scaled by bounding-box
/// area when the box is non-degenerate (area > 1e-9), by path length
/// otherwise, 0 if the trajectory never moves. Requires >= 3 points.
AbscoreReport abscore(const Trajectory& t);

/// Degenerate-bbox threshold used by abscore's areal scaling.
inline constexpr double kAbscoreAreaEpsilon = 1e-9;

/// Mean Euclidean displacement over aligned future positions, divided by
/// std_divisor (1.0 gives the plain metric). Lengths must match.
double ade(const std::vector<Point2>& pred, const std::vector<Point2>& gt,
           double std_divisor = 1.0);

/// Euclidean distance between the final positions. Lengths must match.
double fde(const std::vector<Point2>& pred, const std::vector<Point2>& gt);

struct EvalConfig {
  int k = 20;
  double standardization = 1.0;
  bool legacy_scale_bug = false;
  bool decoupled = false;
};

struct EvalReport {
  double ade = 0.0;
  double fde = 0.0;
  std::vector<std::pair<double, double>> per_trajectory;  // (ade, fde)
  EvalConfig config;
};

/// Best-of-K evaluation.
///
/// samples[i] holds exactly cfg.k candidate futures for trajectory i and
/// gt[i] the true future. Coupled mode picks the candidate with the lowest
/// FDE (ties to the lowest index) and reports its ADE and FDE; decoupled
/// mode reports the per-metric minima independently. With legacy_scale_bug
/// the reported ADE (only) is divided by cfg.standardization, reproducing
/// the upstream repository bug.
EvalReport evaluate(const std::vector<std::vector<std::vector<Point2>>>& samples,
                    const std::vector<std::vector<Point2>>& gt,
                    const EvalConfig& cfg);

std::string to_json(const AbscoreReport& r);
std::string to_json(const EvalReport& r);

}  // namespace trajkit

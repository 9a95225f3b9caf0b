#pragma once

#include <map>
#include <string>
#include <vector>

#include "trajkit/analysis.hpp"
#include "trajkit/metrics.hpp"
#include "trajkit/rng.hpp"
#include "trajkit/types.hpp"

namespace trajkit {

/// Kinematic stand-in predictors exercising the evaluation pipeline.
struct Predictor {
  enum class Kind { constant_velocity, linear_fit, stationary };
  Kind kind = Kind::constant_velocity;
  int k_samples = 1;
  double jitter_sigma = 0.0;  // endpoint jitter for samples beyond the first

  static Kind kind_from_string(const std::string& s);
};

/// Produces k_samples candidate futures from an observed prefix.
/// constant_velocity repeats the last observed step; linear_fit regresses
/// each coordinate on the time index and extrapolates; stationary repeats
/// the last point. Samples beyond the first add Gaussian endpoint jitter
/// interpolated back along the path.
std::vector<std::vector<Point2>> predict(const Predictor& p,
                                         const std::vector<Point2>& obs,
                                         int pred_len, SeededRng& rng);

struct ClassStats {
  double ade = 0.0;
  double fde = 0.0;
  std::size_t count = 0;
};

struct EvalRunReport {
  EvalReport eval;
  std::map<TrajClass, ClassStats> per_class;
};

/// Splits every trajectory into observed prefix and ground-truth future,
/// predicts, and scores via evaluate(); per-trajectory rngs are derived
/// from the given rng so the run is order-independent and seeded.
EvalRunReport run_eval(const Dataset& d, const Predictor& p,
                       const EvalConfig& cfg, SeededRng& rng,
                       const ClassifyConfig& classify_cfg = {});

std::string to_json(const EvalRunReport& r);

}  // namespace trajkit

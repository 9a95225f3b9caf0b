#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "trajkit/types.hpp"

namespace trajkit {

/// Qualitative trajectory taxonomy.
///
/// T1 stationary; T2/T3 wanderers confined to a 5x5 / 100x100 box; T2F/T3F
/// the same patterns riding a uniform camera-drift translation; T4 paths
/// that end near their start; T5 haphazard large-step drift; T6
/// backtrackers that retrace their own steps; T7 near-linear plus anything
/// no other rule claims.
enum class TrajClass { T1, T2, T2F, T3, T3F, T4, T5, T6, T7 };

std::string to_string(TrajClass c);
TrajClass traj_class_from_string(const std::string& s);

/// Every threshold the rule-based classifier uses, in one place so tests
/// can pin them.
struct ClassifyConfig {
  double small_box = 5.0;        // T2 / T2F / T4 box side
  double large_box = 100.0;      // T3 / T3F box side
  double unique_tol = 0.0;       // point-collapse tolerance
  double backtrack_tol = 1e-6;   // T6 retrace match tolerance
  int backtrack_min_forward = 6; // T6 minimum forward steps
  int backtrack_min_span = 3;    // T6 minimum retraced steps
  double drift_min_step = 5.0;   // F-variant mean step threshold
  double drift_max_circvar = 0.05;  // F-variant direction spread cap
  double haphazard_min_circvar = 0.5;  // T5 direction spread floor
  double haphazard_min_step = 5.0;     // T5 mean step threshold
  double linearity_threshold = 1.0;    // T7 scaled-abscore cap
};

/// Number of distinct positions; points within tol in Chebyshev distance
/// collapse onto the first representative seen (tol = 0 is exact equality).
int unique_points(const Trajectory& t, double tol = 0.0);

/// First matching rule in priority order
/// T1, T6, T4, T2F/T3F, T5, T2, T3, T7; T7 also absorbs anything left.
/// Requires the trajectory to have its full obs+pred point count.
TrajClass classify(const Trajectory& t, const ClassifyConfig& cfg = {});

struct AbscoreStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

struct DatasetProfile {
  std::size_t count = 0;
  std::map<int, std::size_t> unique_counts;
  std::map<TrajClass, std::size_t> class_counts;
  AbscoreStats abscore_stats;  // over raw abscore
};

/// Histograms plus raw-abscore statistics over every trajectory.
DatasetProfile profile(const Dataset& d, const ClassifyConfig& cfg = {});

std::string to_json(const DatasetProfile& p);

/// Per-trajectory CSV: scene,agent,unique_points,class,abscore_raw,abscore_scaled.
void write_analysis_csv(const Dataset& d, const std::string& path,
                        const ClassifyConfig& cfg = {});

}  // namespace trajkit

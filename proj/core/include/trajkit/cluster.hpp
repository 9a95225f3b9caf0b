#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "trajkit/rng.hpp"
#include "trajkit/types.hpp"

namespace trajkit {

/// Matrix norms applied to the n x 2 difference of two equal-length
/// trajectories. l1 and linf are entrywise (absolute sum / max absolute
/// entry); l2op is the largest singular value.
enum class NormKind { frobenius, l1, l2op, linf };

std::string to_string(NormKind n);
NormKind norm_from_string(const std::string& s);

double traj_distance(const Trajectory& a, const Trajectory& b, NormKind norm);

struct Clustering {
  std::vector<int> assignments;       // trajectory index -> cluster id
  std::vector<std::size_t> medoids;   // cluster id -> trajectory index
  int k = 0;
  double total_cost = 0.0;
};

/// PAM k-medoids over every trajectory in the dataset (flattened scene
/// order). Greedy farthest-point initialization from a seeded first pick,
/// then best-improving (medoid, member) swaps until none improves or
/// max_iter passes. Ties break to the lowest index; the result is
/// deterministic under the rng seed.
Clustering kmedoids(const Dataset& d, int k, NormKind norm, SeededRng& rng,
                    int max_iter = 100);

/// Groups trajectories by the ceiling-quantized size of their bounding
/// boxes; degenerate extents round up to bin (1,1).
std::map<std::pair<long, long>, std::vector<std::size_t>> bbox_cluster(
    const Dataset& d, double bin_width, double bin_height);

/// CSV rows: index,cluster,is_medoid.
void write_clustering_csv(const Clustering& c, const std::string& path);

/// JSON summary with per-cluster sizes and costs.
std::string clustering_summary_json(const Clustering& c, const Dataset& d,
                                    NormKind norm);

}  // namespace trajkit

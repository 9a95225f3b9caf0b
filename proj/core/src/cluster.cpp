#include "trajkit/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "trajkit/io.hpp"

namespace trajkit {

std::string to_string(NormKind n) {
  switch (n) {
    case NormKind::frobenius: return "fro";
    case NormKind::l1: return "l1";
    case NormKind::l2op: return "l2op";
    case NormKind::linf: return "linf";
  }
  return "?";
}

NormKind norm_from_string(const std::string& s) {
  if (s == "fro" || s == "frobenius") return NormKind::frobenius;
  if (s == "l1") return NormKind::l1;
  if (s == "l2op" || s == "l2") return NormKind::l2op;
  if (s == "linf") return NormKind::linf;
  throw std::invalid_argument("unknown norm '" + s + "'");
}

double traj_distance(const Trajectory& a, const Trajectory& b, NormKind norm) {
  if (a.points.size() != b.points.size())
    throw std::invalid_argument("traj_distance: length mismatch");
  const std::size_t n = a.points.size();
  switch (norm) {
    case NormKind::l1: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2 d = a.points[i] - b.points[i];
        s += std::fabs(d.x) + std::fabs(d.y);
      }
      return s;
    }
    case NormKind::linf: {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        m = std::max(m, (a.points[i] - b.points[i]).norm_inf());
      return m;
    }
    case NormKind::frobenius: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2 d = a.points[i] - b.points[i];
        s += d.x * d.x + d.y * d.y;
      }
      return std::sqrt(s);
    }
    case NormKind::l2op: {
      // Largest singular value via the 2x2 Gram matrix of the n x 2
      // difference (two columns, so no general SVD needed).
      double gxx = 0.0, gxy = 0.0, gyy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2 d = a.points[i] - b.points[i];
        gxx += d.x * d.x;
        gxy += d.x * d.y;
        gyy += d.y * d.y;
      }
      const double tr = gxx + gyy;
      const double det = gxx * gyy - gxy * gxy;
      const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
      const double lambda_max = 0.5 * (tr + disc);
      return std::sqrt(std::max(0.0, lambda_max));
    }
  }
  return 0.0;
}

namespace {

double assignment_cost(const std::vector<std::vector<double>>& dist,
                       const std::vector<std::size_t>& medoids,
                       std::vector<int>* assignments) {
  double total = 0.0;
  const std::size_t n = dist.size();
  if (assignments) assignments->assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (std::size_t c = 0; c < medoids.size(); ++c) {
      const double d = dist[i][medoids[c]];
      if (d < best) {
        best = d;
        best_c = static_cast<int>(c);
      }
    }
    total += best;
    if (assignments) (*assignments)[i] = best_c;
  }
  return total;
}

}  // namespace

Clustering kmedoids(const Dataset& d, int k, NormKind norm, SeededRng& rng,
                    int max_iter) {
  const auto trajs = d.all_trajectories();
  const std::size_t n = trajs.size();
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("kmedoids: k out of range");
  for (const Trajectory* t : trajs)
    if (t->points.size() != trajs.front()->points.size())
      throw std::invalid_argument("kmedoids: mixed trajectory lengths");

  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist[i][j] = dist[j][i] = traj_distance(*trajs[i], *trajs[j], norm);

  // Greedy farthest-point init from a seeded first medoid.
  std::vector<std::size_t> medoids;
  medoids.push_back(static_cast<std::size_t>(rng.below(n)));
  while (static_cast<int>(medoids.size()) < k) {
    std::size_t far_idx = 0;
    double far_dist = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t m : medoids) nearest = std::min(nearest, dist[i][m]);
      if (nearest > far_dist) {
        far_dist = nearest;
        far_idx = i;
      }
    }
    medoids.push_back(far_idx);
  }

  double cost = assignment_cost(dist, medoids, nullptr);
  for (int iter = 0; iter < max_iter; ++iter) {
    double best_cost = cost;
    std::size_t best_slot = 0, best_cand = 0;
    bool improved = false;
    for (std::size_t slot = 0; slot < medoids.size(); ++slot) {
      for (std::size_t cand = 0; cand < n; ++cand) {
        if (std::find(medoids.begin(), medoids.end(), cand) != medoids.end())
          continue;
        std::vector<std::size_t> trial = medoids;
        trial[slot] = cand;
        const double c = assignment_cost(dist, trial, nullptr);
        if (c < best_cost) {
          best_cost = c;
          best_slot = slot;
          best_cand = cand;
          improved = true;
        }
      }
    }
    if (!improved) break;
    medoids[best_slot] = best_cand;
    cost = best_cost;
  }

  Clustering out;
  out.k = k;
  out.medoids = medoids;
  out.total_cost = assignment_cost(dist, medoids, &out.assignments);
  return out;
}

std::map<std::pair<long, long>, std::vector<std::size_t>> bbox_cluster(
    const Dataset& d, double bin_width, double bin_height) {
  if (bin_width <= 0.0 || bin_height <= 0.0)
    throw std::invalid_argument("bbox_cluster: bins must be positive");
  std::map<std::pair<long, long>, std::vector<std::size_t>> bins;
  const auto trajs = d.all_trajectories();
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const Rect r = tight_bbox(*trajs[i]);
    const long bw = std::max(1L, static_cast<long>(std::ceil(r.width() / bin_width)));
    const long bh = std::max(1L, static_cast<long>(std::ceil(r.height() / bin_height)));
    bins[{bw, bh}].push_back(i);
  }
  return bins;
}

void write_clustering_csv(const Clustering& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "index,cluster,is_medoid\n";
  for (std::size_t i = 0; i < c.assignments.size(); ++i) {
    const bool medoid =
        std::find(c.medoids.begin(), c.medoids.end(), i) != c.medoids.end();
    out << i << ',' << c.assignments[i] << ',' << (medoid ? 1 : 0) << '\n';
  }
}

std::string clustering_summary_json(const Clustering& c, const Dataset& d,
                                    NormKind norm) {
  const auto trajs = d.all_trajectories();
  std::vector<std::size_t> sizes(c.medoids.size(), 0);
  std::vector<double> costs(c.medoids.size(), 0.0);
  for (std::size_t i = 0; i < c.assignments.size(); ++i) {
    const int cl = c.assignments[i];
    sizes[cl]++;
    costs[cl] += traj_distance(*trajs[i], *trajs[c.medoids[cl]], norm);
  }
  std::ostringstream os;
  os << "{\"k\":" << c.k << ",\"norm\":\"" << to_string(norm)
     << "\",\"total_cost\":" << format_double(c.total_cost)
     << ",\"clusters\":[";
  for (std::size_t cl = 0; cl < c.medoids.size(); ++cl) {
    if (cl) os << ',';
    os << "{\"medoid\":" << c.medoids[cl] << ",\"size\":" << sizes[cl]
       << ",\"cost\":" << format_double(costs[cl]) << '}';
  }
  os << "]}";
  return os.str();
}

}  // namespace trajkit

#include "trajkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace trajkit {

namespace {

constexpr double kMassTol = 1e-9;

/// Unique-point counts each class recipe can realize.
std::vector<int> allowed_uniques(TrajClass c) {
  switch (c) {
    case TrajClass::T1: return {1};
    case TrajClass::T2: return {3, 4, 5, 6, 7, 8};
    case TrajClass::T3: return {3, 4, 5, 6, 7, 8, 9};
    case TrajClass::T2F: return {20};
    case TrajClass::T3F: return {20};
    case TrajClass::T4: return {2, 20};
    case TrajClass::T5: return {20};
    case TrajClass::T6: return {7, 8, 9, 10, 11, 12, 13};
    case TrajClass::T7: return {10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
  }
  return {};
}

constexpr std::array<TrajClass, 9> kAllClasses = {
    TrajClass::T1, TrajClass::T2, TrajClass::T2F,
    TrajClass::T3, TrajClass::T3F, TrajClass::T4,
    TrajClass::T5, TrajClass::T6, TrajClass::T7};

}  // namespace

void ProfileTarget::validate() const {
  double hsum = 0.0;
  for (double v : unique_hist) {
    if (v < 0.0) throw std::invalid_argument("target: negative unique mass");
    hsum += v;
  }
  if (std::fabs(hsum - 1.0) > kMassTol)
    throw std::invalid_argument("target: unique_hist must sum to 1");
  double csum = 0.0;
  for (const auto& [cls, v] : class_mix) {
    if (v < 0.0) throw std::invalid_argument("target: negative class mass");
    csum += v;
  }
  if (std::fabs(csum - 1.0) > kMassTol)
    throw std::invalid_argument("target: class_mix must sum to 1");

  // The rule priority makes T2 unreportable: a path confined to a 5x5 box
  // necessarily ends within 5 of its start, so the end-near-start rule
  // claims it first. Any T2 mass is therefore unrealizable.
  auto t2 = class_mix.find(TrajClass::T2);
  if (t2 != class_mix.end() && t2->second > kMassTol)
    throw std::invalid_argument(
        "target: infeasible, T2 mass can never be observed (the "
        "end-near-start rule precedes it and any 5x5-confined path ends "
        "near its start)");
}

ProfileTarget default_profile_target() {
  // Reference unique-point counts of a 2829-trajectory drone-view profile.
  constexpr std::array<int, kSynthTrajLen> counts = {
      145, 62, 71, 69, 57, 41, 51, 28, 26, 24,
      22,  25, 17, 24, 22, 22, 39, 30, 76, 1978};
  const double total = 2829.0;

  ProfileTarget t;
  for (int u = 0; u < kSynthTrajLen; ++u)
    t.unique_hist[u] = static_cast<double>(counts[u]) / total;

  // Class mix compatible with those uniques: stationary at u=1, shuttles
  // at u=2, confined wanderers for u in 3..9, one backtracker slice, and
  // the 20-unique mass split over lines, drift variants, loops and
  // haphazard walks.
  const double u20 = static_cast<double>(counts[19]) / total;
  double mid = 0.0;  // u in 10..19
  for (int u = 10; u <= 19; ++u) mid += static_cast<double>(counts[u - 1]) / total;
  double t3 = 0.0;  // u in 3..9
  for (int u = 3; u <= 9; ++u) t3 += static_cast<double>(counts[u - 1]) / total;
  const double backtrack = static_cast<double>(counts[10]) / total;  // u=11 slice

  t.class_mix[TrajClass::T1] = static_cast<double>(counts[0]) / total;
  t.class_mix[TrajClass::T4] = static_cast<double>(counts[1]) / total + 0.05 * u20;
  t.class_mix[TrajClass::T3] = t3;
  t.class_mix[TrajClass::T6] = backtrack;
  t.class_mix[TrajClass::T2F] = 0.05 * u20;
  t.class_mix[TrajClass::T3F] = 0.05 * u20;
  t.class_mix[TrajClass::T5] = 0.05 * u20;
  t.class_mix[TrajClass::T7] = (mid - backtrack) + 0.80 * u20;
  return t;
}

std::vector<TargetCell> allocate_joint(const ProfileTarget& target) {
  target.validate();

  std::map<TrajClass, double> remaining = target.class_mix;
  std::vector<TargetCell> cells;
  for (int u = 1; u <= kSynthTrajLen; ++u) {
    double mass = target.unique_hist[u - 1];
    if (mass <= kMassTol) continue;

    // Candidate classes accepting u, most constrained recipe first.
    std::vector<TrajClass> cand;
    for (TrajClass c : kAllClasses) {
      const auto us = allowed_uniques(c);
      if (std::find(us.begin(), us.end(), u) != us.end()) cand.push_back(c);
    }
    std::stable_sort(cand.begin(), cand.end(), [](TrajClass a, TrajClass b) {
      return allowed_uniques(a).size() < allowed_uniques(b).size();
    });

    for (TrajClass c : cand) {
      auto it = remaining.find(c);
      if (it == remaining.end() || it->second <= kMassTol) continue;
      const double take = std::min(mass, it->second);
      cells.push_back({c, u, take});
      it->second -= take;
      mass -= take;
      if (mass <= kMassTol) break;
    }
    if (mass > kMassTol)
      throw std::invalid_argument(
          "target: infeasible, no class accepts unique count " +
          std::to_string(u) + " (unassigned mass " + std::to_string(mass) +
          ")");
  }
  for (const auto& [cls, rest] : remaining)
    if (rest > kMassTol)
      throw std::invalid_argument(
          "target: infeasible, class " + to_string(cls) +
          " has leftover mass " + std::to_string(rest));
  return cells;
}

// ---------------------------------------------------------------------------
// Class recipes. Every recipe yields exactly `unique` distinct positions in
// a 20-point trajectory and verifies its own classification, retrying with
// fresh draws when a random layout trips a neighbouring rule.

namespace {

constexpr int kRecipeRetries = 200;

Point2 random_origin(SeededRng& rng) {
  return {rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)};
}

Trajectory wrap_points(std::vector<Point2> pts) {
  Trajectory t;
  t.points = std::move(pts);
  t.obs_len = 8;
  t.pred_len = 12;
  return t;
}

/// Dwell lengths >= 1 per anchor, summing to the trajectory length.
std::vector<int> random_dwells(int anchors, SeededRng& rng) {
  std::vector<int> d(anchors, 1);
  for (int extra = kSynthTrajLen - anchors; extra > 0; --extra)
    d[static_cast<std::size_t>(rng.below(anchors))]++;
  return d;
}

std::vector<Point2> expand_dwells(const std::vector<Point2>& anchors,
                                  const std::vector<int>& dwells) {
  std::vector<Point2> pts;
  pts.reserve(kSynthTrajLen);
  for (std::size_t i = 0; i < anchors.size(); ++i)
    for (int r = 0; r < dwells[i]; ++r) pts.push_back(anchors[i]);
  return pts;
}

Trajectory make_stationary(SeededRng& rng) {
  const Point2 o = random_origin(rng);
  return wrap_points(std::vector<Point2>(kSynthTrajLen, o));
}

/// Two-point shuttle ending within the small box of its start.
Trajectory make_shuttle(SeededRng& rng, const ClassifyConfig& cfg) {
  for (int attempt = 0; attempt < kRecipeRetries; ++attempt) {
    const Point2 a = random_origin(rng);
    const Point2 b = a + Vec2{rng.uniform(1.5, 4.0) * (rng.below(2) ? 1 : -1),
                              rng.uniform(1.5, 4.0) * (rng.below(2) ? 1 : -1)};
    std::vector<Point2> pts(kSynthTrajLen);
    pts[0] = a;
    pts[kSynthTrajLen - 1] = b;
    for (int i = 1; i < kSynthTrajLen - 1; ++i)
      pts[i] = rng.below(2) ? a : b;
    Trajectory t = wrap_points(std::move(pts));
    if (unique_points(t) == 2 && classify(t, cfg) == TrajClass::T4) return t;
  }
  throw std::runtime_error("synth: shuttle recipe failed to converge");
}

/// Heading-correlated anchor walk with dwells; used for both the loosely
/// bounded wanderers (u <= 9) and the residual walks (u >= 10).
Trajectory make_confined_walk(int unique, SeededRng& rng,
                              const ClassifyConfig& cfg) {
  const TrajClass want = unique <= 9 ? TrajClass::T3 : TrajClass::T7;
  for (int attempt = 0; attempt < kRecipeRetries; ++attempt) {
    const Point2 o = random_origin(rng);
    std::vector<Point2> anchors;
    anchors.reserve(unique);
    anchors.push_back(o);
    double heading = rng.uniform(0.0, 2.0 * M_PI);
    for (int i = 1; i < unique; ++i) {
      heading += rng.uniform(-M_PI / 3.0, M_PI / 3.0);
      const double step = rng.uniform(2.2, 4.2);
      Point2 next = anchors.back() +
                    Vec2{step * std::cos(heading), step * std::sin(heading)};
      // Reflect into a 13x13 region around the origin point.
      next.x = o.x + std::fabs(std::remainder(next.x - o.x, 26.0));
      next.y = o.y + std::fabs(std::remainder(next.y - o.y, 26.0));
      if (next.x - o.x > 13.0) next.x = o.x + 26.0 - (next.x - o.x);
      if (next.y - o.y > 13.0) next.y = o.y + 26.0 - (next.y - o.y);
      anchors.push_back(next);
    }
    if ((anchors.front() - anchors.back()).norm_inf() <= cfg.small_box + 0.6)
      continue;
    double jumps = 0.0;
    for (std::size_t i = 1; i < anchors.size(); ++i)
      jumps += (anchors[i] - anchors[i - 1]).norm();
    if (jumps > 85.0) continue;

    Trajectory t =
        wrap_points(expand_dwells(anchors, random_dwells(unique, rng)));
    if (unique_points(t) == unique && classify(t, cfg) == want) return t;
  }
  throw std::runtime_error("synth: confined walk recipe failed to converge");
}

/// Tightly bounded wanderer (only reachable through explicit requests; the
/// classifier itself reports such paths as end-near-start).
Trajectory make_small_box_walk(int unique, SeededRng& rng) {
  const Point2 o = random_origin(rng);
  std::vector<Point2> anchors;
  anchors.reserve(unique);
  for (int i = 0; i < unique; ++i)
    anchors.push_back(o + Vec2{rng.uniform(0.0, 4.5), rng.uniform(0.0, 4.5)});
  return wrap_points(expand_dwells(anchors, random_dwells(unique, rng)));
}

Trajectory make_loop(SeededRng& rng, const ClassifyConfig& cfg) {
  for (int attempt = 0; attempt < kRecipeRetries; ++attempt) {
    const Point2 c = random_origin(rng);
    const double r = rng.uniform(3.0, 8.0);
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    std::vector<Point2> pts;
    pts.reserve(kSynthTrajLen);
    for (int i = 0; i < kSynthTrajLen; ++i) {
      const double a = phase + 2.0 * M_PI * i / kSynthTrajLen;
      pts.push_back(c + Vec2{r * std::cos(a), r * std::sin(a)});
    }
    Trajectory t = wrap_points(std::move(pts));
    if (unique_points(t) == kSynthTrajLen && classify(t, cfg) == TrajClass::T4)
      return t;
  }
  throw std::runtime_error("synth: loop recipe failed to converge");
}

Trajectory make_haphazard(SeededRng& rng, const ClassifyConfig& cfg) {
  for (int attempt = 0; attempt < kRecipeRetries; ++attempt) {
    std::vector<Point2> pts;
    pts.reserve(kSynthTrajLen);
    pts.push_back(random_origin(rng));
    for (int i = 1; i < kSynthTrajLen; ++i) {
      const double len = rng.uniform(6.0, 12.0);
      const double ang = rng.uniform(0.0, 2.0 * M_PI);
      pts.push_back(pts.back() + Vec2{len * std::cos(ang), len * std::sin(ang)});
    }
    Trajectory t = wrap_points(std::move(pts));
    if (unique_points(t) == kSynthTrajLen && classify(t, cfg) == TrajClass::T5)
      return t;
  }
  throw std::runtime_error("synth: haphazard recipe failed to converge");
}

Trajectory make_backtracker(int unique, SeededRng& rng,
                            const ClassifyConfig& cfg) {
  const int k = unique - 1;  // forward steps
  for (int attempt = 0; attempt < kRecipeRetries; ++attempt) {
    std::vector<Point2> fwd;
    fwd.reserve(k + 1);
    fwd.push_back(random_origin(rng));
    double heading = rng.uniform(0.0, 2.0 * M_PI);
    for (int i = 0; i < k; ++i) {
      heading += rng.uniform(-25.0, 25.0) * M_PI / 180.0;
      const double step = rng.uniform(1.5, 3.0);
      fwd.push_back(fwd.back() +
                    Vec2{step * std::cos(heading), step * std::sin(heading)});
    }
    // Triangle-wave index: out to k, back toward 0, out again if needed.
    std::vector<Point2> pts;
    pts.reserve(kSynthTrajLen);
    for (int m = 0; m < kSynthTrajLen; ++m) {
      const int phase = m % (2 * k);
      pts.push_back(fwd[static_cast<std::size_t>(k - std::abs(k - phase))]);
    }
    Trajectory t = wrap_points(std::move(pts));
    if (unique_points(t) == unique && classify(t, cfg) == TrajClass::T6)
      return t;
  }
  throw std::runtime_error("synth: backtracker recipe failed to converge");
}

Trajectory make_drifter(bool small_box, SeededRng& rng,
                        const ClassifyConfig& cfg) {
  const TrajClass want = small_box ? TrajClass::T2F : TrajClass::T3F;
  for (int attempt = 0; attempt < kRecipeRetries; ++attempt) {
    const Point2 o = random_origin(rng);
    const double drift_len = rng.uniform(6.5, 9.0);
    const double drift_ang = rng.uniform(0.0, 2.0 * M_PI);
    const Vec2 drift{drift_len * std::cos(drift_ang),
                     drift_len * std::sin(drift_ang)};
    std::vector<Point2> pts;
    pts.reserve(kSynthTrajLen);
    if (small_box) {
      for (int i = 0; i < kSynthTrajLen; ++i)
        pts.push_back(o + drift * static_cast<double>(i) +
                      Vec2{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)});
    } else {
      // Smooth sideways excursion that survives de-drifting.
      const double amp = rng.uniform(7.0, 12.0);
      const Vec2 perp{-std::sin(drift_ang), std::cos(drift_ang)};
      for (int i = 0; i < kSynthTrajLen; ++i) {
        const double swing =
            amp * std::sin(M_PI * static_cast<double>(i) / (kSynthTrajLen - 1));
        pts.push_back(o + drift * static_cast<double>(i) + perp * swing +
                      Vec2{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)});
      }
    }
    Trajectory t = wrap_points(std::move(pts));
    if (unique_points(t) == kSynthTrajLen && classify(t, cfg) == want) return t;
  }
  throw std::runtime_error("synth: drifter recipe failed to converge");
}

Trajectory make_line(SeededRng& rng, const ClassifyConfig& cfg) {
  for (int attempt = 0; attempt < kRecipeRetries; ++attempt) {
    const Point2 o = random_origin(rng);
    const double speed = rng.uniform(0.8, 3.5);
    const double ang = rng.uniform(0.0, 2.0 * M_PI);
    const Vec2 step{speed * std::cos(ang), speed * std::sin(ang)};
    std::vector<Point2> pts;
    pts.reserve(kSynthTrajLen);
    for (int i = 0; i < kSynthTrajLen; ++i)
      pts.push_back(o + step * static_cast<double>(i));
    Trajectory t = wrap_points(std::move(pts));
    if (unique_points(t) == kSynthTrajLen && classify(t, cfg) == TrajClass::T7)
      return t;
  }
  throw std::runtime_error("synth: line recipe failed to converge");
}

}  // namespace

Trajectory synth_trajectory(TrajClass cls, int unique, SeededRng& rng) {
  const auto us = allowed_uniques(cls);
  if (std::find(us.begin(), us.end(), unique) == us.end())
    throw std::invalid_argument("synth_trajectory: class " + to_string(cls) +
                                " cannot realize " + std::to_string(unique) +
                                " unique points");
  const ClassifyConfig cfg;
  switch (cls) {
    case TrajClass::T1: return make_stationary(rng);
    case TrajClass::T2: return make_small_box_walk(unique, rng);
    case TrajClass::T3: return make_confined_walk(unique, rng, cfg);
    case TrajClass::T2F: return make_drifter(true, rng, cfg);
    case TrajClass::T3F: return make_drifter(false, rng, cfg);
    case TrajClass::T4:
      return unique == 2 ? make_shuttle(rng, cfg) : make_loop(rng, cfg);
    case TrajClass::T5: return make_haphazard(rng, cfg);
    case TrajClass::T6: return make_backtracker(unique, rng, cfg);
    case TrajClass::T7:
      return unique == kSynthTrajLen ? make_line(rng, cfg)
                                     : make_confined_walk(unique, rng, cfg);
  }
  throw std::logic_error("synth_trajectory: unreachable");
}

Dataset gen_synsdd(const ProfileTarget& target, int count, SeededRng& rng) {
  if (count < 1) throw std::invalid_argument("gen_synsdd: count < 1");
  const auto cells = allocate_joint(target);

  // Largest-remainder quotas keep both histograms within 1/count per bin.
  std::vector<int> quota(cells.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const double exact = cells[i].prop * count;
    quota[i] = static_cast<int>(std::floor(exact));
    assigned += quota[i];
    remainders.push_back({exact - std::floor(exact), i});
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int i = 0; assigned < count; ++i, ++assigned)
    quota[remainders[i % remainders.size()].second]++;

  std::vector<std::pair<TrajClass, int>> jobs;
  jobs.reserve(count);
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (int r = 0; r < quota[i]; ++r)
      jobs.push_back({cells[i].cls, cells[i].unique});

  // Seeded Fisher-Yates shuffle.
  for (std::size_t i = jobs.size(); i > 1; --i)
    std::swap(jobs[i - 1], jobs[rng.below(i)]);

  std::vector<Trajectory> trajs;
  trajs.reserve(jobs.size());
  for (const auto& [cls, u] : jobs)
    trajs.push_back(synth_trajectory(cls, u, rng));
  Dataset d = Dataset::from_trajectories(std::move(trajs), "synsdd");
  return d;
}

Trajectory rigid_transform(const Trajectory& t, double angle, Point2 pivot,
                           Vec2 offset) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Trajectory out = t;
  for (auto& p : out.points) {
    const Vec2 r = p - pivot;
    p = pivot + Vec2{c * r.x - s * r.y, s * r.x + c * r.y} + offset;
  }
  return out;
}

Dataset rt_augment(const Dataset& d, int n_rot, SeededRng& rng) {
  if (n_rot < 1) throw std::invalid_argument("rt_augment: n_rot < 1");
  if (d.empty()) throw std::invalid_argument("rt_augment: empty dataset");

  Rect extent;
  bool first = true;
  for (const Trajectory* t : d.all_trajectories()) {
    for (const auto& p : t->points) {
      if (first) {
        extent = Rect::around(p);
        first = false;
      } else {
        extent.expand(p);
      }
    }
  }
  const double w = std::max(extent.width(), 1.0);
  const double h = std::max(extent.height(), 1.0);

  std::vector<Trajectory> out;
  out.reserve(d.trajectory_count() * n_rot);
  for (const Trajectory* t : d.all_trajectories()) {
    for (int r = 0; r < n_rot; ++r) {
      const double angle = rng.uniform(0.0, 2.0 * M_PI);
      const Vec2 offset{rng.uniform(-w, w), rng.uniform(-h, h)};
      out.push_back(rigid_transform(*t, angle, t->points.front(), offset));
    }
  }
  return Dataset::from_trajectories(std::move(out), d.label + "+rt");
}

Dataset mix(const Dataset& base, const Dataset& synth, double fraction,
            SeededRng& rng) {
  if (fraction <= 0.0 || fraction > 1.0)
    throw std::invalid_argument("mix: fraction must be in (0, 1]");
  const std::size_t base_n = base.trajectory_count();
  if (fraction == 1.0 && base_n > 0)
    throw std::invalid_argument(
        "mix: no finite synthetic pool reaches share 1.0 over a non-empty base");

  std::size_t need;
  if (base_n == 0) {
    need = synth.trajectory_count();
  } else {
    need = static_cast<std::size_t>(
        std::ceil(fraction / (1.0 - fraction) * static_cast<double>(base_n)));
  }
  std::vector<Trajectory> pool;
  pool.reserve(synth.trajectory_count());
  for (const Trajectory* t : synth.all_trajectories()) pool.push_back(*t);
  if (pool.size() < need)
    throw std::invalid_argument("mix: synthetic pool has " +
                                std::to_string(pool.size()) +
                                " trajectories, need " + std::to_string(need));

  // Partial Fisher-Yates: the first `need` entries are a uniform subset.
  for (std::size_t i = 0; i < need; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }

  Dataset out;
  out.label = base.label + "+synth";
  out.scenes = base.scenes;
  for (std::size_t i = 0; i < need; ++i) {
    Scene s;
    s.bounds = tight_bbox(pool[i]);
    s.agents.push_back({0, std::move(pool[i])});
    out.scenes.push_back(std::move(s));
  }
  for (std::size_t i = out.scenes.size(); i > 1; --i)
    std::swap(out.scenes[i - 1], out.scenes[rng.below(i)]);
  for (std::size_t i = 0; i < out.scenes.size(); ++i)
    out.scenes[i].id = static_cast<int>(i);
  return out;
}

ProfileTarget profile_target_from_json(const std::string& text) {
  using nlohmann::json;
  const json j = json::parse(text);
  ProfileTarget t;
  const json& uh = j.at("unique_hist");
  for (int u = 1; u <= kSynthTrajLen; ++u) {
    const std::string key = std::to_string(u);
    t.unique_hist[u - 1] = uh.contains(key) ? uh[key].get<double>() : 0.0;
  }
  for (const auto& [key, val] : j.at("class_mix").items())
    t.class_mix[traj_class_from_string(key)] = val.get<double>();
  t.validate();
  return t;
}

std::string to_json(const ProfileTarget& t) {
  using nlohmann::json;
  json j;
  for (int u = 1; u <= kSynthTrajLen; ++u)
    j["unique_hist"][std::to_string(u)] = t.unique_hist[u - 1];
  for (const auto& [cls, v] : t.class_mix)
    j["class_mix"][to_string(cls)] = v;
  return j.dump();
}

}  // namespace trajkit

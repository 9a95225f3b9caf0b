#include <doctest.h>

#include <cmath>
#include <map>

#include "trajkit/analysis.hpp"
#include "trajkit/cluster.hpp"
#include "trajkit/metrics.hpp"
#include "trajkit/rng.hpp"
#include "trajkit/synth.hpp"

using namespace trajkit;

TEST_CASE("default target sums to one on both marginals") {
  const ProfileTarget t = default_profile_target();
  CHECK_NOTHROW(t.validate());
  double s = 0.0;
  for (double v : t.unique_hist) s += v;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.unique_hist[19] == doctest::Approx(0.6992).epsilon(1e-3));
}

TEST_CASE("targets with any T2 mass are rejected as infeasible") {
  ProfileTarget t = default_profile_target();
  auto move_mass = [&](TrajClass from, TrajClass to, double m) {
    t.class_mix[from] -= m;
    t.class_mix[to] += m;
  };
  move_mass(TrajClass::T7, TrajClass::T2, 0.05);
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("irreconcilable marginals are rejected") {
  ProfileTarget t;
  t.unique_hist.fill(0.0);
  t.unique_hist[19] = 1.0;           // everything 20-unique
  t.class_mix[TrajClass::T1] = 1.0;  // but all stationary
  CHECK_THROWS_AS(allocate_joint(t), std::invalid_argument);
}

TEST_CASE("allocate_joint preserves both marginals") {
  const ProfileTarget t = default_profile_target();
  const auto cells = allocate_joint(t);
  std::array<double, kSynthTrajLen> uh{};
  std::map<TrajClass, double> cm;
  for (const auto& c : cells) {
    uh[c.unique - 1] += c.prop;
    cm[c.cls] += c.prop;
  }
  for (int u = 0; u < kSynthTrajLen; ++u)
    CHECK(uh[u] == doctest::Approx(t.unique_hist[u]).epsilon(1e-9).scale(1.0));
  for (const auto& [cls, v] : t.class_mix)
    CHECK(cm[cls] == doctest::Approx(v).epsilon(1e-9).scale(1.0));
}

TEST_CASE("every recipe realizes its class and unique count") {
  SeededRng rng(5);
  const ProfileTarget t = default_profile_target();
  for (const auto& cell : allocate_joint(t)) {
    for (int rep = 0; rep < 5; ++rep) {
      const Trajectory traj = synth_trajectory(cell.cls, cell.unique, rng);
      REQUIRE(traj.points.size() == 20);
      CHECK(unique_points(traj) == cell.unique);
      CHECK(classify(traj) == cell.cls);
    }
  }
}

TEST_CASE("synth_trajectory rejects impossible combinations") {
  SeededRng rng(6);
  CHECK_THROWS_AS(synth_trajectory(TrajClass::T1, 5, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(synth_trajectory(TrajClass::T6, 20, rng),
                  std::invalid_argument);
}

TEST_CASE("gen_synsdd: all-stationary target") {
  ProfileTarget t;
  t.unique_hist.fill(0.0);
  t.unique_hist[0] = 1.0;
  t.class_mix[TrajClass::T1] = 1.0;
  SeededRng rng(7);
  const Dataset d = gen_synsdd(t, 50, rng);
  CHECK(d.trajectory_count() == 50);
  for (const Trajectory* traj : d.all_trajectories()) {
    CHECK(unique_points(*traj) == 1);
    CHECK(classify(*traj) == TrajClass::T1);
  }
}

TEST_CASE("gen_synsdd matches the default target within tolerance") {
  SeededRng rng(8);
  const ProfileTarget target = default_profile_target();
  const Dataset d = gen_synsdd(target, 3000, rng);
  const DatasetProfile p = profile(d);
  const double n = 3000.0;
  for (int u = 1; u <= kSynthTrajLen; ++u) {
    const auto it = p.unique_counts.find(u);
    const double got = it == p.unique_counts.end()
                           ? 0.0
                           : static_cast<double>(it->second) / n;
    CHECK(std::fabs(got - target.unique_hist[u - 1]) <= 0.02);
  }
  for (const auto& [cls, want] : target.class_mix) {
    const auto it = p.class_counts.find(cls);
    const double got =
        it == p.class_counts.end() ? 0.0 : static_cast<double>(it->second) / n;
    CHECK(std::fabs(got - want) <= 0.02);
  }
}

TEST_CASE("gen_synsdd deviation shrinks with count") {
  const ProfileTarget target = default_profile_target();
  auto worst_dev = [&](int count) {
    SeededRng rng(9);
    const DatasetProfile p = profile(gen_synsdd(target, count, rng));
    double worst = 0.0;
    for (int u = 1; u <= kSynthTrajLen; ++u) {
      const auto it = p.unique_counts.find(u);
      const double got = it == p.unique_counts.end()
                             ? 0.0
                             : static_cast<double>(it->second) / count;
      worst = std::max(worst, std::fabs(got - target.unique_hist[u - 1]));
    }
    return worst;
  };
  CHECK(worst_dev(5000) <= worst_dev(500) + 1e-12);
}

TEST_CASE("gen_synsdd is deterministic under seed") {
  const ProfileTarget target = default_profile_target();
  SeededRng r1(10), r2(10);
  const Dataset a = gen_synsdd(target, 100, r1);
  const Dataset b = gen_synsdd(target, 100, r2);
  const auto ta = a.all_trajectories();
  const auto tb = b.all_trajectories();
  REQUIRE(ta.size() == tb.size());
  for (std::size_t i = 0; i < ta.size(); ++i)
    for (std::size_t j = 0; j < 20; ++j)
      CHECK(ta[i]->points[j] == tb[i]->points[j]);
}

TEST_CASE("rigid_transform identity and abscore preservation") {
  SeededRng rng(11);
  const Trajectory t = synth_trajectory(TrajClass::T5, 20, rng);
  const Trajectory same = rigid_transform(t, 0.0, t.points.front(), {0, 0});
  for (std::size_t i = 0; i < t.points.size(); ++i)
    CHECK(same.points[i] == t.points[i]);

  const double base = abscore(t).raw;
  for (int rep = 0; rep < 20; ++rep) {
    const double ang = rng.uniform(0, 2 * M_PI);
    const Vec2 off{rng.uniform(-40, 40), rng.uniform(-40, 40)};
    const Trajectory moved = rigid_transform(t, ang, t.points.front(), off);
    CHECK(abscore(moved).raw == doctest::Approx(base).epsilon(1e-6));
  }
}

TEST_CASE("rt_augment cardinality and isometry") {
  SeededRng rng(12);
  const ProfileTarget target = default_profile_target();
  const Dataset d = gen_synsdd(target, 40, rng);
  SeededRng arng(13);
  const Dataset aug = rt_augment(d, 3, arng);
  CHECK(aug.trajectory_count() == 120);

  // Replicas of the same source keep pairwise Frobenius distances: rigid
  // motions of a trajectory pair about a shared pivot are isometries.
  const auto src = d.all_trajectories();
  const auto rep = aug.all_trajectories();
  // Replica layout: source i occupies indices 3i..3i+2.
  for (int i = 0; i < 3; ++i) {
    const Trajectory* orig = src[i];
    for (int r = 0; r < 3; ++r) {
      const Trajectory* copy = rep[3 * i + r];
      CHECK(abscore(*copy).raw ==
            doctest::Approx(abscore(*orig).raw).epsilon(1e-6));
    }
  }
}

TEST_CASE("rt_augment replicas preserve within-group distances") {
  // Two trajectories moved by the same rotation/translation keep their
  // mutual Frobenius distance; here we transform a pair manually.
  SeededRng rng(14);
  const Trajectory a = synth_trajectory(TrajClass::T7, 20, rng);
  const Trajectory b = synth_trajectory(TrajClass::T5, 20, rng);
  const double before = traj_distance(a, b, NormKind::frobenius);
  for (int rep = 0; rep < 10; ++rep) {
    const double ang = rng.uniform(0, 2 * M_PI);
    const Point2 pivot{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    const Vec2 off{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    const double after =
        traj_distance(rigid_transform(a, ang, pivot, off),
                      rigid_transform(b, ang, pivot, off),
                      NormKind::frobenius);
    CHECK(after == doctest::Approx(before).epsilon(1e-6));
  }
}

TEST_CASE("mix: share arithmetic at the reference scale") {
  // 18000 base trajectories at fraction 0.05 need ceil(947.37) = 948.
  const double m =
      std::ceil(0.05 / 0.95 * 18000.0);
  CHECK(m == 948.0);
  const double share = m / (18000.0 + m);
  CHECK(std::fabs(share - 0.05) < 1.0 / 18000.0);
}

TEST_CASE("mix composes, errors and stays deterministic") {
  SeededRng g1(15), g2(16);
  const ProfileTarget target = default_profile_target();
  const Dataset base = gen_synsdd(target, 200, g1);
  const Dataset pool = gen_synsdd(target, 100, g2);

  SUBCASE("cardinality formula holds exactly") {
    SeededRng rng(17);
    const Dataset out = mix(base, pool, 0.2, rng);
    // ceil(0.2/0.8 * 200) = 50
    CHECK(out.trajectory_count() == 250);
  }
  SUBCASE("base trajectories appear unmodified") {
    SeededRng rng(18);
    const Dataset out = mix(base, pool, 0.1, rng);
    // Every base trajectory must appear in the output point-for-point.
    const auto outs = out.all_trajectories();
    for (const Trajectory* bt : base.all_trajectories()) {
      bool found = false;
      for (const Trajectory* ot : outs) {
        if (ot->points == bt->points) {
          found = true;
          break;
        }
      }
      CHECK(found);
    }
  }
  SUBCASE("insufficient pool errors") {
    SeededRng rng(19);
    CHECK_THROWS_AS(mix(base, pool, 0.5, rng), std::invalid_argument);
  }
  SUBCASE("same seed, same mixed ordering") {
    SeededRng r1(20), r2(20);
    const Dataset o1 = mix(base, pool, 0.15, r1);
    const Dataset o2 = mix(base, pool, 0.15, r2);
    REQUIRE(o1.scenes.size() == o2.scenes.size());
    for (std::size_t i = 0; i < o1.scenes.size(); ++i) {
      REQUIRE(o1.scenes[i].agents.size() == o2.scenes[i].agents.size());
      CHECK(o1.scenes[i].agents[0].traj.points ==
            o2.scenes[i].agents[0].traj.points);
    }
  }
  SUBCASE("invalid fraction") {
    SeededRng rng(21);
    CHECK_THROWS_AS(mix(base, pool, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(mix(base, pool, 1.5, rng), std::invalid_argument);
    CHECK_THROWS_AS(mix(base, pool, 1.0, rng), std::invalid_argument);
  }
}

TEST_CASE("profile target json round trip") {
  const ProfileTarget t = default_profile_target();
  const ProfileTarget back = profile_target_from_json(to_json(t));
  for (int u = 0; u < kSynthTrajLen; ++u)
    CHECK(back.unique_hist[u] == t.unique_hist[u]);
  for (const auto& [cls, v] : t.class_mix) CHECK(back.class_mix.at(cls) == v);
}

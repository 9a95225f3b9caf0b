#include <benchmark/benchmark.h>

#include "trajkit/cluster.hpp"
#include "trajkit/rng.hpp"

using namespace trajkit;

namespace {

Dataset random_dataset(int count, unsigned seed) {
  SeededRng rng(seed);
  std::vector<Trajectory> ts;
  for (int i = 0; i < count; ++i) {
    Trajectory t;
    const Point2 c{rng.uniform(-100, 100), rng.uniform(-100, 100)};
    for (int j = 0; j < 20; ++j)
      t.points.push_back(c + Vec2{rng.uniform(-10, 10), rng.uniform(-10, 10)});
    t.obs_len = 8;
    t.pred_len = 12;
    ts.push_back(std::move(t));
  }
  return Dataset::from_trajectories(std::move(ts));
}

}  // namespace

static void BM_TrajDistance(benchmark::State& state) {
  const Dataset d = random_dataset(2, 3);
  const auto trajs = d.all_trajectories();
  const NormKind nk = static_cast<NormKind>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(traj_distance(*trajs[0], *trajs[1], nk));
  }
}
BENCHMARK(BM_TrajDistance)->Arg(0)->Arg(1)->Arg(2)->Arg(3);

static void BM_KMedoids(benchmark::State& state) {
  const Dataset d = random_dataset(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) {
    SeededRng rng(5);
    benchmark::DoNotOptimize(
        kmedoids(d, 5, NormKind::frobenius, rng).total_cost);
  }
}
BENCHMARK(BM_KMedoids)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

#include <benchmark/benchmark.h>

#include "trajkit/metrics.hpp"
#include "trajkit/rng.hpp"

using namespace trajkit;

namespace {

Trajectory random_traj(SeededRng& rng, int n) {
  Trajectory t;
  for (int i = 0; i < n; ++i)
    t.points.push_back({rng.uniform(-50, 50), rng.uniform(-50, 50)});
  t.obs_len = 8;
  t.pred_len = n - 8;
  return t;
}

}  // namespace

static void BM_Abscore(benchmark::State& state) {
  SeededRng rng(1);
  const Trajectory t = random_traj(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(abscore(t).raw);
  }
}
BENCHMARK(BM_Abscore)->Arg(20)->Arg(200);

static void BM_EvaluateBestOf20(benchmark::State& state) {
  SeededRng rng(2);
  const int n = static_cast<int>(state.range(0));
  std::vector<std::vector<std::vector<Point2>>> samples(n);
  std::vector<std::vector<Point2>> gt(n);
  for (int i = 0; i < n; ++i) {
    gt[i] = random_traj(rng, 12).points;
    for (int k = 0; k < 20; ++k)
      samples[i].push_back(random_traj(rng, 12).points);
  }
  EvalConfig cfg;
  cfg.k = 20;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(samples, gt, cfg).ade);
  }
}
BENCHMARK(BM_EvaluateBestOf20)->Arg(100)->Arg(1000);

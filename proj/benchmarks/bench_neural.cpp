#include <benchmark/benchmark.h>

#include "trajkit/neural.hpp"
#include "trajkit/rng.hpp"

using namespace trajkit;

static void BM_SirenForward(benchmark::State& state) {
  SeededRng rng(1);
  Mlp m = Mlp::make({1, 64, 64, 64, 1},
                    {Activation::sine, Activation::sine, Activation::sine,
                     Activation::identity});
  siren_init(m, rng);
  const std::vector<double> x{0.37};
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(m, x)[0]);
  }
}
BENCHMARK(BM_SirenForward);

static void BM_SirenForwardBackward(benchmark::State& state) {
  SeededRng rng(2);
  Mlp m = Mlp::make({1, 64, 64, 64, 1},
                    {Activation::sine, Activation::sine, Activation::sine,
                     Activation::identity});
  siren_init(m, rng);
  const std::vector<double> x{-0.12};
  const std::vector<double> up{1.0};
  ForwardCache cache;
  for (auto _ : state) {
    forward(m, x, &cache);
    benchmark::DoNotOptimize(backward(m, cache, up).layers[0].w[0]);
  }
}
BENCHMARK(BM_SirenForwardBackward);

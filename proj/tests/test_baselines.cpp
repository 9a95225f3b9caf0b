#include <doctest.h>

#include <cmath>

#include "trajkit/baselines.hpp"
#include "trajkit/generators.hpp"
#include "trajkit/rng.hpp"

using namespace trajkit;

namespace {

Dataset line_dataset(int count, Vec2 v, unsigned seed) {
  std::vector<Trajectory> ts;
  SeededRng rng(seed);
  for (int i = 0; i < count; ++i) {
    NewtonSpec spec;
    spec.x0 = {rng.uniform(-20, 20), rng.uniform(-20, 20)};
    spec.v0 = v;
    ts.push_back(gen_newton(spec, rng));
  }
  return Dataset::from_trajectories(std::move(ts));
}

}  // namespace

TEST_CASE("constant velocity predictor continues a uniform line exactly") {
  std::vector<Point2> obs;
  for (int i = 0; i < 8; ++i) obs.push_back({1.5 * i, -0.5 * i});
  SeededRng rng(1);
  Predictor p;
  const auto futures = predict(p, obs, 12, rng);
  REQUIRE(futures.size() == 1);
  for (int i = 0; i < 12; ++i) {
    CHECK(futures[0][i].x == doctest::Approx(1.5 * (8 + i)).epsilon(1e-12));
    CHECK(futures[0][i].y == doctest::Approx(-0.5 * (8 + i)).epsilon(1e-12));
  }
}

TEST_CASE("linear fit also recovers a uniform line") {
  std::vector<Point2> obs;
  for (int i = 0; i < 8; ++i) obs.push_back({2.0 * i + 3.0, 0.25 * i - 1.0});
  SeededRng rng(2);
  Predictor p;
  p.kind = Predictor::Kind::linear_fit;
  const auto futures = predict(p, obs, 12, rng);
  for (int i = 0; i < 12; ++i) {
    CHECK(futures[0][i].x ==
          doctest::Approx(2.0 * (8 + i) + 3.0).epsilon(1e-9));
    CHECK(futures[0][i].y ==
          doctest::Approx(0.25 * (8 + i) - 1.0).epsilon(1e-9));
  }
}

TEST_CASE("stationary predictor on a unit-speed target: fde = pred_len") {
  std::vector<Point2> obs;
  for (int i = 0; i < 8; ++i) obs.push_back({1.0 * i, 0});
  SeededRng rng(3);
  Predictor p;
  p.kind = Predictor::Kind::stationary;
  const auto futures = predict(p, obs, 12, rng);
  std::vector<Point2> gt;
  for (int i = 1; i <= 12; ++i) gt.push_back({7.0 + i, 0});
  CHECK(fde(futures[0], gt) == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(ade(futures[0], gt) == doctest::Approx(6.5).epsilon(1e-12));
}

TEST_CASE("k samples with zero jitter are identical; coupled == decoupled") {
  Dataset d = line_dataset(20, {1.2, 0.3}, 4);
  Predictor p;
  p.k_samples = 20;
  p.jitter_sigma = 0.0;
  EvalConfig cfg;
  cfg.k = 20;
  SeededRng r1(5), r2(5);
  const auto coupled = run_eval(d, p, cfg, r1);
  cfg.decoupled = true;
  const auto dec = run_eval(d, p, cfg, r2);
  CHECK(coupled.eval.ade == dec.eval.ade);
  CHECK(coupled.eval.fde == dec.eval.fde);
}

TEST_CASE("predict rejects a too-short prefix") {
  SeededRng rng(6);
  Predictor p;
  CHECK_THROWS_AS(predict(p, {{0, 0}}, 5, rng), std::invalid_argument);
}

TEST_CASE("noiseless constant-velocity dataset scores zero") {
  Dataset d = line_dataset(50, {0.8, -0.4}, 7);
  Predictor p;
  EvalConfig cfg;
  cfg.k = 1;
  SeededRng rng(8);
  const auto rep = run_eval(d, p, cfg, rng);
  CHECK(rep.eval.ade == 0.0);
  CHECK(rep.eval.fde == 0.0);
}

TEST_CASE("errors grow monotonically with noise sigma at fixed seed") {
  NewtonSpec spec;
  spec.v0 = {1.0, 0.5};
  double prev_ade = -1.0, prev_fde = -1.0;
  for (double sigma : {0.1, 0.5, 1.0}) {
    std::vector<Trajectory> ts;
    SeededRng grng(9);  // same seed: identical noise shape, scaled by sigma
    for (int i = 0; i < 500; ++i) {
      NewtonSpec s = spec;
      s.x0 = {grng.uniform(-20, 20), grng.uniform(-20, 20)};
      SeededRng nrng = grng.derive(i);
      ts.push_back(add_noise(gen_newton(s, grng), {sigma}, nrng));
    }
    Dataset d = Dataset::from_trajectories(std::move(ts));
    Predictor p;
    EvalConfig cfg;
    cfg.k = 1;
    SeededRng erng(10);
    const auto rep = run_eval(d, p, cfg, erng);
    CHECK(rep.eval.ade > prev_ade);
    CHECK(rep.eval.fde > prev_fde);
    prev_ade = rep.eval.ade;
    prev_fde = rep.eval.fde;
  }
}

TEST_CASE("per-class breakdown re-weights to the overall means") {
  SeededRng rng(11);
  // Mixed dataset: lines (T7) and stationary points (T1).
  std::vector<Trajectory> ts;
  for (int i = 0; i < 30; ++i) {
    NewtonSpec spec;
    spec.x0 = {rng.uniform(-10, 10), rng.uniform(-10, 10)};
    spec.v0 = i % 3 == 0 ? Vec2{0, 0} : Vec2{1, 0.2};
    ts.push_back(gen_newton(spec, rng));
  }
  Dataset d = Dataset::from_trajectories(std::move(ts));
  Predictor p;
  p.kind = Predictor::Kind::stationary;
  EvalConfig cfg;
  cfg.k = 1;
  SeededRng erng(12);
  const auto rep = run_eval(d, p, cfg, erng);

  double wade = 0.0, wfde = 0.0;
  std::size_t n = 0;
  for (const auto& [cls, cs] : rep.per_class) {
    wade += cs.ade * cs.count;
    wfde += cs.fde * cs.count;
    n += cs.count;
  }
  CHECK(n == 30);
  CHECK(wade / n == doctest::Approx(rep.eval.ade).epsilon(1e-9));
  CHECK(wfde / n == doctest::Approx(rep.eval.fde).epsilon(1e-9));
}

TEST_CASE("decoupled never exceeds coupled ADE; FDE matches") {
  Dataset d = line_dataset(40, {0.9, 0.1}, 13);
  Predictor p;
  p.jitter_sigma = 2.0;
  EvalConfig cfg;
  cfg.k = 10;
  SeededRng r1(14), r2(14);
  const auto coupled = run_eval(d, p, cfg, r1);
  cfg.decoupled = true;
  const auto dec = run_eval(d, p, cfg, r2);
  CHECK(dec.eval.ade <= coupled.eval.ade + 1e-15);
  CHECK(dec.eval.fde == coupled.eval.fde);
}

TEST_CASE("evaluation is deterministic under seed") {
  Dataset d = line_dataset(25, {1.1, -0.2}, 15);
  Predictor p;
  p.jitter_sigma = 1.0;
  EvalConfig cfg;
  cfg.k = 5;
  SeededRng r1(16), r2(16);
  const auto a = run_eval(d, p, cfg, r1);
  const auto b = run_eval(d, p, cfg, r2);
  CHECK(a.eval.ade == b.eval.ade);
  CHECK(a.eval.fde == b.eval.fde);
}

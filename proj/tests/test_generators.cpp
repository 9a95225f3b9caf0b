#include <doctest.h>

#include <cmath>

#include "trajkit/generators.hpp"
#include "trajkit/metrics.hpp"
#include "trajkit/rng.hpp"

using namespace trajkit;

TEST_CASE("static newton: uniform motion") {
  NewtonSpec spec;
  spec.v0 = {1, 0};
  SeededRng rng(1);
  const Trajectory t = gen_newton(spec, rng);
  REQUIRE(t.points.size() == 20);
  for (int i = 0; i < 20; ++i) {
    CHECK(t.points[i].x == doctest::Approx(i).epsilon(1e-15));
    CHECK(t.points[i].y == 0.0);
  }
}

TEST_CASE("static newton: closed-form half-a-t-squared") {
  NewtonSpec spec;
  spec.accel = {2, 0};
  SeededRng rng(1);
  const Trajectory t = gen_newton(spec, rng);
  for (int i = 0; i < 4; ++i)
    CHECK(t.points[i].x == doctest::Approx(1.0 * i * i).epsilon(1e-15));
  CHECK(t.points[3].x == 9.0);
}

TEST_CASE("variable mode with bound zero equals static zero-acceleration") {
  NewtonSpec stat;
  stat.v0 = {0.7, -0.3};
  NewtonSpec var = stat;
  var.variable = true;
  var.bound = 0.0;
  SeededRng r1(5), r2(5);
  const Trajectory a = gen_newton(stat, r1);
  const Trajectory b = gen_newton(var, r2);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].x == doctest::Approx(b.points[i].x).epsilon(1e-12));
    CHECK(a.points[i].y == doctest::Approx(b.points[i].y).epsilon(1e-12));
  }
}

TEST_CASE("static newton second differences are constant a*dt^2") {
  NewtonSpec spec;
  spec.x0 = {3, -4};
  spec.v0 = {1.3, 0.4};
  spec.accel = {-0.2, 0.15};
  spec.dt = 0.5;
  SeededRng rng(1);
  const Trajectory t = gen_newton(spec, rng);
  const double want_x = spec.accel.x * spec.dt * spec.dt;
  const double want_y = spec.accel.y * spec.dt * spec.dt;
  for (std::size_t i = 1; i + 1 < t.points.size(); ++i) {
    const Vec2 dd = t.points[i + 1] - t.points[i] * 2.0 + t.points[i - 1];
    CHECK(dd.x == doctest::Approx(want_x).epsilon(1e-9).scale(1.0));
    CHECK(dd.y == doctest::Approx(want_y).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("variable-mode accelerations reconstruct within bounds") {
  NewtonSpec spec;
  spec.variable = true;
  spec.bound = 0.4;
  spec.v0 = {1, 0};
  spec.dt = 0.5;
  spec.steps = 50;
  SeededRng rng(77);
  const Trajectory t = gen_newton(spec, rng);
  for (std::size_t i = 1; i + 1 < t.points.size(); ++i) {
    const Vec2 dd = t.points[i + 1] - t.points[i] * 2.0 + t.points[i - 1];
    const Vec2 a = dd * (1.0 / (spec.dt * spec.dt));
    CHECK(std::fabs(a.x) <= spec.bound + 1e-9);
    CHECK(std::fabs(a.y) <= spec.bound + 1e-9);
  }
}

TEST_CASE("collinear static trajectories have zero abscore") {
  NewtonSpec spec;
  spec.v0 = {1.5, 1.0};
  spec.accel = {0.3, 0.2};  // parallel to v0
  SeededRng rng(1);
  const Trajectory t = gen_newton(spec, rng);
  CHECK(abscore(t).raw == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("noise: sigma zero is the identity") {
  NewtonSpec spec;
  spec.v0 = {1, 1};
  SeededRng rng(2);
  const Trajectory t = gen_newton(spec, rng);
  SeededRng nrng(3);
  const Trajectory n = add_noise(t, {0.0}, nrng);
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    CHECK(n.points[i].x == t.points[i].x);
    CHECK(n.points[i].y == t.points[i].y);
  }
}

TEST_CASE("noise: empirical std within 5% at 1e4 points") {
  Trajectory t;
  t.points.assign(10000, Point2{0, 0});
  t.obs_len = 8;
  t.pred_len = 10000 - 8;
  SeededRng rng(4);
  const Trajectory n = add_noise(t, {1.0}, rng);
  double sx = 0, sy = 0, sxx = 0, syy = 0;
  for (const auto& p : n.points) {
    sx += p.x;
    sy += p.y;
    sxx += p.x * p.x;
    syy += p.y * p.y;
  }
  const double nn = 10000.0;
  const double stdx = std::sqrt(sxx / nn - (sx / nn) * (sx / nn));
  const double stdy = std::sqrt(syy / nn - (sy / nn) * (sy / nn));
  CHECK(stdx == doctest::Approx(1.0).epsilon(0.05));
  CHECK(stdy == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("noise is deterministic under seed") {
  NewtonSpec spec;
  spec.v0 = {1, 0};
  SeededRng g(5);
  const Trajectory t = gen_newton(spec, g);
  SeededRng r1(6), r2(6);
  const Trajectory n1 = add_noise(t, {0.8}, r1);
  const Trajectory n2 = add_noise(t, {0.8}, r2);
  for (std::size_t i = 0; i < n1.points.size(); ++i) {
    CHECK(n1.points[i].x == n2.points[i].x);
    CHECK(n1.points[i].y == n2.points[i].y);
  }
}

TEST_CASE("circle quarter points") {
  CurveSpec spec;
  spec.kind = CurveSpec::Kind::circle;
  spec.radius = 1.0;
  spec.n = 4;
  SeededRng rng(1);
  const Trajectory t = gen_curve(spec, rng);
  REQUIRE(t.points.size() == 4);
  const Point2 want[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int i = 0; i < 4; ++i) {
    CHECK(t.points[i].x == doctest::Approx(want[i].x).epsilon(1e-12).scale(1.0));
    CHECK(t.points[i].y == doctest::Approx(want[i].y).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("spiral reaches a + b*phi at the final sample") {
  CurveSpec spec;
  spec.kind = CurveSpec::Kind::spiral;
  spec.spiral_a = 0.0;
  spec.spiral_b = 1.0;
  spec.turns = 1.0;  // phi spans [0, 2*pi]
  spec.n = 21;
  SeededRng rng(1);
  const Trajectory t = gen_curve(spec, rng);
  CHECK((t.points.back() - spec.center).norm() ==
        doctest::Approx(2 * M_PI).epsilon(1e-12));
}

TEST_CASE("circle samples stay on the radius under both sampling modes") {
  for (bool variable : {false, true}) {
    CurveSpec spec;
    spec.kind = CurveSpec::Kind::circle;
    spec.radius = 3.5;
    spec.center = {2, -1};
    spec.n = 40;
    spec.variable_sampling = variable;
    spec.jitter = variable ? 0.6 : 0.0;
    SeededRng rng(9);
    const Trajectory t = gen_curve(spec, rng);
    for (const auto& p : t.points)
      CHECK((p - spec.center).norm() ==
            doctest::Approx(3.5).epsilon(1e-9));
  }
}

TEST_CASE("variable sampling keeps the parameter monotone") {
  CurveSpec spec;
  spec.kind = CurveSpec::Kind::line;
  spec.length = 10.0;
  spec.phase = 0.0;  // along +x: parameter order is visible in x
  spec.n = 30;
  spec.variable_sampling = true;
  spec.jitter = 0.9;
  SeededRng rng(10);
  const Trajectory t = gen_curve(spec, rng);
  for (std::size_t i = 1; i < t.points.size(); ++i)
    CHECK(t.points[i].x > t.points[i - 1].x);
}

TEST_CASE("generators are deterministic under seed") {
  NewtonSpec nspec;
  nspec.variable = true;
  nspec.bound = 0.5;
  CurveSpec cspec;
  cspec.kind = CurveSpec::Kind::loop;
  cspec.lobes = 4;
  cspec.loop_radius = 2.0;
  cspec.variable_sampling = true;
  cspec.jitter = 0.5;
  for (int rep = 0; rep < 3; ++rep) {
    SeededRng a(42), b(42);
    const Trajectory ta = gen_newton(nspec, a);
    const Trajectory tb = gen_newton(nspec, b);
    for (std::size_t i = 0; i < ta.points.size(); ++i)
      CHECK(ta.points[i] == tb.points[i]);
    const Trajectory ca = gen_curve(cspec, a);
    const Trajectory cb = gen_curve(cspec, b);
    for (std::size_t i = 0; i < ca.points.size(); ++i)
      CHECK(ca.points[i] == cb.points[i]);
  }
}

TEST_CASE("spec validation errors") {
  SeededRng rng(1);
  NewtonSpec bad;
  bad.steps = 1;
  CHECK_THROWS_AS(gen_newton(bad, rng), std::invalid_argument);
  CurveSpec c;
  c.n = 2;
  CHECK_THROWS_AS(gen_curve(c, rng), std::invalid_argument);
  c.n = 10;
  c.jitter = 1.5;
  c.variable_sampling = true;
  CHECK_THROWS_AS(gen_curve(c, rng), std::invalid_argument);
  CHECK_THROWS_AS(add_noise(Trajectory{}, {-1.0}, rng), std::invalid_argument);
}

TEST_CASE("json spec loaders") {
  const NewtonSpec n = newton_spec_from_json(
      R"({"x0":[1,2],"v0":[0.5,0],"accel":{"mode":"variable","bound":0.3},"steps":30,"dt":0.5})");
  CHECK(n.x0 == Point2{1, 2});
  CHECK(n.variable);
  CHECK(n.bound == 0.3);
  CHECK(n.steps == 30);

  const CurveSpec c = curve_spec_from_json(
      R"({"kind":"spiral","a":1.0,"b":0.5,"turns":3,"n":50,"sampling":{"mode":"variable","jitter":0.2}})");
  CHECK(c.kind == CurveSpec::Kind::spiral);
  CHECK(c.spiral_a == 1.0);
  CHECK(c.turns == 3.0);
  CHECK(c.variable_sampling);
  CHECK(c.jitter == 0.2);

  CHECK_THROWS_AS(curve_spec_from_json(R"({"kind":"dodecahedron"})"),
                  std::invalid_argument);
}

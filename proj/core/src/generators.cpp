#include "trajkit/generators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace trajkit {

Trajectory gen_newton(const NewtonSpec& spec, SeededRng& rng) {
  if (spec.steps < 2) throw std::invalid_argument("gen_newton: steps < 2");
  if (spec.dt <= 0.0) throw std::invalid_argument("gen_newton: dt <= 0");
  if (spec.variable && spec.bound < 0.0)
    throw std::invalid_argument("gen_newton: negative acceleration bound");

  Trajectory t;
  t.dt = spec.dt;
  t.points.reserve(spec.steps);
  if (!spec.variable) {
    for (int i = 0; i < spec.steps; ++i) {
      const double ti = static_cast<double>(i) * spec.dt;
      t.points.push_back(spec.x0 + spec.v0 * ti + spec.accel * (0.5 * ti * ti));
    }
  } else {
    Point2 p = spec.x0;
    Vec2 v = spec.v0;
    t.points.push_back(p);
    for (int i = 1; i < spec.steps; ++i) {
      const Vec2 a{rng.uniform(-spec.bound, spec.bound),
                   rng.uniform(-spec.bound, spec.bound)};
      v += a * spec.dt;
      p += v * spec.dt;
      t.points.push_back(p);
    }
  }
  const int n = spec.steps;
  t.obs_len = n == 20 ? 8 : std::min(8, n - 1);
  t.pred_len = n - t.obs_len;
  return t;
}

Trajectory add_noise(const Trajectory& t, const NoiseSpec& noise,
                     SeededRng& rng) {
  if (noise.sigma < 0.0) throw std::invalid_argument("add_noise: sigma < 0");
  Trajectory out = t;
  for (auto& p : out.points) {
    p.x += noise.sigma * rng.normal();
    p.y += noise.sigma * rng.normal();
  }
  return out;
}

namespace {

Point2 curve_point(const CurveSpec& spec, double u) {
  switch (spec.kind) {
    case CurveSpec::Kind::circle: {
      const double a = spec.phase + u;
      return spec.center + Vec2{spec.radius * std::cos(a),
                                spec.radius * std::sin(a)};
    }
    case CurveSpec::Kind::spiral: {
      const double r = spec.spiral_a + spec.spiral_b * u;
      const double a = spec.phase + u;
      return spec.center + Vec2{r * std::cos(a), r * std::sin(a)};
    }
    case CurveSpec::Kind::loop: {
      const double a = spec.phase + u;
      const double r = spec.loop_radius * std::cos(static_cast<double>(spec.lobes) * u);
      return spec.center + Vec2{r * std::cos(a), r * std::sin(a)};
    }
    case CurveSpec::Kind::line: {
      const Vec2 dir{std::cos(spec.phase), std::sin(spec.phase)};
      return spec.center + dir * (spec.length * u);
    }
  }
  return spec.center;
}

}  // namespace

Trajectory gen_curve(const CurveSpec& spec, SeededRng& rng) {
  if (spec.n < 3) throw std::invalid_argument("gen_curve: n < 3");
  if (spec.jitter < 0.0 || spec.jitter >= 1.0)
    throw std::invalid_argument("gen_curve: jitter must be in [0, 1)");
  if ((spec.kind == CurveSpec::Kind::circle && spec.radius <= 0.0) ||
      (spec.kind == CurveSpec::Kind::line && spec.length <= 0.0) ||
      (spec.kind == CurveSpec::Kind::loop && spec.loop_radius <= 0.0) ||
      (spec.kind == CurveSpec::Kind::spiral && spec.turns <= 0.0))
    throw std::invalid_argument("gen_curve: non-positive size parameter");

  // Parameter span: closed curves stop one increment short of 2*pi so the
  // loop does not duplicate its first sample; open curves span inclusively.
  double span = 0.0;
  int increments = 0;
  switch (spec.kind) {
    case CurveSpec::Kind::circle:
    case CurveSpec::Kind::loop:
      span = 2.0 * M_PI;
      increments = spec.n;
      break;
    case CurveSpec::Kind::spiral:
      span = spec.turns * 2.0 * M_PI;
      increments = spec.n - 1;
      break;
    case CurveSpec::Kind::line:
      span = 1.0;
      increments = spec.n - 1;
      break;
  }

  std::vector<double> params;
  params.reserve(spec.n);
  const double base = span / static_cast<double>(increments);
  if (!spec.variable_sampling) {
    for (int i = 0; i < spec.n; ++i)
      params.push_back(base * static_cast<double>(i));
  } else {
    double u = 0.0;
    params.push_back(u);
    for (int i = 1; i < spec.n; ++i) {
      u += base * (1.0 + rng.uniform(-spec.jitter, spec.jitter));
      params.push_back(u);
    }
  }

  Trajectory t;
  t.points.reserve(spec.n);
  for (double u : params) t.points.push_back(curve_point(spec, u));
  t.obs_len = spec.n == 20 ? 8 : std::min(8, spec.n - 1);
  t.pred_len = spec.n - t.obs_len;
  return t;
}

namespace {

using nlohmann::json;

Vec2 vec_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument(std::string(what) + " must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

NewtonSpec newton_spec_from_json(const std::string& text) {
  const json j = json::parse(text);
  NewtonSpec s;
  if (j.contains("x0")) s.x0 = vec_from_json(j["x0"], "x0");
  if (j.contains("v0")) s.v0 = vec_from_json(j["v0"], "v0");
  if (j.contains("steps")) s.steps = j["steps"].get<int>();
  if (j.contains("dt")) s.dt = j["dt"].get<double>();
  if (j.contains("accel")) {
    const json& a = j["accel"];
    const std::string mode = a.value("mode", "static");
    if (mode == "static") {
      s.variable = false;
      if (a.contains("a")) s.accel = vec_from_json(a["a"], "accel.a");
    } else if (mode == "variable") {
      s.variable = true;
      s.bound = a.value("bound", 0.0);
    } else {
      throw std::invalid_argument("accel.mode must be 'static' or 'variable'");
    }
  }
  return s;
}

CurveSpec curve_spec_from_json(const std::string& text) {
  const json j = json::parse(text);
  CurveSpec s;
  const std::string kind = j.value("kind", "circle");
  if (kind == "circle") s.kind = CurveSpec::Kind::circle;
  else if (kind == "spiral") s.kind = CurveSpec::Kind::spiral;
  else if (kind == "loop") s.kind = CurveSpec::Kind::loop;
  else if (kind == "line") s.kind = CurveSpec::Kind::line;
  else throw std::invalid_argument("unknown curve kind '" + kind + "'");

  s.radius = j.value("r", j.value("radius", 1.0));
  s.spiral_a = j.value("a", 0.0);
  s.spiral_b = j.value("b", 1.0);
  s.turns = j.value("turns", 1.0);
  s.lobes = j.value("lobes", 3);
  s.loop_radius = j.value("loop_radius", 1.0);
  s.length = j.value("len", j.value("length", 1.0));
  s.n = j.value("n", 20);
  s.phase = j.value("phase", 0.0);
  if (j.contains("center")) s.center = vec_from_json(j["center"], "center");
  if (j.contains("sampling")) {
    const json& sm = j["sampling"];
    const std::string mode = sm.value("mode", "fixed");
    if (mode == "variable") {
      s.variable_sampling = true;
      s.jitter = sm.value("jitter", 0.0);
    } else if (mode != "fixed") {
      throw std::invalid_argument("sampling.mode must be 'fixed' or 'variable'");
    }
  }
  return s;
}

}  // namespace trajkit

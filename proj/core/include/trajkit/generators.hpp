#pragma once

#include <string>

#include "trajkit/rng.hpp"
#include "trajkit/types.hpp"

namespace trajkit {

/// Newtonian trajectory description. Static mode uses the closed form
/// p_i = x0 + v0*(i*dt) + 0.5*a*(i*dt)^2; variable mode redraws the
/// acceleration each step, uniform per component in [-bound, bound], and
/// integrates v += a*dt, p += v*dt (so second differences reconstruct the
/// drawn accelerations exactly).
struct NewtonSpec {
  Point2 x0{0.0, 0.0};
  Vec2 v0{0.0, 0.0};
  bool variable = false;
  Vec2 accel{0.0, 0.0};  // static mode
  double bound = 0.0;    // variable mode
  int steps = 20;
  double dt = 1.0;
};

Trajectory gen_newton(const NewtonSpec& spec, SeededRng& rng);

/// Isotropic Gaussian position noise; sigma = 0 is the identity.
struct NoiseSpec {
  double sigma = 0.0;
};

Trajectory add_noise(const Trajectory& t, const NoiseSpec& noise,
                     SeededRng& rng);

/// Parametric curve families. Fixed sampling uses uniform parameter
/// increments; variable sampling jitters each increment by a fraction in
/// [-jitter, +jitter] while keeping the parameter monotone, so samples stay
/// exactly on the curve.
struct CurveSpec {
  enum class Kind { circle, spiral, loop, line };
  Kind kind = Kind::circle;

  double radius = 1.0;     // circle
  double spiral_a = 0.0;   // spiral r = a + b*phi
  double spiral_b = 1.0;
  double turns = 1.0;      // spiral phi range = turns * 2*pi
  int lobes = 3;           // loop (rose curve petals parameter)
  double loop_radius = 1.0;
  double length = 1.0;     // line

  int n = 20;
  bool variable_sampling = false;
  double jitter = 0.0;  // in [0, 1)

  Point2 center{0.0, 0.0};
  double phase = 0.0;  // radians
};

Trajectory gen_curve(const CurveSpec& spec, SeededRng& rng);

// JSON loaders for the CLI (`--spec` files).
NewtonSpec newton_spec_from_json(const std::string& text);
CurveSpec curve_spec_from_json(const std::string& text);

}  // namespace trajkit

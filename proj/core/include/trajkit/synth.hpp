#pragma once

#include <array>
#include <map>
#include <string>

#include "trajkit/analysis.hpp"
#include "trajkit/rng.hpp"
#include "trajkit/types.hpp"

namespace trajkit {

/// Number of points per synthesized trajectory (8 observed + 12 future).
inline constexpr int kSynthTrajLen = 20;

/// Target marginals for dataset synthesis: a distribution over
/// unique-point counts 1..20 and one over qualitative classes. Both must
/// sum to 1 and be jointly realizable (every class accepts only certain
/// unique counts).
struct ProfileTarget {
  std::array<double, kSynthTrajLen> unique_hist{};  // index u-1
  std::map<TrajClass, double> class_mix;

  void validate() const;
};

/// The default target: unique-point proportions of the reference
/// 2829-trajectory profile and a compatible class mix.
ProfileTarget default_profile_target();

/// Joint (class, unique-count) cell after reconciling the two marginals.
struct TargetCell {
  TrajClass cls;
  int unique = 1;
  double prop = 0.0;
};

/// Greedy decomposition of a target into joint cells; throws when the
/// marginals cannot be reconciled (infeasible target).
std::vector<TargetCell> allocate_joint(const ProfileTarget& target);

/// Generates `count` 20-point trajectories matching the target: cells get
/// largest-remainder quotas, the order is seed-shuffled, and each
/// trajectory is built by its class recipe with an exact unique-point
/// count. Deterministic under seed.
Dataset gen_synsdd(const ProfileTarget& target, int count, SeededRng& rng);

/// Builds one trajectory of class `cls` with exactly `unique` distinct
/// points (must be a combination the class recipe supports).
Trajectory synth_trajectory(TrajClass cls, int unique, SeededRng& rng);

/// Rotation about `pivot` by `angle`, then translation by `offset`.
Trajectory rigid_transform(const Trajectory& t, double angle, Point2 pivot,
                           Vec2 offset);

/// Replaces each trajectory with n_rot randomly rotated/translated copies;
/// rotations are about the trajectory's first point, translations are
/// drawn within the dataset's bounding extent.
Dataset rt_augment(const Dataset& d, int n_rot, SeededRng& rng);

/// All of base plus ceil(fraction/(1-fraction) * |base|) trajectories
/// uniformly sampled from synth without replacement, scene order shuffled
/// by seed. The synthetic share of the result is `fraction` within one
/// trajectory. Throws when the synth pool is too small.
Dataset mix(const Dataset& base, const Dataset& synth, double fraction,
            SeededRng& rng);

ProfileTarget profile_target_from_json(const std::string& text);
std::string to_json(const ProfileTarget& t);

}  // namespace trajkit

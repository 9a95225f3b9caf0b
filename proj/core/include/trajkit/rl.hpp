#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "trajkit/hmm.hpp"
#include "trajkit/neural.hpp"
#include "trajkit/rng.hpp"
#include "trajkit/types.hpp"

namespace trajkit {

/// Fixed per-simulation attributes of a learning agent, all in [0, 1]:
/// fitness decays rewards over time, sociability and patience reward
/// collision-free close encounters.
struct AgentProfile {
  double fitness = 1.0;      // AF
  double sociability = 0.5;  // AS
  double patience = 0.5;     // AP
  Point2 goal{0.0, 0.0};

  void validate() const;
};

/// Snapshot the reward depends on. t counts steps from 1; n_ics counts
/// detection-radius encounters that never became collisions.
struct AgentState {
  Point2 position;
  Vec2 velocity{0.0, 0.0};
  int t = 1;
  int n_ics = 0;
};

/// R_t = AF^t * (n_ics + 1)^(AS + AP) / (t^2 * (1 + ||G - x_t||)).
double reward_fn(const AgentState& s, const AgentProfile& p);

struct RlEnvConfig {
  SceneConfig scene;  // background agents; may be empty
  Point2 start{0.0, 0.0};
  double goal_radius = 1.0;
  double v_max = 2.0;
  double a_max = 0.5;
  double collision_penalty = -10.0;  // added to the terminal step's reward
  int max_steps = 50;
  int k_neighbors = 3;
  double dt = 1.0;

  /// 4 + 4*k_neighbors: own velocity, goal offset, then per neighbor
  /// relative position and velocity, nearest first, zero-padded.
  int feature_dim() const { return 4 + 4 * k_neighbors; }
};

/// Minimum of the diagonal Gaussian variance (added to softplus output).
inline constexpr double kPolicyVarianceFloor = 1e-4;

struct PolicyAction {
  Vec2 accel;
  double logprob = 0.0;
  std::array<double, 4> net_out{};  // mu_x, mu_y, pre-variance x, y
};

/// Samples a diagonal-Gaussian acceleration from the policy head
/// (mu_x, mu_y, s_x, s_y) with sigma^2 = softplus(s) + floor, and returns
/// the exact log density at the sampled action.
PolicyAction policy_act(const Mlp& net, std::span<const double> features,
                        SeededRng& rng);

enum class Terminal { goal, collision, timeout };
std::string to_string(Terminal t);

struct StepRecord {
  AgentState state_after;          // post-integration state the reward saw
  std::vector<double> features;    // policy input at decision time
  Vec2 action;                     // raw sampled acceleration
  double logprob = 0.0;
  double reward = 0.0;
};

struct EpisodeLog {
  std::vector<StepRecord> steps;
  Terminal terminal = Terminal::timeout;
  std::vector<Point2> positions;  // start + one per step
  double total_return = 0.0;
  double final_goal_distance = 0.0;
};

EpisodeLog run_episode(const Mlp& net, const RlEnvConfig& env,
                       const AgentProfile& profile, SeededRng& rng);

/// One policy-gradient update: J = -sum_t logP(a_t|s_t) R_t over every
/// logged step (rewards are constants), one sgd step at rate lr. Returns
/// the pre-update loss.
double reinforce_update(Mlp& net, const std::vector<EpisodeLog>& episodes,
                        double lr);

struct TrainConfig {
  int iters = 40;
  int episodes_per_iter = 32;
  double lr = 0.05;
  std::uint64_t seed = 1;
};

struct TrainCurvePoint {
  int iter = 0;
  double mean_return = 0.0;
  double mean_final_dist = 0.0;
};

/// REINFORCE training loop; deterministic under cfg.seed.
std::vector<TrainCurvePoint> train(Mlp& net, const RlEnvConfig& env,
                                   const AgentProfile& profile,
                                   const TrainConfig& cfg);

RlEnvConfig rl_env_from_json(const std::string& text);
AgentProfile agent_profile_from_json(const std::string& text);

}  // namespace trajkit

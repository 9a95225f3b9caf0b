#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "trajkit/rng.hpp"
#include "trajkit/types.hpp"

namespace trajkit {

/// Behavioural states of a simulated pedestrian. GoalReached is absorbing.
enum class HmmState { walk, wait, turn, impending_collision, goal_reached };
inline constexpr int kHmmStateCount = 5;

std::string to_string(HmmState s);

/// Row-stochastic 5x5 transition matrix indexed by HmmState.
struct TransitionMatrix {
  std::array<std::array<double, kHmmStateCount>, kHmmStateCount> p{};

  /// Throws unless every row sums to 1 (1e-9) and GoalReached self-loops.
  void validate() const;
};

/// Walk-dominant default: 0.8 self-loop on Walk with small Wait/Turn mass.
TransitionMatrix default_transition();

/// Draws the successor of `state` from its transition row.
HmmState sample_transition(const TransitionMatrix& m, HmmState state,
                           SeededRng& rng);

/// Limiting state distribution of a chain started in Walk, by power
/// iteration (for chain diagnostics).
std::array<double, kHmmStateCount> stationary_distribution(
    const TransitionMatrix& m);

struct HmmAgentConfig {
  Point2 start;
  Point2 goal;
  double base_speed = 1.0;
  TransitionMatrix transition = default_transition();
};

struct SceneConfig {
  std::vector<HmmAgentConfig> agents;
  Rect bounds{-50.0, -50.0, 50.0, 50.0};
  double collision_radius = 1.0;
  double detection_radius = 3.0;
  int max_frames = 20;
  double heading_noise_deg = 5.0;  // Walk heading jitter (std)
  double turn_max_deg = 90.0;      // Turn emission angle bound
};

struct StateLogEntry {
  int agent = 0;
  int frame = 0;
  HmmState state = HmmState::walk;
};

struct SimResult {
  Scene scene;
  std::vector<StateLogEntry> log;
  std::size_t clip_events = 0;
};

/// Position and velocity snapshot of any moving body, used to let
/// externally controlled agents participate in threat detection.
struct Body {
  Point2 position;
  Vec2 velocity;
};

/// Incremental multi-agent simulator. One step advances every agent one
/// frame in id order against a frame-start snapshot, so runs are
/// deterministic under the rng seed.
class InteractionSim {
 public:
  InteractionSim(const SceneConfig& cfg, SeededRng rng);

  /// Advances one frame. `external` bodies are visible to the agents'
  /// collision detection but are not moved by the simulator.
  void step(const std::vector<Body>& external = {});

  int frame() const { return frame_; }
  std::size_t agent_count() const { return agents_.size(); }
  Body body(std::size_t i) const;
  HmmState state(std::size_t i) const;
  const std::vector<std::vector<Point2>>& tracks() const { return tracks_; }
  const std::vector<StateLogEntry>& log() const { return log_; }
  std::size_t clip_events() const { return clip_events_; }

 private:
  struct AgentRt {
    Point2 pos;
    Vec2 vel{0.0, 0.0};
    Vec2 heading{1.0, 0.0};
    HmmState state = HmmState::walk;
  };

  const SceneConfig cfg_;
  SeededRng rng_;
  std::vector<AgentRt> agents_;
  std::vector<std::vector<Point2>> tracks_;
  std::vector<StateLogEntry> log_;
  int frame_ = 0;
  std::size_t clip_events_ = 0;
};

/// Runs the chain for max_frames and packages the result as a Scene with a
/// per-frame state log sidecar.
SimResult simulate_scene(const SceneConfig& cfg, SeededRng& rng);

/// Frame counts per state per agent; requires a recorded state log.
std::map<int, std::array<std::size_t, kHmmStateCount>> estimate_state_occupancy(
    const SimResult& sim);

SceneConfig scene_config_from_json(const std::string& text);
std::string state_log_json(const SimResult& sim);

}  // namespace trajkit

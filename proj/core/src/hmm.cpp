#include "trajkit/hmm.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace trajkit {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

Vec2 unit_or(Vec2 v, Vec2 fallback) {
  const double n = v.norm();
  return n > 0.0 ? v * (1.0 / n) : fallback;
}

}  // namespace

std::string to_string(HmmState s) {
  switch (s) {
    case HmmState::walk: return "walk";
    case HmmState::wait: return "wait";
    case HmmState::turn: return "turn";
    case HmmState::impending_collision: return "impending_collision";
    case HmmState::goal_reached: return "goal_reached";
  }
  return "?";
}

void TransitionMatrix::validate() const {
  for (int r = 0; r < kHmmStateCount; ++r) {
    double sum = 0.0;
    for (int c = 0; c < kHmmStateCount; ++c) {
      if (p[r][c] < 0.0)
        throw std::invalid_argument("transition matrix: negative entry");
      sum += p[r][c];
    }
    if (std::fabs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("transition matrix: row " +
                                  std::to_string(r) + " sums to " +
                                  std::to_string(sum));
  }
  const int g = static_cast<int>(HmmState::goal_reached);
  if (p[g][g] != 1.0)
    throw std::invalid_argument("transition matrix: GoalReached must be absorbing");
}

TransitionMatrix default_transition() {
  TransitionMatrix m;
  auto row = [&](HmmState s, std::array<double, kHmmStateCount> v) {
    m.p[static_cast<int>(s)] = v;
  };
  //                 walk  wait  turn   ics   goal
  row(HmmState::walk, {0.80, 0.08, 0.10, 0.02, 0.00});
  row(HmmState::wait, {0.60, 0.30, 0.08, 0.02, 0.00});
  row(HmmState::turn, {0.70, 0.05, 0.23, 0.02, 0.00});
  row(HmmState::impending_collision, {0.50, 0.20, 0.20, 0.10, 0.00});
  row(HmmState::goal_reached, {0.00, 0.00, 0.00, 0.00, 1.00});
  return m;
}

HmmState sample_transition(const TransitionMatrix& m, HmmState state,
                           SeededRng& rng) {
  const auto& row = m.p[static_cast<int>(state)];
  const double u = rng.uniform01();
  double acc = 0.0;
  for (int c = 0; c < kHmmStateCount; ++c) {
    acc += row[c];
    if (u < acc) return static_cast<HmmState>(c);
  }
  return static_cast<HmmState>(kHmmStateCount - 1);
}

std::array<double, kHmmStateCount> stationary_distribution(
    const TransitionMatrix& m) {
  // Limiting occupancy of a chain started in Walk; states unreachable from
  // Walk keep zero mass.
  std::array<double, kHmmStateCount> v{};
  v[static_cast<int>(HmmState::walk)] = 1.0;
  for (int it = 0; it < 10000; ++it) {
    std::array<double, kHmmStateCount> next{};
    for (int r = 0; r < kHmmStateCount; ++r)
      for (int c = 0; c < kHmmStateCount; ++c) next[c] += v[r] * m.p[r][c];
    double delta = 0.0;
    for (int c = 0; c < kHmmStateCount; ++c)
      delta += std::fabs(next[c] - v[c]);
    v = next;
    if (delta < 1e-14) break;
  }
  return v;
}

InteractionSim::InteractionSim(const SceneConfig& cfg, SeededRng rng)
    : cfg_(cfg), rng_(rng) {
  if (cfg_.collision_radius <= 0.0 ||
      cfg_.detection_radius <= cfg_.collision_radius)
    throw std::invalid_argument(
        "scene config: need detection_radius > collision_radius > 0");
  if (cfg_.max_frames < 1)
    throw std::invalid_argument("scene config: max_frames < 1");
  for (const auto& a : cfg_.agents) {
    a.transition.validate();
    if (a.base_speed <= 0.0)
      throw std::invalid_argument("scene config: base_speed <= 0");
  }
  for (std::size_t i = 0; i < cfg_.agents.size(); ++i)
    for (std::size_t j = i + 1; j < cfg_.agents.size(); ++j)
      if ((cfg_.agents[i].start - cfg_.agents[j].start).norm() <=
          cfg_.collision_radius)
        throw std::invalid_argument("scene config: agents start overlapping");

  agents_.reserve(cfg_.agents.size());
  tracks_.resize(cfg_.agents.size());
  for (std::size_t i = 0; i < cfg_.agents.size(); ++i) {
    AgentRt rt;
    rt.pos = cfg_.bounds.clamp(cfg_.agents[i].start);
    rt.heading = unit_or(cfg_.agents[i].goal - rt.pos, {1.0, 0.0});
    rt.state = (cfg_.agents[i].goal - rt.pos).norm() <= cfg_.collision_radius
                   ? HmmState::goal_reached
                   : HmmState::walk;
    tracks_[i].push_back(rt.pos);
    log_.push_back({static_cast<int>(i), 0, rt.state});
    agents_.push_back(rt);
  }
}

Body InteractionSim::body(std::size_t i) const {
  return {agents_[i].pos, agents_[i].vel};
}

HmmState InteractionSim::state(std::size_t i) const {
  return agents_[i].state;
}

void InteractionSim::step(const std::vector<Body>& external) {
  ++frame_;
  // Frame-start snapshot; every agent reacts to the same world state.
  std::vector<Body> snapshot;
  snapshot.reserve(agents_.size() + external.size());
  for (const auto& a : agents_) snapshot.push_back({a.pos, a.vel});
  for (const auto& b : external) snapshot.push_back(b);

  for (std::size_t i = 0; i < agents_.size(); ++i) {
    AgentRt& rt = agents_[i];
    const HmmAgentConfig& cfg = cfg_.agents[i];

    if (rt.state == HmmState::goal_reached) {
      rt.vel = {0.0, 0.0};
      tracks_[i].push_back(rt.pos);
      log_.push_back({static_cast<int>(i), frame_, rt.state});
      continue;
    }

    // Threat scan: anyone inside the detection radius and closing in
    // forces the ImpendingCollision state.
    bool threatened = false;
    Body threat{};
    double threat_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < snapshot.size(); ++j) {
      if (j == i) continue;
      const Vec2 rel_pos = snapshot[j].position - rt.pos;
      const double dist = rel_pos.norm();
      if (dist > cfg_.detection_radius) continue;
      const Vec2 rel_vel = snapshot[j].velocity - rt.vel;
      if (rel_pos.dot(rel_vel) < 0.0 && dist < threat_dist) {
        threatened = true;
        threat = snapshot[j];
        threat_dist = dist;
      }
    }

    HmmState next = threatened
                        ? HmmState::impending_collision
                        : sample_transition(cfg.transition, rt.state, rng_);

    Vec2 step_vec{0.0, 0.0};
    switch (next) {
      case HmmState::walk: {
        Vec2 dir = unit_or(cfg.goal - rt.pos, rt.heading);
        const double noise =
            cfg_.heading_noise_deg * kDegToRad * rng_.normal();
        dir = rotate(dir, noise);
        step_vec = dir * cfg.base_speed;
        break;
      }
      case HmmState::wait:
        break;
      case HmmState::turn: {
        const double angle =
            rng_.uniform(-cfg_.turn_max_deg, cfg_.turn_max_deg) * kDegToRad;
        step_vec = rotate(rt.heading, angle) * cfg.base_speed;
        break;
      }
      case HmmState::impending_collision: {
        // Slow down and move away from where the threat is heading.
        const Point2 projected = threat.position + threat.velocity;
        const Vec2 away = unit_or(rt.pos - projected, rt.heading * -1.0);
        step_vec = away * (0.5 * cfg.base_speed);
        break;
      }
      case HmmState::goal_reached:
        break;
    }

    const Point2 raw = rt.pos + step_vec;
    const Point2 clipped = cfg_.bounds.clamp(raw);
    if (clipped.x != raw.x || clipped.y != raw.y) ++clip_events_;
    rt.vel = clipped - rt.pos;
    rt.pos = clipped;
    if (rt.vel.norm() > 0.0) rt.heading = unit_or(rt.vel, rt.heading);
    if ((cfg.goal - rt.pos).norm() <= cfg_.collision_radius)
      next = HmmState::goal_reached;
    rt.state = next;

    tracks_[i].push_back(rt.pos);
    log_.push_back({static_cast<int>(i), frame_, next});
  }
}

SimResult simulate_scene(const SceneConfig& cfg, SeededRng& rng) {
  if (cfg.agents.empty())
    throw std::invalid_argument("simulate_scene: no agents");
  InteractionSim sim(cfg, rng.derive(rng.next_u64()));
  while (sim.frame() < cfg.max_frames - 1) sim.step();

  SimResult out;
  out.scene.bounds = cfg.bounds;
  for (std::size_t i = 0; i < sim.agent_count(); ++i) {
    Trajectory t;
    t.points = sim.tracks()[i];
    const int n = static_cast<int>(t.points.size());
    t.obs_len = n == 20 ? 8 : std::min(8, n - 1);
    t.pred_len = n - t.obs_len;
    out.scene.agents.push_back({static_cast<int>(i), std::move(t)});
  }
  out.log = sim.log();
  out.clip_events = sim.clip_events();
  return out;
}

std::map<int, std::array<std::size_t, kHmmStateCount>> estimate_state_occupancy(
    const SimResult& sim) {
  if (sim.log.empty())
    throw std::invalid_argument("estimate_state_occupancy: missing state log");
  std::map<int, std::array<std::size_t, kHmmStateCount>> occ;
  for (const auto& e : sim.log) {
    auto& arr = occ[e.agent];
    arr[static_cast<int>(e.state)]++;
  }
  return occ;
}

SceneConfig scene_config_from_json(const std::string& text) {
  using nlohmann::json;
  const json j = json::parse(text);
  SceneConfig cfg;
  if (j.contains("bounds")) {
    const json& b = j["bounds"];
    cfg.bounds = {b.at("min_x").get<double>(), b.at("min_y").get<double>(),
                  b.at("max_x").get<double>(), b.at("max_y").get<double>()};
  }
  cfg.collision_radius = j.value("collision_radius", cfg.collision_radius);
  cfg.detection_radius = j.value("detection_radius", cfg.detection_radius);
  cfg.max_frames = j.value("max_frames", cfg.max_frames);
  cfg.heading_noise_deg = j.value("heading_noise_deg", cfg.heading_noise_deg);
  cfg.turn_max_deg = j.value("turn_max_deg", cfg.turn_max_deg);
  if (j.contains("agents")) {
    for (const json& a : j["agents"]) {
      HmmAgentConfig ac;
      ac.start = {a.at("start")[0].get<double>(), a.at("start")[1].get<double>()};
      ac.goal = {a.at("goal")[0].get<double>(), a.at("goal")[1].get<double>()};
      ac.base_speed = a.value("base_speed", 1.0);
      if (a.contains("transition")) {
        const json& t = a["transition"];
        if (!t.is_array() || t.size() != kHmmStateCount)
          throw std::invalid_argument("transition must be a 5x5 array");
        for (int r = 0; r < kHmmStateCount; ++r)
          for (int c = 0; c < kHmmStateCount; ++c)
            ac.transition.p[r][c] = t[r][c].get<double>();
      }
      cfg.agents.push_back(ac);
    }
  }
  return cfg;
}

std::string state_log_json(const SimResult& sim) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < sim.log.size(); ++i) {
    if (i) os << ',';
    os << "{\"agent\":" << sim.log[i].agent << ",\"frame\":" << sim.log[i].frame
       << ",\"state\":\"" << to_string(sim.log[i].state) << "\"}";
  }
  os << "]";
  return os.str();
}

}  // namespace trajkit

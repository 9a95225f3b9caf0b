#include "trajkit/rl.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include <json.hpp>

namespace trajkit {

namespace {

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  return x > 0.0 ? 1.0 / (1.0 + std::exp(-x))
                 : std::exp(x) / (1.0 + std::exp(x));
}

Vec2 clamp_norm(Vec2 v, double max_norm) {
  const double n = v.norm();
  if (n > max_norm && n > 0.0) return v * (max_norm / n);
  return v;
}

}  // namespace

void AgentProfile::validate() const {
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in01(fitness) || !in01(sociability) || !in01(patience))
    throw std::invalid_argument("agent profile attributes must be in [0, 1]");
}

double reward_fn(const AgentState& s, const AgentProfile& p) {
  if (s.t < 1) throw std::invalid_argument("reward_fn: t must be >= 1");
  const double t = static_cast<double>(s.t);
  const double base = std::pow(p.fitness, t);
  const double social =
      std::pow(static_cast<double>(s.n_ics + 1), p.sociability + p.patience);
  const double dist = (p.goal - s.position).norm();
  return base * social / (t * t * (1.0 + dist));
}

PolicyAction policy_act(const Mlp& net, std::span<const double> features,
                        SeededRng& rng) {
  const auto out = forward(net, features);
  if (out.size() != 4)
    throw std::invalid_argument("policy_act: net must output 4 values");
  for (double v : out)
    if (!std::isfinite(v))
      throw std::runtime_error("policy_act: non-finite network output");

  PolicyAction act;
  std::copy(out.begin(), out.end(), act.net_out.begin());
  const double mu[2] = {out[0], out[1]};
  double a[2];
  double logprob = 0.0;
  for (int j = 0; j < 2; ++j) {
    const double var = softplus(out[2 + j]) + kPolicyVarianceFloor;
    const double sd = std::sqrt(var);
    a[j] = mu[j] + sd * rng.normal();
    const double d = a[j] - mu[j];
    logprob += -0.5 * std::log(2.0 * M_PI * var) - d * d / (2.0 * var);
  }
  act.accel = {a[0], a[1]};
  act.logprob = logprob;
  return act;
}

std::string to_string(Terminal t) {
  switch (t) {
    case Terminal::goal: return "goal";
    case Terminal::collision: return "collision";
    case Terminal::timeout: return "timeout";
  }
  return "?";
}

namespace {

std::vector<double> build_features(const RlEnvConfig& env, Point2 pos, Vec2 vel,
                                   const AgentProfile& profile,
                                   const std::vector<Body>& others) {
  std::vector<double> f;
  f.reserve(env.feature_dim());
  f.push_back(vel.x);
  f.push_back(vel.y);
  const Vec2 goal_off = profile.goal - pos;
  f.push_back(goal_off.x);
  f.push_back(goal_off.y);

  // Neighbours inside the detection radius, nearest first, zero padded.
  std::vector<std::pair<double, Body>> near;
  for (const Body& b : others) {
    const double d = (b.position - pos).norm();
    if (d <= env.scene.detection_radius) near.push_back({d, b});
  }
  std::sort(near.begin(), near.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (int i = 0; i < env.k_neighbors; ++i) {
    if (i < static_cast<int>(near.size())) {
      const Body& b = near[i].second;
      f.push_back(b.position.x - pos.x);
      f.push_back(b.position.y - pos.y);
      f.push_back(b.velocity.x - vel.x);
      f.push_back(b.velocity.y - vel.y);
    } else {
      f.push_back(0.0);
      f.push_back(0.0);
      f.push_back(0.0);
      f.push_back(0.0);
    }
  }
  return f;
}

}  // namespace

EpisodeLog run_episode(const Mlp& net, const RlEnvConfig& env,
                       const AgentProfile& profile, SeededRng& rng) {
  profile.validate();
  if (env.max_steps < 1) throw std::invalid_argument("run_episode: max_steps < 1");
  if (net.input_dim() != env.feature_dim())
    throw std::invalid_argument("run_episode: net input dim != feature dim");

  const bool has_background = !env.scene.agents.empty();
  InteractionSim* simp = nullptr;
  std::optional<InteractionSim> sim;
  if (has_background) {
    sim.emplace(env.scene, rng.derive(rng.next_u64()));
    simp = &*sim;
  }

  EpisodeLog log;
  Point2 pos = env.start;
  Vec2 vel{0.0, 0.0};
  int n_ics = 0;
  log.positions.push_back(pos);

  // Previous-frame distances to each background agent for crossing checks.
  std::vector<double> prev_dist;
  if (simp) {
    prev_dist.resize(simp->agent_count());
    for (std::size_t j = 0; j < simp->agent_count(); ++j)
      prev_dist[j] = (simp->body(j).position - pos).norm();
  }

  for (int t = 1; t <= env.max_steps; ++t) {
    std::vector<Body> others;
    if (simp) {
      others.reserve(simp->agent_count());
      for (std::size_t j = 0; j < simp->agent_count(); ++j)
        others.push_back(simp->body(j));
    }

    StepRecord rec;
    rec.features = build_features(env, pos, vel, profile, others);
    const PolicyAction act = policy_act(net, rec.features, rng);
    rec.action = act.accel;
    rec.logprob = act.logprob;

    const Body learner_snapshot{pos, vel};
    const Vec2 a = clamp_norm(act.accel, env.a_max);
    vel = clamp_norm(vel + a * env.dt, env.v_max);
    pos += vel * env.dt;

    // Background agents advance against the learner's frame-start body.
    if (simp) simp->step({learner_snapshot});

    bool collided = false;
    if (simp) {
      for (std::size_t j = 0; j < simp->agent_count(); ++j) {
        const double d = (simp->body(j).position - pos).norm();
        if (d <= env.scene.collision_radius) collided = true;
        else if (prev_dist[j] > env.scene.detection_radius &&
                 d <= env.scene.detection_radius)
          ++n_ics;
        prev_dist[j] = d;
      }
    }

    rec.state_after = {pos, vel, t, n_ics};
    rec.reward = reward_fn(rec.state_after, profile);

    const double goal_dist = (profile.goal - pos).norm();
    if (collided) {
      rec.reward += env.collision_penalty;
      log.terminal = Terminal::collision;
    } else if (goal_dist <= env.goal_radius) {
      log.terminal = Terminal::goal;
    }

    log.positions.push_back(pos);
    log.total_return += rec.reward;
    log.steps.push_back(std::move(rec));
    if (collided || goal_dist <= env.goal_radius) break;
    log.terminal = Terminal::timeout;
  }
  log.final_goal_distance = (profile.goal - log.positions.back()).norm();
  return log;
}

double reinforce_update(Mlp& net, const std::vector<EpisodeLog>& episodes,
                        double lr) {
  if (episodes.empty())
    throw std::invalid_argument("reinforce_update: empty batch");

  Gradients g = Gradients::zeros_like(net);
  double loss = 0.0;
  ForwardCache cache;
  for (const EpisodeLog& ep : episodes) {
    for (const StepRecord& rec : ep.steps) {
      loss += -rec.logprob * rec.reward;

      const auto out = forward(net, rec.features, &cache);
      // Upstream of J = -R*logP w.r.t. (mu, pre-variance) head.
      std::vector<double> up(4, 0.0);
      for (int j = 0; j < 2; ++j) {
        const double mu = out[j];
        const double s = out[2 + j];
        const double var = softplus(s) + kPolicyVarianceFloor;
        const double d = (j == 0 ? rec.action.x : rec.action.y) - mu;
        const double dlogp_dmu = d / var;
        const double dlogp_dvar = -0.5 / var + d * d / (2.0 * var * var);
        up[j] = -rec.reward * dlogp_dmu;
        up[2 + j] = -rec.reward * dlogp_dvar * sigmoid(s);
      }
      g.add(backward(net, cache, up));
    }
  }
  sgd_step(net, g, lr);
  return loss;
}

std::vector<TrainCurvePoint> train(Mlp& net, const RlEnvConfig& env,
                                   const AgentProfile& profile,
                                   const TrainConfig& cfg) {
  if (cfg.iters < 1 || cfg.episodes_per_iter < 1)
    throw std::invalid_argument("train: iters and episodes_per_iter must be >= 1");
  SeededRng master(cfg.seed);
  std::vector<TrainCurvePoint> curve;
  curve.reserve(cfg.iters);
  for (int it = 0; it < cfg.iters; ++it) {
    std::vector<EpisodeLog> batch;
    batch.reserve(cfg.episodes_per_iter);
    double ret_sum = 0.0;
    double dist_sum = 0.0;
    for (int e = 0; e < cfg.episodes_per_iter; ++e) {
      SeededRng ep_rng = master.derive(
          static_cast<std::uint64_t>(it) * cfg.episodes_per_iter + e);
      batch.push_back(run_episode(net, env, profile, ep_rng));
      ret_sum += batch.back().total_return;
      dist_sum += batch.back().final_goal_distance;
    }
    reinforce_update(net, batch, cfg.lr);
    curve.push_back({it, ret_sum / cfg.episodes_per_iter,
                     dist_sum / cfg.episodes_per_iter});
  }
  return curve;
}

RlEnvConfig rl_env_from_json(const std::string& text) {
  using nlohmann::json;
  const json j = json::parse(text);
  RlEnvConfig env;
  if (j.contains("scene"))
    env.scene = scene_config_from_json(j["scene"].dump());
  if (j.contains("start"))
    env.start = {j["start"][0].get<double>(), j["start"][1].get<double>()};
  env.goal_radius = j.value("goal_radius", env.goal_radius);
  env.v_max = j.value("v_max", env.v_max);
  env.a_max = j.value("a_max", env.a_max);
  env.collision_penalty = j.value("collision_penalty", env.collision_penalty);
  env.max_steps = j.value("max_steps", env.max_steps);
  env.k_neighbors = j.value("k_neighbors", env.k_neighbors);
  env.dt = j.value("dt", env.dt);
  return env;
}

AgentProfile agent_profile_from_json(const std::string& text) {
  using nlohmann::json;
  const json j = json::parse(text);
  AgentProfile p;
  p.fitness = j.value("fitness", p.fitness);
  p.sociability = j.value("sociability", p.sociability);
  p.patience = j.value("patience", p.patience);
  if (j.contains("goal"))
    p.goal = {j["goal"][0].get<double>(), j["goal"][1].get<double>()};
  p.validate();
  return p;
}

}  // namespace trajkit

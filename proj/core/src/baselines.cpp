#include "trajkit/baselines.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "trajkit/io.hpp"

namespace trajkit {

Predictor::Kind Predictor::kind_from_string(const std::string& s) {
  if (s == "cv" || s == "constant_velocity") return Kind::constant_velocity;
  if (s == "linfit" || s == "linear_fit") return Kind::linear_fit;
  if (s == "stationary") return Kind::stationary;
  throw std::invalid_argument("unknown predictor '" + s + "'");
}

std::vector<std::vector<Point2>> predict(const Predictor& p,
                                         const std::vector<Point2>& obs,
                                         int pred_len, SeededRng& rng) {
  if (p.k_samples < 1) throw std::invalid_argument("predict: k_samples < 1");
  if (pred_len < 1) throw std::invalid_argument("predict: pred_len < 1");
  const std::size_t n = obs.size();
  const bool needs_motion = p.kind != Predictor::Kind::stationary;
  if (n < (needs_motion ? 2u : 1u))
    throw std::invalid_argument("predict: observed prefix too short");

  std::vector<Point2> base;
  base.reserve(pred_len);
  switch (p.kind) {
    case Predictor::Kind::constant_velocity: {
      const Vec2 v = obs[n - 1] - obs[n - 2];
      for (int i = 1; i <= pred_len; ++i)
        base.push_back(obs.back() + v * static_cast<double>(i));
      break;
    }
    case Predictor::Kind::linear_fit: {
      // Per-coordinate least squares against the time index 0..n-1.
      const double nn = static_cast<double>(n);
      const double tbar = (nn - 1.0) / 2.0;
      double sxx = 0.0;
      Vec2 sxy{0.0, 0.0};
      Vec2 mean{0.0, 0.0};
      for (const auto& q : obs) mean += q * (1.0 / nn);
      for (std::size_t i = 0; i < n; ++i) {
        const double dtc = static_cast<double>(i) - tbar;
        sxx += dtc * dtc;
        sxy += (obs[i] - mean) * dtc;
      }
      const Vec2 slope = sxy * (1.0 / sxx);
      const Vec2 at_last = mean + slope * (nn - 1.0 - tbar);
      for (int i = 1; i <= pred_len; ++i)
        base.push_back(at_last + slope * static_cast<double>(i));
      break;
    }
    case Predictor::Kind::stationary: {
      base.assign(pred_len, obs.back());
      break;
    }
  }

  std::vector<std::vector<Point2>> out;
  out.reserve(p.k_samples);
  out.push_back(base);
  for (int k = 1; k < p.k_samples; ++k) {
    const Vec2 delta{p.jitter_sigma * rng.normal(),
                     p.jitter_sigma * rng.normal()};
    std::vector<Point2> sample = base;
    for (int i = 0; i < pred_len; ++i) {
      const double frac = static_cast<double>(i + 1) / pred_len;
      sample[i] += delta * frac;
    }
    out.push_back(std::move(sample));
  }
  return out;
}

EvalRunReport run_eval(const Dataset& d, const Predictor& p,
                       const EvalConfig& cfg, SeededRng& rng,
                       const ClassifyConfig& classify_cfg) {
  if (d.empty()) throw std::invalid_argument("run_eval: empty dataset");
  const auto trajs = d.all_trajectories();

  std::vector<std::vector<std::vector<Point2>>> samples;
  std::vector<std::vector<Point2>> gt;
  std::vector<TrajClass> classes;
  samples.reserve(trajs.size());
  gt.reserve(trajs.size());
  Predictor eff = p;
  eff.k_samples = cfg.k;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const Trajectory& t = *trajs[i];
    if (!t.eval_shape())
      throw std::invalid_argument(
          "run_eval: trajectory " + std::to_string(i) +
          " does not split into obs_len + pred_len points");
    const std::vector<Point2> obs(t.points.begin(),
                                  t.points.begin() + t.obs_len);
    gt.emplace_back(t.points.begin() + t.obs_len, t.points.end());
    SeededRng traj_rng = rng.derive(i);
    samples.push_back(predict(eff, obs, t.pred_len, traj_rng));
    classes.push_back(classify(t, classify_cfg));
  }

  EvalRunReport rep;
  rep.eval = evaluate(samples, gt, cfg);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    ClassStats& cs = rep.per_class[classes[i]];
    cs.ade += rep.eval.per_trajectory[i].first;
    cs.fde += rep.eval.per_trajectory[i].second;
    cs.count++;
  }
  for (auto& [cls, cs] : rep.per_class) {
    cs.ade /= static_cast<double>(cs.count);
    cs.fde /= static_cast<double>(cs.count);
  }
  return rep;
}

std::string to_json(const EvalRunReport& r) {
  std::ostringstream os;
  const std::string eval_json = to_json(r.eval);
  // Splice the per-class block into the eval report object.
  os << eval_json.substr(0, eval_json.size() - 1) << ",\"per_class\":{";
  bool first = true;
  for (const auto& [cls, cs] : r.per_class) {
    if (!first) os << ',';
    first = false;
    os << '"' << to_string(cls) << "\":{\"ade\":" << format_double(cs.ade)
       << ",\"fde\":" << format_double(cs.fde) << ",\"count\":" << cs.count
       << '}';
  }
  os << "}}";
  return os.str();
}

}  // namespace trajkit

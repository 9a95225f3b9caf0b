#include "trajkit/neural.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace trajkit {

Mlp Mlp::make(const std::vector<int>& dims, const std::vector<Activation>& acts,
              double omega0) {
  if (dims.size() < 2) throw std::invalid_argument("Mlp: need >= 2 dims");
  if (acts.size() != dims.size() - 1)
    throw std::invalid_argument("Mlp: one activation per layer required");
  Mlp m;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    Layer l;
    l.in = dims[i];
    l.out = dims[i + 1];
    l.act = acts[i];
    l.omega0 = omega0;
    l.w.assign(static_cast<std::size_t>(l.in) * l.out, 0.0);
    l.b.assign(l.out, 0.0);
    m.layers.push_back(std::move(l));
  }
  return m;
}

Gradients Gradients::zeros_like(const Mlp& m) {
  Gradients g;
  g.layers.reserve(m.layers.size());
  for (const auto& l : m.layers)
    g.layers.push_back({std::vector<double>(l.w.size(), 0.0),
                        std::vector<double>(l.b.size(), 0.0)});
  return g;
}

void Gradients::add(const Gradients& other) {
  if (layers.size() != other.layers.size())
    throw std::invalid_argument("Gradients::add: shape mismatch");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    for (std::size_t j = 0; j < layers[i].w.size(); ++j)
      layers[i].w[j] += other.layers[i].w[j];
    for (std::size_t j = 0; j < layers[i].b.size(); ++j)
      layers[i].b[j] += other.layers[i].b[j];
  }
}

void Gradients::scale(double s) {
  for (auto& l : layers) {
    for (auto& v : l.w) v *= s;
    for (auto& v : l.b) v *= s;
  }
}

void random_init(Mlp& m, SeededRng& rng) {
  for (auto& l : m.layers) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(l.in));
    for (auto& w : l.w) w = rng.uniform(-bound, bound);
    for (auto& b : l.b) b = 0.0;
  }
}

void siren_init(Mlp& m, SeededRng& rng) {
  if (m.layers.empty()) throw std::invalid_argument("siren_init: empty net");
  for (std::size_t i = 0; i + 1 < m.layers.size(); ++i)
    if (m.layers[i].act != Activation::sine)
      throw std::invalid_argument(
          "siren_init: hidden layer " + std::to_string(i) + " is not sine");

  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    Layer& l = m.layers[i];
    const double n = static_cast<double>(l.in);
    const double bound =
        i == 0 ? 1.0 / n : std::sqrt(6.0 / n) / l.omega0;
    for (auto& w : l.w) w = rng.uniform(-bound, bound);
    for (auto& b : l.b) b = 0.0;
  }
}

std::vector<double> forward(const Mlp& m, std::span<const double> x,
                            ForwardCache* cache) {
  if (m.layers.empty()) throw std::invalid_argument("forward: empty net");
  if (static_cast<int>(x.size()) != m.input_dim())
    throw std::invalid_argument("forward: input dimension mismatch");

  if (cache) {
    cache->inputs.clear();
    cache->preacts.clear();
    cache->valid = false;
  }

  std::vector<double> cur(x.begin(), x.end());
  for (const auto& l : m.layers) {
    if (cache) cache->inputs.push_back(cur);
    std::vector<double> pre(l.out, 0.0);
    for (int o = 0; o < l.out; ++o) {
      double acc = l.b[o];
      const double* wrow = l.w.data() + static_cast<std::size_t>(o) * l.in;
      for (int i = 0; i < l.in; ++i) acc += wrow[i] * cur[i];
      pre[o] = acc;
    }
    if (cache) cache->preacts.push_back(pre);
    std::vector<double> post(l.out, 0.0);
    switch (l.act) {
      case Activation::relu:
        for (int o = 0; o < l.out; ++o) post[o] = pre[o] > 0.0 ? pre[o] : 0.0;
        break;
      case Activation::sine:
        for (int o = 0; o < l.out; ++o) post[o] = std::sin(l.omega0 * pre[o]);
        break;
      case Activation::identity:
        post = pre;
        break;
    }
    cur = std::move(post);
  }
  if (cache) {
    cache->output = cur;
    cache->valid = true;
  }
  return cur;
}

Gradients backward(const Mlp& m, const ForwardCache& cache,
                   std::span<const double> upstream) {
  if (!cache.valid)
    throw std::invalid_argument("backward: no forward cache");
  if (cache.inputs.size() != m.layers.size())
    throw std::invalid_argument("backward: cache does not match net");
  if (static_cast<int>(upstream.size()) != m.output_dim())
    throw std::invalid_argument("backward: upstream dimension mismatch");

  Gradients g = Gradients::zeros_like(m);
  std::vector<double> delta(upstream.begin(), upstream.end());
  for (int li = static_cast<int>(m.layers.size()) - 1; li >= 0; --li) {
    const Layer& l = m.layers[li];
    const auto& pre = cache.preacts[li];
    const auto& in = cache.inputs[li];

    // d(post)/d(pre) folded into delta.
    switch (l.act) {
      case Activation::relu:
        for (int o = 0; o < l.out; ++o)
          if (pre[o] <= 0.0) delta[o] = 0.0;
        break;
      case Activation::sine:
        for (int o = 0; o < l.out; ++o)
          delta[o] *= l.omega0 * std::cos(l.omega0 * pre[o]);
        break;
      case Activation::identity:
        break;
    }

    auto& lg = g.layers[li];
    for (int o = 0; o < l.out; ++o) {
      lg.b[o] += delta[o];
      double* wg = lg.w.data() + static_cast<std::size_t>(o) * l.in;
      for (int i = 0; i < l.in; ++i) wg[i] += delta[o] * in[i];
    }

    if (li > 0) {
      std::vector<double> prev(l.in, 0.0);
      for (int o = 0; o < l.out; ++o) {
        const double* wrow = l.w.data() + static_cast<std::size_t>(o) * l.in;
        for (int i = 0; i < l.in; ++i) prev[i] += wrow[i] * delta[o];
      }
      delta = std::move(prev);
    }
  }
  return g;
}

void sgd_step(Mlp& m, const Gradients& g, double lr) {
  if (lr < 0.0) throw std::invalid_argument("sgd_step: negative lr");
  if (g.layers.size() != m.layers.size())
    throw std::invalid_argument("sgd_step: shape mismatch");
  for (std::size_t li = 0; li < m.layers.size(); ++li) {
    Layer& l = m.layers[li];
    const auto& lg = g.layers[li];
    if (lg.w.size() != l.w.size() || lg.b.size() != l.b.size())
      throw std::invalid_argument("sgd_step: shape mismatch");
    for (std::size_t j = 0; j < l.w.size(); ++j) l.w[j] -= lr * lg.w[j];
    for (std::size_t j = 0; j < l.b.size(); ++j) l.b[j] -= lr * lg.b[j];
  }
}

double signal_mse(const Mlp& m,
                  const std::vector<std::pair<double, std::vector<double>>>& samples) {
  if (samples.empty()) throw std::invalid_argument("signal_mse: no samples");
  const double denom =
      static_cast<double>(samples.size()) * m.output_dim();
  double loss = 0.0;
  for (const auto& [t, y] : samples) {
    const double xin[1] = {t};
    const auto out = forward(m, xin);
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double e = out[j] - y[j];
      loss += e * e;
    }
  }
  return loss / denom;
}

std::vector<double> fit_signal(
    Mlp& m, const std::vector<std::pair<double, std::vector<double>>>& samples,
    int epochs, double lr) {
  if (samples.empty()) throw std::invalid_argument("fit_signal: no samples");
  for (const auto& [t, y] : samples)
    if (static_cast<int>(y.size()) != m.output_dim())
      throw std::invalid_argument("fit_signal: target dimension mismatch");

  const double denom =
      static_cast<double>(samples.size()) * m.output_dim();
  std::vector<double> curve;
  curve.reserve(epochs + 1);
  ForwardCache cache;
  for (int e = 0; e < epochs; ++e) {
    Gradients g = Gradients::zeros_like(m);
    double loss = 0.0;
    for (const auto& [t, y] : samples) {
      const double xin[1] = {t};
      const auto out = forward(m, xin, &cache);
      std::vector<double> up(out.size());
      for (std::size_t j = 0; j < out.size(); ++j) {
        const double err = out[j] - y[j];
        loss += err * err;
        up[j] = 2.0 * err / denom;
      }
      g.add(backward(m, cache, up));
    }
    curve.push_back(loss / denom);
    sgd_step(m, g, lr);
  }
  curve.push_back(signal_mse(m, samples));
  return curve;
}

std::string mlp_to_json(const Mlp& m) {
  using nlohmann::json;
  json j;
  j["layers"] = json::array();
  for (const auto& l : m.layers) {
    json lj;
    lj["in"] = l.in;
    lj["out"] = l.out;
    lj["omega0"] = l.omega0;
    switch (l.act) {
      case Activation::relu: lj["act"] = "relu"; break;
      case Activation::sine: lj["act"] = "sine"; break;
      case Activation::identity: lj["act"] = "identity"; break;
    }
    lj["w"] = l.w;
    lj["b"] = l.b;
    j["layers"].push_back(lj);
  }
  return j.dump();
}

Mlp mlp_from_json(const std::string& text) {
  using nlohmann::json;
  const json j = json::parse(text);
  Mlp m;
  for (const auto& lj : j.at("layers")) {
    Layer l;
    l.in = lj.at("in").get<int>();
    l.out = lj.at("out").get<int>();
    l.omega0 = lj.value("omega0", 30.0);
    const std::string act = lj.at("act").get<std::string>();
    if (act == "relu") l.act = Activation::relu;
    else if (act == "sine") l.act = Activation::sine;
    else if (act == "identity") l.act = Activation::identity;
    else throw std::invalid_argument("unknown activation '" + act + "'");
    l.w = lj.at("w").get<std::vector<double>>();
    l.b = lj.at("b").get<std::vector<double>>();
    if (l.w.size() != static_cast<std::size_t>(l.in) * l.out ||
        l.b.size() != static_cast<std::size_t>(l.out))
      throw std::invalid_argument("mlp_from_json: shape mismatch");
    m.layers.push_back(std::move(l));
  }
  if (m.layers.empty()) throw std::invalid_argument("mlp_from_json: no layers");
  return m;
}

}  // namespace trajkit

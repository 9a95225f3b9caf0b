#pragma once

#include <span>
#include <string>
#include <vector>

#include "trajkit/rng.hpp"

namespace trajkit {

enum class Activation { relu, sine, identity };

/// Dense layer, row-major weights (out x in). Sine layers compute
/// sin(omega0 * (Wx + b)).
struct Layer {
  int in = 0;
  int out = 0;
  Activation act = Activation::identity;
  double omega0 = 30.0;
  std::vector<double> w;  // out*in, row-major
  std::vector<double> b;  // out
};

struct Mlp {
  std::vector<Layer> layers;

  int input_dim() const { return layers.empty() ? 0 : layers.front().in; }
  int output_dim() const { return layers.empty() ? 0 : layers.back().out; }

  /// dims = {in, h1, ..., out}; acts has one entry per layer.
  static Mlp make(const std::vector<int>& dims,
                  const std::vector<Activation>& acts, double omega0 = 30.0);
};

struct Gradients {
  struct LayerGrad {
    std::vector<double> w;
    std::vector<double> b;
  };
  std::vector<LayerGrad> layers;

  static Gradients zeros_like(const Mlp& m);
  void add(const Gradients& other);
  void scale(double s);
};

/// Uniform [-1/sqrt(fan_in), 1/sqrt(fan_in)] weights, zero biases.
void random_init(Mlp& m, SeededRng& rng);

/// Sine-network scheme: first layer uniform in [-1/n, 1/n], deeper layers
/// uniform in [-sqrt(6/n)/omega0, sqrt(6/n)/omega0] with n = fan-in, zero
/// biases. Requires every hidden layer to use the sine activation (the
/// final layer may be identity).
void siren_init(Mlp& m, SeededRng& rng);

/// Activations recorded by forward() for the matching backward() call.
struct ForwardCache {
  std::vector<std::vector<double>> inputs;   // per layer
  std::vector<std::vector<double>> preacts;  // per layer, Wx + b
  std::vector<double> output;
  bool valid = false;
};

std::vector<double> forward(const Mlp& m, std::span<const double> x,
                            ForwardCache* cache = nullptr);

/// Exact reverse-mode gradients of sum(upstream . output) w.r.t. every
/// parameter. Requires the cache produced by a prior forward().
Gradients backward(const Mlp& m, const ForwardCache& cache,
                   std::span<const double> upstream);

void sgd_step(Mlp& m, const Gradients& g, double lr);

/// Full-batch MSE gradient descent on samples (t -> y). Returns the loss
/// curve: entry e is the loss measured before update e, plus one trailing
/// entry with the final post-training loss (epochs + 1 values).
std::vector<double> fit_signal(
    Mlp& m, const std::vector<std::pair<double, std::vector<double>>>& samples,
    int epochs, double lr);

/// Mean squared error of the network over the samples.
double signal_mse(const Mlp& m,
                  const std::vector<std::pair<double, std::vector<double>>>& samples);

std::string mlp_to_json(const Mlp& m);
Mlp mlp_from_json(const std::string& text);

}  // namespace trajkit

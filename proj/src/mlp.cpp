#include "handover/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "handover/error.hpp"
#include "handover/rng.hpp"

namespace handover {

namespace {

// Keeps the output likelihood strictly inside (0, 1) so BCE stays finite.
constexpr double kProbClamp = 1e-12;

// Decorrelates the epoch-shuffle stream from the weight-init stream.
constexpr std::uint64_t kShuffleStream = 0x9e3779b97f4a7c15ull;

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double clamp_prob(double p) {
  return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

struct ForwardTrace {
  // activations[0] is the input; activations.back() is the clamped likelihood.
  std::vector<std::vector<double>> activations;
  std::vector<std::vector<double>> pre_activations;  // one per non-input layer
};

void check_input(const MlpNetwork& net, const FeatureVector& x) {
  if (x.layout != net.layout) {
    throw ConfigError("input layout does not match network layout");
  }
  if (x.values.size() != net.layer_dims.front()) {
    throw ConfigError("input has " + std::to_string(x.values.size()) +
                      " values, network expects " + std::to_string(net.layer_dims.front()));
  }
}

ForwardTrace forward_trace(const MlpNetwork& net, const FeatureVector& x) {
  check_input(net, x);
  ForwardTrace trace;
  trace.activations.push_back(x.values);
  for (std::size_t layer = 0; layer < net.layer_count(); ++layer) {
    const Matrix& w = net.weights[layer];
    const std::vector<double>& b = net.biases[layer];
    const std::vector<double>& a_prev = trace.activations.back();
    std::vector<double> z(w.rows);
    for (std::size_t r = 0; r < w.rows; ++r) {
      const double* wr = w.row(r);
      double acc = b[r];
      for (std::size_t c = 0; c < w.cols; ++c) {
        acc += wr[c] * a_prev[c];
      }
      z[r] = acc;
    }
    std::vector<double> a(z.size());
    const bool output_layer = layer + 1 == net.layer_count();
    for (std::size_t r = 0; r < z.size(); ++r) {
      a[r] = output_layer ? clamp_prob(sigmoid(z[r])) : std::max(z[r], 0.0);
    }
    trace.pre_activations.push_back(std::move(z));
    trace.activations.push_back(std::move(a));
  }
  return trace;
}

void accumulate_batch(const MlpNetwork& net, const LabeledVector& sample, Gradients& grads) {
  const ForwardTrace trace = forward_trace(net, sample.first);
  const double p = trace.activations.back()[0];
  const double y = static_cast<double>(sample.second);

  // delta for the output unit: d(BCE)/dz = p - y through the sigmoid.
  std::vector<double> delta{p - y};
  for (std::size_t layer = net.layer_count(); layer-- > 0;) {
    const std::vector<double>& a_prev = trace.activations[layer];
    Matrix& gw = grads.weights[layer];
    std::vector<double>& gb = grads.biases[layer];
    for (std::size_t r = 0; r < gw.rows; ++r) {
      gb[r] += delta[r];
      double* gwr = gw.row(r);
      for (std::size_t c = 0; c < gw.cols; ++c) {
        gwr[c] += delta[r] * a_prev[c];
      }
    }
    if (layer == 0) {
      break;
    }
    const Matrix& w = net.weights[layer];
    const std::vector<double>& z_prev = trace.pre_activations[layer - 1];
    std::vector<double> next(w.cols, 0.0);
    for (std::size_t c = 0; c < w.cols; ++c) {
      if (z_prev[c] <= 0.0) {
        continue;  // ReLU gate
      }
      double acc = 0.0;
      for (std::size_t r = 0; r < w.rows; ++r) {
        acc += w.at(r, c) * delta[r];
      }
      next[c] = acc;
    }
    delta = std::move(next);
  }
}

void adam_step(MlpNetwork& net, const Gradients& grads, OptimizerState& state) {
  state.step_count += 1;
  const AdamConfig& cfg = state.adam;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step_count));
  for (std::size_t layer = 0; layer < net.layer_count(); ++layer) {
    auto update = [&](double& theta, double g, double& m, double& v) {
      m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
      v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
      const double m_hat = m / bc1;
      const double v_hat = v / bc2;
      theta -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    };
    Matrix& w = net.weights[layer];
    for (std::size_t i = 0; i < w.data.size(); ++i) {
      update(w.data[i], grads.weights[layer].data[i], state.weight_m[layer].data[i],
             state.weight_v[layer].data[i]);
    }
    std::vector<double>& b = net.biases[layer];
    for (std::size_t i = 0; i < b.size(); ++i) {
      update(b[i], grads.biases[layer][i], state.bias_m[layer][i], state.bias_v[layer][i]);
    }
  }
}

Gradients zero_gradients(const MlpNetwork& net) {
  Gradients grads;
  for (std::size_t layer = 0; layer < net.layer_count(); ++layer) {
    grads.weights.emplace_back(net.weights[layer].rows, net.weights[layer].cols);
    grads.biases.emplace_back(net.biases[layer].size(), 0.0);
  }
  return grads;
}

}  // namespace

const char* split_mode_name(SplitMode mode) {
  return mode == SplitMode::kFrame ? "frame" : "video";
}

SplitMode split_mode_from_name(const std::string& name) {
  if (name == "frame") {
    return SplitMode::kFrame;
  }
  if (name == "video") {
    return SplitMode::kVideo;
  }
  throw ConfigError("unknown split mode \"" + name + "\" (expected frame or video)");
}

void validate_config(const TrainConfig& config) {
  if (config.hidden_dims.size() != kHiddenLayerCount) {
    throw ConfigError("expected " + std::to_string(kHiddenLayerCount) + " hidden dims, got " +
                      std::to_string(config.hidden_dims.size()));
  }
  for (std::size_t dim : config.hidden_dims) {
    if (dim == 0) {
      throw ConfigError("hidden dims must be positive");
    }
  }
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
    throw ConfigError("learning rate must be positive and finite");
  }
  if (config.batch_size == 0) {
    throw ConfigError("batch size must be positive");
  }
  if (config.epochs == 0) {
    throw ConfigError("epochs must be positive");
  }
  if (!(config.threshold > 0.0 && config.threshold < 1.0)) {
    throw ConfigError("threshold must lie strictly between 0 and 1");
  }
  if (!(config.split_ratio > 0.0 && config.split_ratio < 1.0)) {
    throw ConfigError("split ratio must lie strictly between 0 and 1");
  }
}

MlpNetwork init_network(Layout layout, const std::vector<std::size_t>& hidden_dims,
                        std::uint64_t seed) {
  if (hidden_dims.size() != kHiddenLayerCount) {
    throw ConfigError("expected " + std::to_string(kHiddenLayerCount) + " hidden dims, got " +
                      std::to_string(hidden_dims.size()));
  }
  MlpNetwork net;
  net.layout = layout;
  net.seed = seed;
  net.layer_dims.push_back(layout_length(layout));
  for (std::size_t dim : hidden_dims) {
    if (dim == 0) {
      throw ConfigError("hidden dims must be positive");
    }
    net.layer_dims.push_back(dim);
  }
  net.layer_dims.push_back(1);

  Rng rng(seed);
  for (std::size_t layer = 0; layer + 1 < net.layer_dims.size(); ++layer) {
    const std::size_t fan_in = net.layer_dims[layer];
    const std::size_t fan_out = net.layer_dims[layer + 1];
    Matrix w(fan_out, fan_in);
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& value : w.data) {
      value = rng.uniform(-bound, bound);
    }
    net.weights.push_back(std::move(w));
    net.biases.emplace_back(fan_out, 0.0);
  }
  return net;
}

double forward(const MlpNetwork& net, const FeatureVector& x) {
  return forward_trace(net, x).activations.back()[0];
}

double bce_loss(double p, int y) {
  const double q = clamp_prob(p);
  return y == 1 ? -std::log(q) : -std::log1p(-q);
}

Gradients backward(const MlpNetwork& net, const TrainingSet& batch) {
  if (batch.empty()) {
    throw ConfigError("cannot compute gradients over an empty batch");
  }
  Gradients grads = zero_gradients(net);
  for (const LabeledVector& sample : batch) {
    accumulate_batch(net, sample, grads);
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (std::size_t layer = 0; layer < grads.weights.size(); ++layer) {
    for (double& g : grads.weights[layer].data) {
      g *= scale;
    }
    for (double& g : grads.biases[layer]) {
      g *= scale;
    }
  }
  return grads;
}

OptimizerState make_optimizer(const MlpNetwork& net, const AdamConfig& adam) {
  OptimizerState state;
  state.adam = adam;
  for (std::size_t layer = 0; layer < net.layer_count(); ++layer) {
    state.weight_m.emplace_back(net.weights[layer].rows, net.weights[layer].cols);
    state.weight_v.emplace_back(net.weights[layer].rows, net.weights[layer].cols);
    state.bias_m.emplace_back(net.biases[layer].size(), 0.0);
    state.bias_v.emplace_back(net.biases[layer].size(), 0.0);
  }
  return state;
}

std::pair<MlpNetwork, OptimizerState> apply_update(MlpNetwork net, const Gradients& grads,
                                                   OptimizerState state) {
  adam_step(net, grads, state);
  return {std::move(net), std::move(state)};
}

TrainResult train(const TrainingSet& data, const TrainConfig& config) {
  validate_config(config);
  if (data.empty()) {
    throw ConfigError("cannot train on an empty set");
  }
  for (const LabeledVector& sample : data) {
    if (sample.second != 0 && sample.second != 1) {
      throw ConfigError("training labels must be 0 or 1");
    }
  }

  TrainResult result;
  result.network = init_network(config.layout, config.hidden_dims, config.seed);
  OptimizerState state = make_optimizer(result.network, AdamConfig{config.learning_rate});

  Rng shuffle_rng(config.seed ^ kShuffleStream);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(start + config.batch_size, order.size());
      TrainingSet batch;
      batch.reserve(stop - start);
      for (std::size_t i = start; i < stop; ++i) {
        batch.push_back(data[order[i]]);
      }
      const Gradients grads = backward(result.network, batch);
      adam_step(result.network, grads, state);
    }
    result.loss_history.push_back(mean_loss(result.network, data));
  }
  return result;
}

double mean_loss(const MlpNetwork& net, const TrainingSet& data) {
  if (data.empty()) {
    throw ConfigError("cannot compute loss over an empty set");
  }
  double total = 0.0;
  for (const LabeledVector& sample : data) {
    total += bce_loss(forward(net, sample.first), sample.second);
  }
  return total / static_cast<double>(data.size());
}

Prediction predict(const MlpNetwork& net, const FeatureVector& x, double threshold) {
  const double p = forward(net, x);
  return Prediction{p, p >= threshold ? 1 : 0};
}

}  // namespace handover

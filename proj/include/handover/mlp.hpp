#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "handover/feature.hpp"

namespace handover {

// Dense row-major matrix; rows = fan_out, cols = fan_in.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

inline constexpr std::size_t kHiddenLayerCount = 4;

// Input layer, four hidden ReLU layers, one sigmoid output unit.
struct MlpNetwork {
  Layout layout = Layout::kRelative;
  std::vector<std::size_t> layer_dims;  // input, four hidden, output
  std::vector<Matrix> weights;          // one per non-input layer
  std::vector<std::vector<double>> biases;
  std::uint64_t seed = 0;

  std::size_t layer_count() const { return weights.size(); }
};

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct OptimizerState {
  AdamConfig adam;
  std::uint64_t step_count = 0;
  std::vector<Matrix> weight_m, weight_v;
  std::vector<std::vector<double>> bias_m, bias_v;
};

enum class SplitMode { kFrame, kVideo };

const char* split_mode_name(SplitMode mode);
SplitMode split_mode_from_name(const std::string& name);

struct TrainConfig {
  Layout layout = Layout::kRelative;
  std::vector<std::size_t> hidden_dims{64, 64, 32, 16};
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  std::size_t epochs = 100;
  double threshold = 0.5;  // decision boundary on the output likelihood
  std::uint64_t seed = 0;
  bool normalize = false;  // z-score features with train-set stats
  double split_ratio = 0.8;
  SplitMode split_mode = SplitMode::kFrame;
};

void validate_config(const TrainConfig& config);

using LabeledVector = std::pair<FeatureVector, int>;
using TrainingSet = std::vector<LabeledVector>;

// Weights uniform in +-1/sqrt(fan_in), biases zero, fully seeded.
MlpNetwork init_network(Layout layout, const std::vector<std::size_t>& hidden_dims,
                        std::uint64_t seed);

// Likelihood in (0, 1).
double forward(const MlpNetwork& net, const FeatureVector& x);

// -[y ln p + (1-y) ln(1-p)] with p clamped away from {0, 1}.
double bce_loss(double p, int y);

// Gradients of the mean BCE over the batch w.r.t. every weight and bias.
Gradients backward(const MlpNetwork& net, const TrainingSet& batch);

OptimizerState make_optimizer(const MlpNetwork& net, const AdamConfig& adam);

// One bias-corrected Adam step; pure in (net, state).
std::pair<MlpNetwork, OptimizerState> apply_update(MlpNetwork net, const Gradients& grads,
                                                   OptimizerState state);

struct TrainResult {
  MlpNetwork network;
  std::vector<double> loss_history;  // end-of-epoch mean BCE over the training set
};

TrainResult train(const TrainingSet& data, const TrainConfig& config);

double mean_loss(const MlpNetwork& net, const TrainingSet& data);

struct Prediction {
  double probability = 0.0;
  int label = 0;
};

// label = 1 iff probability >= threshold.
Prediction predict(const MlpNetwork& net, const FeatureVector& x, double threshold);

}  // namespace handover

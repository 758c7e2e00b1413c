#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "handover/error.hpp"
#include "handover/mlp.hpp"
#include "handover/rng.hpp"
#include "test_util.hpp"

using namespace handover;
using namespace handover::testutil;

namespace {

FeatureVector vec26(std::vector<double> values) {
  FeatureVector x;
  x.layout = Layout::kRelative;
  x.values = std::move(values);
  x.values.resize(kRelativeLength, 0.0);
  return x;
}

// One active path: input slot 0 feeds four width-1 identity hidden layers,
// the output weight is 0.5. All constants are powers of two so every product
// in the expected gradients is exact.
MlpNetwork chain_network() {
  MlpNetwork net = init_network(Layout::kRelative, {1, 1, 1, 1}, 0);
  for (Matrix& w : net.weights) {
    for (double& v : w.data) v = 0.0;
  }
  net.weights[0].at(0, 0) = 1.0;
  for (std::size_t layer = 1; layer < 4; ++layer) net.weights[layer].at(0, 0) = 1.0;
  net.weights[4].at(0, 0) = 0.5;
  return net;
}

TrainConfig small_config() {
  TrainConfig config;
  config.hidden_dims = {8, 8, 4, 4};
  config.epochs = 5;
  config.seed = 3;
  return config;
}

}  // namespace

TEST_SUITE("mlp") {
  TEST_CASE("init_network shapes, bounds, and determinism") {
    const MlpNetwork net = init_network(Layout::kRelative, {64, 64, 32, 16}, 9);
    REQUIRE(net.layer_dims == std::vector<std::size_t>{26, 64, 64, 32, 16, 1});
    REQUIRE(net.layer_count() == 5);
    CHECK(net.layout == Layout::kRelative);
    CHECK(net.seed == 9);
    for (std::size_t layer = 0; layer < net.layer_count(); ++layer) {
      const Matrix& w = net.weights[layer];
      CHECK(w.rows == net.layer_dims[layer + 1]);
      CHECK(w.cols == net.layer_dims[layer]);
      const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols));
      for (double v : w.data) {
        CHECK(std::abs(v) <= bound);
      }
      for (double b : net.biases[layer]) CHECK(b == 0.0);
    }
    const MlpNetwork again = init_network(Layout::kRelative, {64, 64, 32, 16}, 9);
    for (std::size_t layer = 0; layer < net.layer_count(); ++layer) {
      CHECK(net.weights[layer].data == again.weights[layer].data);
    }
    const MlpNetwork other = init_network(Layout::kRelative, {64, 64, 32, 16}, 10);
    CHECK(net.weights[0].data != other.weights[0].data);

    const MlpNetwork wide = init_network(Layout::kAbsolute, {4, 4, 4, 4}, 0);
    CHECK(wide.layer_dims.front() == kAbsoluteLength);
  }

  TEST_CASE("bce_loss matches hand-computed values and clamps the extremes") {
    CHECK(bce_loss(0.5, 1) == doctest::Approx(0.6931471805599453).epsilon(1e-12));
    CHECK(bce_loss(0.5, 0) == doctest::Approx(0.6931471805599453).epsilon(1e-12));
    CHECK(bce_loss(0.9, 0) == doctest::Approx(2.302585092994046).epsilon(1e-12));
    CHECK(bce_loss(0.9, 1) == doctest::Approx(0.10536051565782628).epsilon(1e-12));
    // p is clamped to 1e-12 away from the endpoints, so -ln(1e-12) caps the loss.
    CHECK(bce_loss(0.0, 1) == doctest::Approx(27.631021115928547).epsilon(1e-12));
    // The upper clamp lands on 1 - 1e-12 as a double, a hair off the exact cap.
    CHECK(bce_loss(1.0, 0) == -std::log1p(-(1.0 - 1e-12)));
    CHECK(bce_loss(1.0, 0) == doctest::Approx(27.631021115928547).epsilon(1e-4));
    CHECK(bce_loss(0.0, 0) == doctest::Approx(0.0).epsilon(1e-9));
  }

  TEST_CASE("forward agrees with an independent reimplementation") {
    Rng rng(15);
    for (int i = 0; i < 50; ++i) {
      const FdCase fd = make_fd_case(rng, i % 2 == 0 ? Layout::kRelative : Layout::kAbsolute);
      for (const LabeledVector& sample : fd.batch) {
        const double lib = forward(fd.net, sample.first);
        const double manual = manual_forward(fd.net, sample.first);
        CHECK(lib == doctest::Approx(manual).epsilon(1e-12));
        CHECK(lib > 0.0);
        CHECK(lib < 1.0);
      }
    }
  }

  TEST_CASE("forward on the chain network is a sigmoid of half the input") {
    const MlpNetwork net = chain_network();
    const FeatureVector x = vec26({2.0});
    const double expected = 1.0 / (1.0 + std::exp(-1.0));
    CHECK(forward(net, x) == doctest::Approx(expected).epsilon(1e-12));
    // Negative inputs die at the first ReLU.
    CHECK(forward(net, vec26({-2.0})) == 0.5);
  }

  TEST_CASE("forward rejects mismatched inputs") {
    const MlpNetwork net = init_network(Layout::kRelative, {4, 4, 4, 4}, 0);
    FeatureVector wrong_layout;
    wrong_layout.layout = Layout::kAbsolute;
    wrong_layout.values.assign(kAbsoluteLength, 0.0);
    CHECK_THROWS_AS(forward(net, wrong_layout), ConfigError);
    FeatureVector wrong_width;
    wrong_width.layout = Layout::kRelative;
    wrong_width.values.assign(7, 0.0);
    CHECK_THROWS_AS(forward(net, wrong_width), ConfigError);
  }

  TEST_CASE("backward on the chain network matches the analytic gradients exactly") {
    const MlpNetwork net = chain_network();
    const FeatureVector x = vec26({2.0});
    const double p = forward(net, x);
    const double delta = p - 1.0;

    const Gradients grads = backward(net, {{x, 1}});
    CHECK(grads.biases[4][0] == delta);
    CHECK(grads.weights[4].at(0, 0) == delta * 2.0);
    for (std::size_t layer = 0; layer < 4; ++layer) {
      CHECK(grads.biases[layer][0] == delta * 0.5);
      // Activations along the identity chain all equal the input value 2.
      CHECK(grads.weights[layer].at(0, 0) == delta * 0.5 * 2.0);
    }
    // Inactive input slots contribute zero.
    for (std::size_t c = 1; c < kRelativeLength; ++c) {
      CHECK(grads.weights[0].at(0, c) == 0.0);
    }

    CHECK_THROWS_AS(backward(net, {}), ConfigError);
  }

  TEST_CASE("backward averages over the batch") {
    const MlpNetwork net = chain_network();
    const FeatureVector x = vec26({2.0});
    const Gradients one = backward(net, {{x, 1}});
    const Gradients two = backward(net, {{x, 1}, {x, 1}});
    CHECK(two.biases[4][0] == doctest::Approx(one.biases[4][0]).epsilon(1e-15));
    const Gradients mixed = backward(net, {{x, 1}, {x, 0}});
    // (p-1 + p-0)/2 = p - 0.5
    const double p = forward(net, x);
    CHECK(mixed.biases[4][0] == doctest::Approx(p - 0.5).epsilon(1e-12));
  }

  TEST_CASE("gradients match central finite differences") {
    Rng rng(99);
    for (int i = 0; i < 10; ++i) {
      const FdCase fd = make_fd_case(rng, i % 2 == 0 ? Layout::kRelative : Layout::kAbsolute);
      const double err = max_gradient_error(fd.net, fd.batch);
      CHECK(err < 1e-4);
    }
  }

  TEST_CASE("one Adam step from a zero state moves by lr * g / (|g| + eps)") {
    const MlpNetwork net = init_network(Layout::kRelative, {2, 2, 2, 2}, 4);
    Gradients grads;
    grads.weights.reserve(net.layer_count());
    grads.biases.reserve(net.layer_count());
    for (std::size_t layer = 0; layer < net.layer_count(); ++layer) {
      grads.weights.emplace_back(net.weights[layer].rows, net.weights[layer].cols);
      grads.biases.emplace_back(net.biases[layer].size(), 0.0);
    }
    grads.weights[0].at(0, 0) = 3.0;
    grads.biases[1][1] = -2.0;

    const AdamConfig adam;
    auto [updated, state] = apply_update(net, grads, make_optimizer(net, adam));
    CHECK(state.step_count == 1);

    const double w_expected = net.weights[0].at(0, 0) - 1e-3 * 3.0 / (3.0 + 1e-8);
    CHECK(updated.weights[0].at(0, 0) == doctest::Approx(w_expected).epsilon(1e-12));
    const double b_expected = 0.0 + 1e-3 * 2.0 / (2.0 + 1e-8);
    CHECK(updated.biases[1][1] == doctest::Approx(b_expected).epsilon(1e-12));

    // Zero-gradient parameters stay bitwise identical.
    CHECK(updated.weights[0].at(1, 1) == net.weights[0].at(1, 1));
    CHECK(updated.weights[2].data == net.weights[2].data);
    CHECK(updated.biases[0] == net.biases[0]);

    // First-moment state carries (1 - beta1) * g.
    CHECK(state.weight_m[0].at(0, 0) == doctest::Approx(0.1 * 3.0).epsilon(1e-12));
    CHECK(state.weight_v[0].at(0, 0) == doctest::Approx(0.001 * 9.0).epsilon(1e-12));
  }

  TEST_CASE("train with one sample and one epoch equals one manual update") {
    TrainConfig config = small_config();
    config.epochs = 1;
    config.batch_size = 32;
    const TrainingSet data{{vec26({1.5, -0.5, 2.0}), 1}};

    const TrainResult result = train(data, config);

    MlpNetwork manual = init_network(config.layout, config.hidden_dims, config.seed);
    const Gradients grads = backward(manual, data);
    auto [updated, state] =
        apply_update(manual, grads, make_optimizer(manual, AdamConfig{config.learning_rate}));

    REQUIRE(result.loss_history.size() == 1);
    for (std::size_t layer = 0; layer < updated.layer_count(); ++layer) {
      CHECK(result.network.weights[layer].data == updated.weights[layer].data);
      CHECK(result.network.biases[layer] == updated.biases[layer]);
    }
    CHECK(result.loss_history[0] == mean_loss(result.network, data));
  }

  TEST_CASE("train is deterministic and fills the loss history") {
    Rng rng(31);
    TrainingSet data;
    for (std::size_t i = 0; i < 64; ++i) {
      FeatureVector x = vec26({});
      for (double& v : x.values) v = rng.uniform(-1.0, 1.0);
      data.emplace_back(std::move(x), static_cast<int>(rng.index(2)));
    }
    const TrainConfig config = small_config();
    const TrainResult a = train(data, config);
    const TrainResult b = train(data, config);
    REQUIRE(a.loss_history.size() == config.epochs);
    CHECK(a.loss_history == b.loss_history);
    for (std::size_t layer = 0; layer < a.network.layer_count(); ++layer) {
      CHECK(a.network.weights[layer].data == b.network.weights[layer].data);
    }
    TrainConfig reseeded = config;
    reseeded.seed = config.seed + 1;
    const TrainResult c = train(data, reseeded);
    CHECK(a.loss_history != c.loss_history);
  }

  TEST_CASE("train drives a separable toy set to near-zero loss") {
    Rng rng(5);
    TrainingSet data;
    for (std::size_t i = 0; i < 200; ++i) {
      FeatureVector x = vec26({});
      for (double& v : x.values) v = rng.uniform(-1.0, 1.0);
      const int label = x.values[0] > 0.0 ? 1 : 0;
      data.emplace_back(std::move(x), label);
    }
    TrainConfig config = small_config();
    config.epochs = 200;
    const TrainResult result = train(data, config);
    REQUIRE(result.loss_history.size() == 200);
    CHECK(result.loss_history.back() < 0.05);
    CHECK(result.loss_history.back() < result.loss_history.front());
  }

  TEST_CASE("train validates labels and rejects empty input") {
    const TrainConfig config = small_config();
    CHECK_THROWS_AS(train({}, config), ConfigError);
    CHECK_THROWS_AS(train({{vec26({1.0}), 2}}, config), ConfigError);
  }

  TEST_CASE("predict applies the threshold as p >= t") {
    MlpNetwork net = init_network(Layout::kRelative, {2, 2, 2, 2}, 0);
    for (Matrix& w : net.weights) {
      for (double& v : w.data) v = 0.0;
    }
    // All-zero weights leave the output sigmoid at exactly 0.5.
    const FeatureVector x = vec26({1.0, 2.0});
    const Prediction at = predict(net, x, 0.5);
    CHECK(at.probability == 0.5);
    CHECK(at.label == 1);
    const Prediction above = predict(net, x, 0.500001);
    CHECK(above.label == 0);
    const Prediction below = predict(net, x, 0.25);
    CHECK(below.label == 1);
  }

  TEST_CASE("validate_config rejects each bad field") {
    const auto bad = [](auto mutate) {
      TrainConfig config;
      mutate(config);
      CHECK_THROWS_AS(validate_config(config), ConfigError);
    };
    CHECK_NOTHROW(validate_config(TrainConfig{}));
    bad([](TrainConfig& c) { c.hidden_dims = {64, 64, 32}; });
    bad([](TrainConfig& c) { c.hidden_dims = {64, 64, 32, 16, 8}; });
    bad([](TrainConfig& c) { c.hidden_dims = {64, 0, 32, 16}; });
    bad([](TrainConfig& c) { c.learning_rate = 0.0; });
    bad([](TrainConfig& c) { c.learning_rate = -1e-3; });
    bad([](TrainConfig& c) { c.learning_rate = std::numeric_limits<double>::infinity(); });
    bad([](TrainConfig& c) { c.batch_size = 0; });
    bad([](TrainConfig& c) { c.epochs = 0; });
    bad([](TrainConfig& c) { c.threshold = 0.0; });
    bad([](TrainConfig& c) { c.threshold = 1.0; });
    bad([](TrainConfig& c) { c.split_ratio = 0.0; });
    bad([](TrainConfig& c) { c.split_ratio = 1.0; });
  }

  TEST_CASE("split mode names round trip") {
    CHECK(split_mode_from_name("frame") == SplitMode::kFrame);
    CHECK(split_mode_from_name("video") == SplitMode::kVideo);
    CHECK(std::string(split_mode_name(SplitMode::kFrame)) == "frame");
    CHECK(std::string(split_mode_name(SplitMode::kVideo)) == "video");
    CHECK_THROWS_AS(split_mode_from_name("hybrid"), ConfigError);
  }
}

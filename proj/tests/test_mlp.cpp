#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "kanlab/mlp/mlp.hpp"
#include "oracles.hpp"

using namespace kanlab;
using namespace kanlab::mlp;

namespace {

MlpNetwork random_mlp(std::mt19937_64& gen, std::vector<int> shape,
                      Activation hidden) {
  Rng rng(gen());
  MlpNetwork net = make_mlp(shape, hidden, rng);
  std::vector<double> params = get_params(net);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (double& v : params) v = U(gen);
  set_params(net, params);
  return net;
}

}  // namespace

TEST_CASE("activations and their derivatives") {
  CHECK(apply_activation(Activation::identity, -0.7) == -0.7);
  CHECK(activation_deriv(Activation::identity, 3.0) == 1.0);
  CHECK(apply_activation(Activation::relu, -2.0) == 0.0);
  CHECK(apply_activation(Activation::relu, 2.5) == 2.5);
  CHECK(activation_deriv(Activation::relu, -2.0) == 0.0);
  CHECK(activation_deriv(Activation::relu, 2.0) == 1.0);
  CHECK(activation_deriv(Activation::relu, 0.0) == 0.0);  // subgradient pick
  CHECK(apply_activation(Activation::tanh, 0.5) == std::tanh(0.5));
  const double th = std::tanh(0.5);
  CHECK(activation_deriv(Activation::tanh, 0.5) ==
        doctest::Approx(1.0 - th * th).epsilon(1e-15));
  CHECK(activation_name(Activation::relu) == "relu");
  CHECK(activation_from_name("tanh") == Activation::tanh);
  CHECK_THROWS_AS(activation_from_name("swish"), std::domain_error);
}

TEST_CASE("perceptron_forward computes act(w.x + b)") {
  Perceptron p;
  p.weights = {0.5, -1.0};
  p.bias = 0.25;
  p.activation = Activation::tanh;
  const std::vector<double> x{1.0, 2.0};
  CHECK(perceptron_forward(p, x) ==
        doctest::Approx(std::tanh(0.5 - 2.0 + 0.25)).epsilon(1e-15));
  p.activation = Activation::identity;
  CHECK(perceptron_forward(p, x) == doctest::Approx(-1.25).epsilon(1e-15));
  CHECK_THROWS_AS(perceptron_forward(p, std::vector<double>{1.0}),
                  std::domain_error);
}

TEST_CASE("mlp_forward matches the per-neuron oracle") {
  std::mt19937_64 gen(97);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> shape{1 + static_cast<int>(gen() % 4)};
    const int depth = 1 + static_cast<int>(gen() % 3);
    for (int l = 0; l < depth; ++l)
      shape.push_back(1 + static_cast<int>(gen() % 5));
    const Activation act = trial % 2 == 0 ? Activation::tanh : Activation::relu;
    const MlpNetwork net = random_mlp(gen, shape, act);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    std::vector<double> x(static_cast<std::size_t>(shape.front()));
    for (double& v : x) v = U(gen);
    const std::vector<double> got = mlp_forward(net, x);
    const std::vector<double> want = oracle::brute_mlp_forward(net, x);
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < got.size(); ++k)
      CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-14));
  }
}

TEST_CASE("final layer is linear, hidden layers use the chosen activation") {
  Rng rng(3);
  const MlpNetwork net = make_mlp({1, 4, 1}, Activation::tanh, rng);
  CHECK(net.layers[0].activation == Activation::tanh);
  CHECK(net.layers[1].activation == Activation::identity);
  // A linear output can exceed tanh's range.
  MlpNetwork big = net;
  std::vector<double> params = get_params(big);
  for (double& v : params) v = 3.0;
  set_params(big, params);
  const std::vector<double> out = mlp_forward(big, std::vector<double>{1.0});
  CHECK(std::abs(out[0]) > 1.0);
}

TEST_CASE("mlp_forward_batch is bit-identical to per-sample forward") {
  std::mt19937_64 gen(101);
  const MlpNetwork net = random_mlp(gen, {3, 6, 2}, Activation::tanh);
  const int n = 7;
  std::vector<double> inputs(static_cast<std::size_t>(n) * 3);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (double& v : inputs) v = U(gen);
  const std::vector<double> batch = mlp_forward_batch(net, inputs, n);
  for (int s = 0; s < n; ++s) {
    const std::vector<double> one = mlp_forward(
        net, std::span<const double>(inputs.data() + 3 * s, 3));
    for (int j = 0; j < 2; ++j)
      CHECK(batch[static_cast<std::size_t>(s) * 2 + j] ==
            one[static_cast<std::size_t>(j)]);
  }
}

TEST_CASE("make_mlp validates, seeds, and zeroes biases") {
  Rng rng(1);
  CHECK_THROWS_AS(make_mlp({4}, Activation::tanh, rng), std::domain_error);
  CHECK_THROWS_AS(make_mlp({2, -1, 1}, Activation::tanh, rng),
                  std::domain_error);
  Rng a(10), b(10);
  const MlpNetwork n1 = make_mlp({2, 5, 1}, Activation::relu, a);
  const MlpNetwork n2 = make_mlp({2, 5, 1}, Activation::relu, b);
  CHECK(get_params(n1) == get_params(n2));
  for (const MlpLayer& layer : n1.layers) {
    const double bound = 1.0 / std::sqrt(layer.n_in) + 1e-15;
    for (double w : layer.weights) CHECK(std::abs(w) <= bound);
    for (double bia : layer.biases) CHECK(bia == 0.0);
  }
}

TEST_CASE("mlp param round trip preserves the network") {
  std::mt19937_64 gen(103);
  MlpNetwork net = random_mlp(gen, {2, 4, 2}, Activation::tanh);
  CHECK(mlp_param_count(net) == get_params(net).size());
  CHECK(mlp_param_count(net) == (2 + 1) * 4 + (4 + 1) * 2);
  const std::vector<double> params = get_params(net);
  const std::vector<double> x{0.3, -0.8};
  const std::vector<double> before = mlp_forward(net, x);
  std::vector<double> other(params.size(), 0.1);
  set_params(net, other);
  CHECK(mlp_forward(net, x) != before);
  set_params(net, params);
  CHECK(mlp_forward(net, x) == before);
  other.pop_back();
  CHECK_THROWS_AS(set_params(net, other), std::domain_error);
}

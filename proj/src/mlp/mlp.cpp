#include "kanlab/mlp/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "kanlab/common.hpp"

namespace kanlab::mlp {

double apply_activation(Activation a, double z) {
  switch (a) {
    case Activation::identity:
      return z;
    case Activation::relu:
      return z > 0.0 ? z : 0.0;
    case Activation::tanh:
      return std::tanh(z);
  }
  expect(false, "apply_activation: unknown activation");
  return 0.0;
}

double activation_deriv(Activation a, double z) {
  switch (a) {
    case Activation::identity:
      return 1.0;
    case Activation::relu:
      // Subgradient 0 at the kink.
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: {
      const double th = std::tanh(z);
      return 1.0 - th * th;
    }
  }
  expect(false, "activation_deriv: unknown activation");
  return 0.0;
}

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::identity:
      return "identity";
    case Activation::relu:
      return "relu";
    case Activation::tanh:
      return "tanh";
  }
  expect(false, "activation_name: unknown activation");
  return {};
}

Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  expect(false, "unknown activation name: " + name);
  return Activation::identity;
}

double perceptron_forward(const Perceptron& p, std::span<const double> x) {
  expect(p.weights.size() == x.size(),
         "perceptron_forward: input size mismatch");
  double z = p.bias;
  for (std::size_t i = 0; i < x.size(); ++i)
    z = z + p.weights[i] * x[i];
  return apply_activation(p.activation, z);
}

namespace {

// z_j = b_j + sum_i w_ji x_i accumulated in ascending i, then the
// activation; shared by the single and batched paths so they agree bitwise.
void layer_forward_into(const MlpLayer& layer, const double* x, double* out) {
  for (int j = 0; j < layer.n_out; ++j) {
    double z = layer.biases[static_cast<std::size_t>(j)];
    const double* w = layer.weights.data() + static_cast<std::size_t>(j) * layer.n_in;
    for (int i = 0; i < layer.n_in; ++i) z = z + w[i] * x[i];
    out[j] = apply_activation(layer.activation, z);
  }
}

}  // namespace

MlpNetwork make_mlp(const std::vector<int>& shape, Activation hidden,
                    Rng& rng) {
  expect(shape.size() >= 2,
         "make_mlp: shape needs at least input and output widths");
  for (int w : shape) expect(w >= 1, "make_mlp: layer widths must be >= 1");
  MlpNetwork net;
  net.shape = shape;
  net.layers.reserve(shape.size() - 1);
  for (std::size_t l = 0; l + 1 < shape.size(); ++l) {
    MlpLayer layer;
    layer.n_in = shape[l];
    layer.n_out = shape[l + 1];
    layer.activation =
        (l + 2 == shape.size()) ? Activation::identity : hidden;
    const double scale = 1.0 / std::sqrt(static_cast<double>(layer.n_in));
    layer.weights.resize(static_cast<std::size_t>(layer.n_in) * layer.n_out);
    for (double& w : layer.weights) w = rng.uniform(-scale, scale);
    layer.biases.assign(static_cast<std::size_t>(layer.n_out), 0.0);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

std::vector<double> mlp_forward(const MlpNetwork& net,
                                std::span<const double> x) {
  expect(!net.layers.empty(), "mlp_forward: network has no layers");
  expect(static_cast<int>(x.size()) == net.shape.front(),
         "mlp_forward: input size mismatch");
  std::vector<double> cur(x.begin(), x.end());
  std::vector<double> nxt;
  for (const MlpLayer& layer : net.layers) {
    nxt.resize(static_cast<std::size_t>(layer.n_out));
    layer_forward_into(layer, cur.data(), nxt.data());
    std::swap(cur, nxt);
  }
  return cur;
}

std::vector<double> mlp_forward_batch(const MlpNetwork& net,
                                      std::span<const double> inputs,
                                      int n_samples) {
  expect(!net.layers.empty(), "mlp_forward_batch: network has no layers");
  expect(n_samples >= 0, "mlp_forward_batch: negative sample count");
  const int n0 = net.shape.front();
  expect(inputs.size() == static_cast<std::size_t>(n_samples) * n0,
         "mlp_forward_batch: input size mismatch");
  if (n_samples == 0) return {};

  int max_w = 0;
  for (int w : net.shape) max_w = std::max(max_w, w);
  std::vector<double> cur(static_cast<std::size_t>(max_w));
  std::vector<double> nxt(static_cast<std::size_t>(max_w));
  const int n_out = net.shape.back();
  std::vector<double> out(static_cast<std::size_t>(n_samples) * n_out);
  for (int s = 0; s < n_samples; ++s) {
    const double* row = inputs.data() + static_cast<std::size_t>(s) * n0;
    std::copy(row, row + n0, cur.begin());
    for (const MlpLayer& layer : net.layers) {
      layer_forward_into(layer, cur.data(), nxt.data());
      std::swap(cur, nxt);
    }
    std::copy(cur.begin(), cur.begin() + n_out,
              out.begin() + static_cast<std::size_t>(s) * n_out);
  }
  return out;
}

std::size_t mlp_param_count(const MlpNetwork& net) {
  std::size_t total = 0;
  for (const MlpLayer& layer : net.layers)
    total += layer.weights.size() + layer.biases.size();
  return total;
}

std::vector<double> get_params(const MlpNetwork& net) {
  std::vector<double> params;
  params.reserve(mlp_param_count(net));
  for (const MlpLayer& layer : net.layers) {
    params.insert(params.end(), layer.weights.begin(), layer.weights.end());
    params.insert(params.end(), layer.biases.begin(), layer.biases.end());
  }
  return params;
}

void set_params(MlpNetwork& net, std::span<const double> params) {
  expect(params.size() == mlp_param_count(net),
         "set_params: parameter count mismatch");
  std::size_t pos = 0;
  for (MlpLayer& layer : net.layers) {
    std::copy(params.begin() + pos, params.begin() + pos + layer.weights.size(),
              layer.weights.begin());
    pos += layer.weights.size();
    std::copy(params.begin() + pos, params.begin() + pos + layer.biases.size(),
              layer.biases.begin());
    pos += layer.biases.size();
  }
}

}  // namespace kanlab::mlp

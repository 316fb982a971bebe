#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kanlab/rng.hpp"

namespace kanlab::mlp {

enum class Activation { identity, relu, tanh };

double apply_activation(Activation a, double z);
double activation_deriv(Activation a, double z);  // derivative at pre-activation z
std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

struct Perceptron {
  std::vector<double> weights;
  double bias = 0.0;
  Activation activation = Activation::tanh;
};

// g(sum_i w_i x_i + b)
double perceptron_forward(const Perceptron& p, std::span<const double> x);

struct MlpLayer {
  int n_in = 0;
  int n_out = 0;
  std::vector<double> weights;  // row-major, weights[j * n_in + i]
  std::vector<double> biases;   // n_out
  Activation activation = Activation::identity;
};

struct MlpNetwork {
  std::vector<int> shape;
  std::vector<MlpLayer> layers;
};

// Hidden layers use the given activation (tanh default, matching the smooth
// lab targets); the output layer is linear.  Weights i.i.d. uniform in
// +-1/sqrt(n_in) (drawn layer by layer, row-major), biases zero.
MlpNetwork make_mlp(const std::vector<int>& shape, Activation hidden,
                    Rng& rng);

std::vector<double> mlp_forward(const MlpNetwork& net,
                                std::span<const double> x);

// Batched forward over sample-major rows; per-sample results identical to
// mlp_forward.
std::vector<double> mlp_forward_batch(const MlpNetwork& net,
                                      std::span<const double> inputs,
                                      int n_samples);

// sum over layers of (n_in * n_out + n_out)
std::size_t mlp_param_count(const MlpNetwork& net);

// Flat parameter order: layer by layer, weight matrix row-major, then biases.
std::vector<double> get_params(const MlpNetwork& net);
void set_params(MlpNetwork& net, std::span<const double> params);

}  // namespace kanlab::mlp

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kanlab/interp/bspline.hpp"
#include "kanlab/rng.hpp"

namespace kanlab::kan {

// Shared knot configuration for every edge of a network.
struct EdgeConfig {
  int degree = 3;
  int grid = 5;
  double domain_min = -1.0;
  double domain_max = 1.0;
  // Optional per-edge affine term phi(x) = spline(x) + w*x.  Disabled by
  // default so an edge is pure spline; the linear term is the practical
  // escape hatch for deep stacks whose activations drift.
  bool linear_enabled = false;
};

struct Edge {
  interp::Spline1D spline;
  double linear_weight = 0.0;
  bool linear_enabled = false;
};

// phi(x): clamped spline value plus the optional linear term (which uses the
// raw, unclamped x).
double edge_eval(const Edge& e, double x);

// Value and derivative of phi w.r.t. its input; the spline part contributes
// zero derivative outside the grid domain.
interp::ValueDeriv edge_eval_deriv(const Edge& e, double x);

// Dense n_out x n_in matrix of edges; edges[j * n_in + i] connects input i
// to output j.  All edges share one knot configuration.
struct KanLayer {
  int n_in = 0;
  int n_out = 0;
  std::vector<Edge> edges;

  const Edge& edge(int j, int i) const {
    return edges[static_cast<std::size_t>(j) * n_in + i];
  }
  Edge& edge(int j, int i) {
    return edges[static_cast<std::size_t>(j) * n_in + i];
  }
};

// Per-layer values recorded in a forward pass: the inputs x_{l,i} feeding the
// layer and the per-edge outputs, with output j equal to the row sum of the
// edge outputs.
struct LayerActivations {
  std::vector<double> inputs;       // n_in
  std::vector<double> edge_values;  // n_out * n_in, same indexing as edges
};

struct ActivationRecord {
  std::vector<LayerActivations> layers;
  std::vector<double> output;
};

// out[j] = sum_i phi_{j,i}(x[i]), inputs summed in ascending i order.
std::vector<double> layer_forward(const KanLayer& layer,
                                  std::span<const double> x,
                                  LayerActivations* record = nullptr);

struct KanNetwork {
  std::vector<int> shape;  // [n_0, ..., n_L]
  EdgeConfig config;
  std::vector<KanLayer> layers;
};

// Fresh network with spline coefficients i.i.d. uniform in
// +-0.1/sqrt(n_in) (drawn layer by layer, then output index, input index,
// coefficient index) and linear weights zero.
KanNetwork make_kan(const std::vector<int>& shape, const EdgeConfig& config,
                    Rng& rng);

std::vector<double> network_forward(const KanNetwork& net,
                                    std::span<const double> x,
                                    ActivationRecord* record = nullptr);

// Batched forward pass over sample-major rows (sample s occupies
// inputs[s*n_0 .. s*n_0+n_0)).  Uses the runtime-dispatched kernels; the
// per-sample results are identical to network_forward.
std::vector<double> network_forward_batch(const KanNetwork& net,
                                          std::span<const double> inputs,
                                          int n_samples);

// [n, 2n+1, 1]
std::vector<int> kat_shape(int n);

// Total trainable scalars: per edge, coefficient count plus one if the
// linear term is enabled.
std::size_t param_count(const KanNetwork& net);

// Flat parameter vector in a fixed order (layer, then output index, then
// input index; per edge the spline coefficients followed by the linear
// weight when enabled).  Gradient vectors use the same order.
std::vector<double> get_params(const KanNetwork& net);
void set_params(KanNetwork& net, std::span<const double> params);

}  // namespace kanlab::kan

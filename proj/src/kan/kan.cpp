#include "kanlab/kan/kan.hpp"

#include <algorithm>
#include <cmath>

#include "kanlab/common.hpp"
#include "kanlab/kernels/kernels.hpp"

namespace kanlab::kan {

double edge_eval(const Edge& e, double x) {
  const double v = interp::spline_eval(e.spline, x);
  if (!e.linear_enabled) return v;
  return v + e.linear_weight * x;
}

interp::ValueDeriv edge_eval_deriv(const Edge& e, double x) {
  interp::ValueDeriv vd = interp::spline_eval_deriv(e.spline, x);
  if (e.linear_enabled) {
    vd.value = vd.value + e.linear_weight * x;
    vd.deriv = vd.deriv + e.linear_weight;
  }
  return vd;
}

std::vector<double> layer_forward(const KanLayer& layer,
                                  std::span<const double> x,
                                  LayerActivations* record) {
  expect(static_cast<int>(x.size()) == layer.n_in,
         "layer_forward: input size mismatch");
  if (record) {
    record->inputs.assign(x.begin(), x.end());
    record->edge_values.assign(
        static_cast<std::size_t>(layer.n_out) * layer.n_in, 0.0);
  }
  std::vector<double> out(static_cast<std::size_t>(layer.n_out));
  for (int j = 0; j < layer.n_out; ++j) {
    double acc = 0.0;
    for (int i = 0; i < layer.n_in; ++i) {
      const double v =
          edge_eval(layer.edge(j, i), x[static_cast<std::size_t>(i)]);
      if (record)
        record->edge_values[static_cast<std::size_t>(j) * layer.n_in + i] = v;
      acc = acc + v;
    }
    out[static_cast<std::size_t>(j)] = acc;
  }
  return out;
}

KanNetwork make_kan(const std::vector<int>& shape, const EdgeConfig& config,
                    Rng& rng) {
  expect(shape.size() >= 2,
         "make_kan: shape needs at least input and output widths");
  for (int w : shape) expect(w >= 1, "make_kan: layer widths must be >= 1");
  expect(config.degree >= 0, "make_kan: degree must be >= 0");
  expect(config.grid >= 1, "make_kan: grid size must be >= 1");
  expect(config.domain_min < config.domain_max,
         "make_kan: domain must be non-empty");
  const interp::KnotVector kv = interp::uniform_knots(
      config.domain_min, config.domain_max, config.grid, config.degree);
  const int nb = kv.basis_count();

  KanNetwork net;
  net.shape = shape;
  net.config = config;
  net.layers.reserve(shape.size() - 1);
  for (std::size_t l = 0; l + 1 < shape.size(); ++l) {
    KanLayer layer;
    layer.n_in = shape[l];
    layer.n_out = shape[l + 1];
    layer.edges.reserve(static_cast<std::size_t>(layer.n_in) * layer.n_out);
    const double scale = 0.1 / std::sqrt(static_cast<double>(layer.n_in));
    for (int j = 0; j < layer.n_out; ++j) {
      for (int i = 0; i < layer.n_in; ++i) {
        std::vector<double> coeffs(static_cast<std::size_t>(nb));
        for (double& c : coeffs) c = rng.uniform(-scale, scale);
        layer.edges.push_back(Edge{interp::Spline1D(kv, std::move(coeffs)),
                                   0.0, config.linear_enabled});
      }
    }
    net.layers.push_back(std::move(layer));
  }
  return net;
}

std::vector<double> network_forward(const KanNetwork& net,
                                    std::span<const double> x,
                                    ActivationRecord* record) {
  expect(!net.layers.empty(), "network_forward: network has no layers");
  expect(static_cast<int>(x.size()) == net.shape.front(),
         "network_forward: input size mismatch");
  std::vector<double> cur(x.begin(), x.end());
  if (record) {
    record->layers.clear();
    record->layers.resize(net.layers.size());
  }
  for (std::size_t l = 0; l < net.layers.size(); ++l)
    cur = layer_forward(net.layers[l], cur,
                        record ? &record->layers[l] : nullptr);
  if (record) record->output = cur;
  return cur;
}

std::vector<double> network_forward_batch(const KanNetwork& net,
                                          std::span<const double> inputs,
                                          int n_samples) {
  expect(!net.layers.empty(), "network_forward_batch: network has no layers");
  expect(n_samples >= 0, "network_forward_batch: negative sample count");
  const int n0 = net.shape.front();
  expect(inputs.size() == static_cast<std::size_t>(n_samples) * n0,
         "network_forward_batch: input size mismatch");
  if (n_samples == 0) return {};
  const std::size_t n = static_cast<std::size_t>(n_samples);

  int max_w = 0;
  for (int w : net.shape) max_w = std::max(max_w, w);

  // Node-major activation buffers: node i of sample s lives at [i*n + s], so
  // each edge evaluation sees one contiguous input array.
  std::vector<double> cur(static_cast<std::size_t>(max_w) * n);
  std::vector<double> nxt(static_cast<std::size_t>(max_w) * n);
  for (int i = 0; i < n0; ++i)
    for (std::size_t s = 0; s < n; ++s)
      cur[static_cast<std::size_t>(i) * n + s] =
          inputs[s * static_cast<std::size_t>(n0) + i];

  const kernels::Ops& K = kernels::active();
  std::vector<int> spans(n);
  std::vector<double> tmp(n);

  for (const KanLayer& layer : net.layers) {
    const interp::KnotVector& kv = layer.edges.front().spline.knots;
    const double* t = kv.knots().data();
    const int nk = static_cast<int>(kv.knots().size());
    const int p = kv.degree();
    std::vector<double> windows(static_cast<std::size_t>(p + 1) * n);
    std::fill(nxt.begin(),
              nxt.begin() + static_cast<std::size_t>(layer.n_out) * n, 0.0);
    for (int i = 0; i < layer.n_in; ++i) {
      const double* xs = cur.data() + static_cast<std::size_t>(i) * n;
      // One basis triangle per input node, shared by all n_out edges.
      K.basis_window_batch(t, nk, p, xs, n_samples, spans.data(),
                           windows.data());
      for (int j = 0; j < layer.n_out; ++j) {
        const Edge& e = layer.edge(j, i);
        // The edge value is materialized before being added to the row sum
        // so the accumulation rounding matches the single-sample path.
        std::fill(tmp.begin(), tmp.end(), 0.0);
        K.window_dot_accum(e.spline.coeffs.data(), spans.data(),
                           windows.data(), p, n_samples, tmp.data());
        if (e.linear_enabled)
          K.axpy(e.linear_weight, xs, tmp.data(), n_samples);
        K.axpy(1.0, tmp.data(),
               nxt.data() + static_cast<std::size_t>(j) * n, n_samples);
      }
    }
    std::swap(cur, nxt);
  }

  const int n_out = net.shape.back();
  std::vector<double> out(n * static_cast<std::size_t>(n_out));
  for (std::size_t s = 0; s < n; ++s)
    for (int j = 0; j < n_out; ++j)
      out[s * static_cast<std::size_t>(n_out) + j] =
          cur[static_cast<std::size_t>(j) * n + s];
  return out;
}

std::vector<int> kat_shape(int n) {
  expect(n >= 1, "kat_shape: input dimension must be >= 1");
  return {n, 2 * n + 1, 1};
}

std::size_t param_count(const KanNetwork& net) {
  std::size_t total = 0;
  for (const KanLayer& layer : net.layers)
    for (const Edge& e : layer.edges)
      total += e.spline.coeffs.size() + (e.linear_enabled ? 1 : 0);
  return total;
}

std::vector<double> get_params(const KanNetwork& net) {
  std::vector<double> params;
  params.reserve(param_count(net));
  for (const KanLayer& layer : net.layers)
    for (const Edge& e : layer.edges) {
      params.insert(params.end(), e.spline.coeffs.begin(),
                    e.spline.coeffs.end());
      if (e.linear_enabled) params.push_back(e.linear_weight);
    }
  return params;
}

void set_params(KanNetwork& net, std::span<const double> params) {
  expect(params.size() == param_count(net),
         "set_params: parameter count mismatch");
  std::size_t pos = 0;
  for (KanLayer& layer : net.layers)
    for (Edge& e : layer.edges) {
      std::copy(params.begin() + pos, params.begin() + pos + e.spline.coeffs.size(),
                e.spline.coeffs.begin());
      pos += e.spline.coeffs.size();
      if (e.linear_enabled) e.linear_weight = params[pos++];
    }
}

}  // namespace kanlab::kan

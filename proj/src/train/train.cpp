#include "kanlab/train/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <type_traits>

#include "kanlab/common.hpp"
#include "kanlab/kernels/kernels.hpp"

namespace kanlab::train {

void validate_dataset(const Dataset& data) {
  expect(data.input_dim >= 1, "dataset: input_dim must be >= 1");
  expect(data.target_dim >= 1, "dataset: target_dim must be >= 1");
  expect(data.inputs.size() % static_cast<std::size_t>(data.input_dim) == 0,
         "dataset: inputs not a whole number of rows");
  const std::size_t n = data.inputs.size() / data.input_dim;
  expect(data.targets.size() == n * static_cast<std::size_t>(data.target_dim),
         "dataset: target rows do not match input rows");
  expect(data.tags.empty() || data.tags.size() == n,
         "dataset: tags must be empty or one per sample");
  for (double v : data.inputs)
    expect(std::isfinite(v), "dataset: non-finite input value");
  for (double v : data.targets)
    expect(std::isfinite(v), "dataset: non-finite target value");
  for (std::uint8_t t : data.tags)
    expect(t == 0 || t == 1, "dataset: tags must be 0 (train) or 1 (test)");
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data) {
  validate_dataset(data);
  Dataset tr, te;
  tr.input_dim = te.input_dim = data.input_dim;
  tr.target_dim = te.target_dim = data.target_dim;
  if (data.tags.empty()) {
    tr.inputs = data.inputs;
    tr.targets = data.targets;
    return {std::move(tr), std::move(te)};
  }
  const int n = data.size();
  for (int s = 0; s < n; ++s) {
    Dataset& dst = data.tags[static_cast<std::size_t>(s)] == 0 ? tr : te;
    const double* in = data.inputs.data() + static_cast<std::size_t>(s) * data.input_dim;
    const double* tg = data.targets.data() + static_cast<std::size_t>(s) * data.target_dim;
    dst.inputs.insert(dst.inputs.end(), in, in + data.input_dim);
    dst.targets.insert(dst.targets.end(), tg, tg + data.target_dim);
  }
  return {std::move(tr), std::move(te)};
}

double apply_transform(const DimTransform& t, double x) {
  if (t.degenerate) return 0.0;
  return (x - t.center) / t.halfwidth;
}

std::vector<double> apply_transform(const NormalizeTransform& t,
                                    std::span<const double> row) {
  expect(row.size() == t.dims.size(),
         "apply_transform: row width does not match the transform");
  std::vector<double> out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i)
    out[i] = apply_transform(t.dims[i], row[i]);
  return out;
}

Dataset apply_transform(const NormalizeTransform& t, const Dataset& data) {
  expect(static_cast<std::size_t>(data.input_dim) == t.dims.size(),
         "apply_transform: dataset width does not match the transform");
  Dataset out = data;
  const int n = data.size();
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < data.input_dim; ++i) {
      double& v = out.inputs[static_cast<std::size_t>(s) * data.input_dim + i];
      v = apply_transform(t.dims[static_cast<std::size_t>(i)], v);
    }
  return out;
}

Dataset normalize_inputs(const Dataset& data, NormalizeTransform& transform) {
  validate_dataset(data);
  expect(data.size() >= 1, "normalize_inputs: empty dataset");
  transform.dims.assign(static_cast<std::size_t>(data.input_dim), {});
  transform.any_degenerate = false;
  const int n = data.size();
  for (int i = 0; i < data.input_dim; ++i) {
    double lo = data.inputs[static_cast<std::size_t>(i)];
    double hi = lo;
    for (int s = 1; s < n; ++s) {
      const double v =
          data.inputs[static_cast<std::size_t>(s) * data.input_dim + i];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    DimTransform& t = transform.dims[static_cast<std::size_t>(i)];
    t.center = (lo + hi) / 2.0;
    t.halfwidth = (hi - lo) / 2.0;
    t.degenerate = t.halfwidth == 0.0;
    if (t.degenerate) {
      t.halfwidth = 1.0;
      transform.any_degenerate = true;
    }
  }
  return apply_transform(transform, data);
}

double mse_loss(std::span<const double> preds,
                std::span<const double> targets) {
  expect(preds.size() == targets.size(), "mse_loss: size mismatch");
  expect(!preds.empty(), "mse_loss: empty prediction vector");
  double acc = 0.0;
  for (std::size_t k = 0; k < preds.size(); ++k) {
    const double d = preds[k] - targets[k];
    acc += d * d;
  }
  return acc / static_cast<double>(preds.size());
}

namespace {

// ---- KAN reverse mode ------------------------------------------------

// Per-layer records of the batched forward pass, node-major: node i of
// sample s lives at [i*n + s]; window block for input node i starts at
// i*(p+1)*n with the kernels' column-major [w*n + s] layout inside.
struct KanTape {
  std::vector<std::vector<double>> acts;      // L+1 buffers, acts[l]: n_l * n
  std::vector<std::vector<int>> spans;        // per layer: n_in * n
  std::vector<std::vector<double>> windows;   // per layer: n_in * (p+1) * n
  std::vector<std::vector<double>> dwindows;  // same shape
};

// Reused across gradient steps; every buffer is resized (never shrunk below
// capacity) and fully rewritten each call, so reuse cannot leak state.
struct KanScratch {
  KanTape tape;
  std::vector<double> tmp;
  std::vector<double> delta;
  std::vector<double> new_delta;
};

void kan_forward_tape(const kan::KanNetwork& net, const double* inputs, int n,
                      KanTape& tape, std::vector<double>& tmp) {
  const kernels::Ops& K = kernels::active();
  const std::size_t ns = static_cast<std::size_t>(n);
  const std::size_t L = net.layers.size();
  tape.acts.resize(L + 1);
  tape.spans.resize(L);
  tape.windows.resize(L);
  tape.dwindows.resize(L);

  const int n0 = net.shape.front();
  tape.acts[0].resize(static_cast<std::size_t>(n0) * ns);
  for (int i = 0; i < n0; ++i)
    for (std::size_t s = 0; s < ns; ++s)
      tape.acts[0][static_cast<std::size_t>(i) * ns + s] =
          inputs[s * static_cast<std::size_t>(n0) + i];

  tmp.resize(ns);
  for (std::size_t l = 0; l < L; ++l) {
    const kan::KanLayer& layer = net.layers[l];
    const interp::KnotVector& kv = layer.edges.front().spline.knots;
    const double* t = kv.knots().data();
    const int nk = static_cast<int>(kv.knots().size());
    const int p = kv.degree();
    const std::size_t blk = static_cast<std::size_t>(p + 1) * ns;

    tape.spans[l].resize(static_cast<std::size_t>(layer.n_in) * ns);
    tape.windows[l].resize(static_cast<std::size_t>(layer.n_in) * blk);
    tape.dwindows[l].resize(static_cast<std::size_t>(layer.n_in) * blk);
    tape.acts[l + 1].assign(static_cast<std::size_t>(layer.n_out) * ns, 0.0);

    for (int i = 0; i < layer.n_in; ++i) {
      const double* xs = tape.acts[l].data() + static_cast<std::size_t>(i) * ns;
      int* spans_i = tape.spans[l].data() + static_cast<std::size_t>(i) * ns;
      double* win_i = tape.windows[l].data() + static_cast<std::size_t>(i) * blk;
      double* dwin_i =
          tape.dwindows[l].data() + static_cast<std::size_t>(i) * blk;
      K.basis_deriv_window_batch(t, nk, p, xs, n, spans_i, win_i, dwin_i);
      for (int j = 0; j < layer.n_out; ++j) {
        const kan::Edge& e = layer.edge(j, i);
        std::fill(tmp.begin(), tmp.end(), 0.0);
        K.window_dot_accum(e.spline.coeffs.data(), spans_i, win_i, p, n,
                           tmp.data());
        if (e.linear_enabled) K.axpy(e.linear_weight, xs, tmp.data(), n);
        K.axpy(1.0, tmp.data(),
               tape.acts[l + 1].data() + static_cast<std::size_t>(j) * ns, n);
      }
    }
  }
}

// Loss is accumulated in the same flat (sample, component) order as
// mse_loss, so the reported value matches batch_loss exactly.
double kan_backward_impl(const kan::KanNetwork& net, const double* inputs,
                         const double* targets, int n, Gradients& g,
                         KanScratch& scr) {
  const std::size_t ns = static_cast<std::size_t>(n);
  const std::size_t L = net.layers.size();
  KanTape& tape = scr.tape;
  kan_forward_tape(net, inputs, n, tape, scr.tmp);

  const int d_out = net.shape.back();
  const double denom = static_cast<double>(ns * static_cast<std::size_t>(d_out));
  double acc = 0.0;
  std::vector<double>& delta = scr.delta;
  delta.resize(static_cast<std::size_t>(d_out) * ns);
  for (std::size_t s = 0; s < ns; ++s)
    for (int j = 0; j < d_out; ++j) {
      const double diff =
          tape.acts[L][static_cast<std::size_t>(j) * ns + s] -
          targets[s * static_cast<std::size_t>(d_out) + j];
      acc += diff * diff;
      delta[static_cast<std::size_t>(j) * ns + s] = 2.0 * diff / denom;
    }
  const double loss = acc / denom;

  // Flat parameter offsets per layer (order matches kan::get_params).
  std::vector<std::size_t> layer_off(L);
  {
    std::size_t pos = 0;
    for (std::size_t l = 0; l < L; ++l) {
      layer_off[l] = pos;
      for (const kan::Edge& e : net.layers[l].edges)
        pos += e.spline.coeffs.size() + (e.linear_enabled ? 1 : 0);
    }
    g.values.assign(pos, 0.0);
  }

  const kernels::Ops& K = kernels::active();
  std::vector<double>& tmp = scr.tmp;
  std::vector<double>& new_delta = scr.new_delta;
  for (std::size_t l = L; l-- > 0;) {
    const kan::KanLayer& layer = net.layers[l];
    const int p = layer.edges.front().spline.knots.degree();
    const std::size_t blk = static_cast<std::size_t>(p + 1) * ns;
    const int nb = static_cast<int>(layer.edges.front().spline.coeffs.size());
    const bool lin = layer.edges.front().linear_enabled;
    const std::size_t per_edge = static_cast<std::size_t>(nb) + (lin ? 1 : 0);

    if (l > 0)
      new_delta.assign(static_cast<std::size_t>(layer.n_in) * ns, 0.0);
    for (int i = 0; i < layer.n_in; ++i) {
      const double* xs = tape.acts[l].data() + static_cast<std::size_t>(i) * ns;
      const int* spans_i =
          tape.spans[l].data() + static_cast<std::size_t>(i) * ns;
      const double* win_i =
          tape.windows[l].data() + static_cast<std::size_t>(i) * blk;
      const double* dwin_i =
          tape.dwindows[l].data() + static_cast<std::size_t>(i) * blk;
      for (int j = 0; j < layer.n_out; ++j) {
        const kan::Edge& e = layer.edge(j, i);
        const double* drow = delta.data() + static_cast<std::size_t>(j) * ns;
        double* ge = g.values.data() + layer_off[l] +
                     (static_cast<std::size_t>(j) * layer.n_in + i) * per_edge;
        for (std::size_t s = 0; s < ns; ++s) {
          const double ds = drow[s];
          const int base = spans_i[s] - p;
          for (int w = 0; w <= p; ++w)
            ge[base + w] += ds * win_i[static_cast<std::size_t>(w) * ns + s];
        }
        if (e.linear_enabled) {
          double gw = 0.0;
          for (std::size_t s = 0; s < ns; ++s) gw += drow[s] * xs[s];
          ge[nb] += gw;
        }
        if (l > 0) {
          std::fill(tmp.begin(), tmp.end(), 0.0);
          K.window_dot_accum(e.spline.coeffs.data(), spans_i, dwin_i, p, n,
                             tmp.data());
          double* nd = new_delta.data() + static_cast<std::size_t>(i) * ns;
          if (e.linear_enabled) {
            for (std::size_t s = 0; s < ns; ++s)
              nd[s] += drow[s] * (tmp[s] + e.linear_weight);
          } else {
            for (std::size_t s = 0; s < ns; ++s) nd[s] += drow[s] * tmp[s];
          }
        }
      }
    }
    if (l > 0) std::swap(delta, new_delta);
  }
  return loss;
}

// ---- MLP reverse mode ------------------------------------------------

double mlp_backward_impl(const mlp::MlpNetwork& net, const double* inputs,
                         const double* targets, int n, Gradients& g) {
  const std::size_t L = net.layers.size();
  std::vector<std::size_t> layer_off(L);
  {
    std::size_t pos = 0;
    for (std::size_t l = 0; l < L; ++l) {
      layer_off[l] = pos;
      pos += net.layers[l].weights.size() + net.layers[l].biases.size();
    }
    g.values.assign(pos, 0.0);
  }

  const int n0 = net.shape.front();
  const int d_out = net.shape.back();
  const double denom =
      static_cast<double>(static_cast<std::size_t>(n) * d_out);

  // Per-sample forward storage: post-activations per layer boundary and
  // pre-activations per layer.
  std::vector<std::vector<double>> a(L + 1);
  std::vector<std::vector<double>> z(L);
  for (std::size_t l = 0; l < L; ++l) {
    a[l].resize(static_cast<std::size_t>(net.layers[l].n_in));
    z[l].resize(static_cast<std::size_t>(net.layers[l].n_out));
  }
  a[L].resize(static_cast<std::size_t>(d_out));
  std::vector<double> delta, delta_in;

  double acc = 0.0;
  for (int s = 0; s < n; ++s) {
    const double* row = inputs + static_cast<std::size_t>(s) * n0;
    std::copy(row, row + n0, a[0].begin());
    for (std::size_t l = 0; l < L; ++l) {
      const mlp::MlpLayer& layer = net.layers[l];
      for (int j = 0; j < layer.n_out; ++j) {
        double zj = layer.biases[static_cast<std::size_t>(j)];
        const double* w =
            layer.weights.data() + static_cast<std::size_t>(j) * layer.n_in;
        for (int i = 0; i < layer.n_in; ++i)
          zj = zj + w[i] * a[l][static_cast<std::size_t>(i)];
        z[l][static_cast<std::size_t>(j)] = zj;
        a[l + 1][static_cast<std::size_t>(j)] =
            apply_activation(layer.activation, zj);
      }
    }

    // delta holds dL/dz of the current layer.
    delta.resize(static_cast<std::size_t>(d_out));
    for (int j = 0; j < d_out; ++j) {
      const double diff = a[L][static_cast<std::size_t>(j)] -
                          targets[static_cast<std::size_t>(s) * d_out + j];
      acc += diff * diff;
      delta[static_cast<std::size_t>(j)] =
          (2.0 * diff / denom) *
          mlp::activation_deriv(net.layers[L - 1].activation,
                                z[L - 1][static_cast<std::size_t>(j)]);
    }
    for (std::size_t l = L; l-- > 0;) {
      const mlp::MlpLayer& layer = net.layers[l];
      double* gW = g.values.data() + layer_off[l];
      double* gb = gW + layer.weights.size();
      for (int j = 0; j < layer.n_out; ++j) {
        const double dj = delta[static_cast<std::size_t>(j)];
        gb[j] += dj;
        double* gw_row = gW + static_cast<std::size_t>(j) * layer.n_in;
        for (int i = 0; i < layer.n_in; ++i)
          gw_row[i] += dj * a[l][static_cast<std::size_t>(i)];
      }
      if (l > 0) {
        delta_in.assign(static_cast<std::size_t>(layer.n_in), 0.0);
        for (int j = 0; j < layer.n_out; ++j) {
          const double dj = delta[static_cast<std::size_t>(j)];
          const double* w =
              layer.weights.data() + static_cast<std::size_t>(j) * layer.n_in;
          for (int i = 0; i < layer.n_in; ++i)
            delta_in[static_cast<std::size_t>(i)] += dj * w[i];
        }
        for (int i = 0; i < layer.n_in; ++i)
          delta_in[static_cast<std::size_t>(i)] *= mlp::activation_deriv(
              net.layers[l - 1].activation, z[l - 1][static_cast<std::size_t>(i)]);
        std::swap(delta, delta_in);
      }
    }
  }
  return acc / denom;
}

void check_batch(const std::vector<int>& shape, std::size_t n_inputs,
                 std::size_t n_targets, int n_samples) {
  expect(n_samples >= 1, "backward: need at least one sample");
  expect(n_inputs ==
             static_cast<std::size_t>(n_samples) * static_cast<std::size_t>(shape.front()),
         "backward: input size mismatch");
  expect(n_targets ==
             static_cast<std::size_t>(n_samples) * static_cast<std::size_t>(shape.back()),
         "backward: target size mismatch");
}

}  // namespace

Gradients backward(const kan::KanNetwork& net, std::span<const double> inputs,
                   std::span<const double> targets, int n_samples) {
  check_batch(net.shape, inputs.size(), targets.size(), n_samples);
  Gradients g;
  KanScratch scratch;
  kan_backward_impl(net, inputs.data(), targets.data(), n_samples, g, scratch);
  return g;
}

Gradients backward(const mlp::MlpNetwork& net, std::span<const double> inputs,
                   std::span<const double> targets, int n_samples) {
  check_batch(net.shape, inputs.size(), targets.size(), n_samples);
  Gradients g;
  mlp_backward_impl(net, inputs.data(), targets.data(), n_samples, g);
  return g;
}

Gradients backward(const kan::KanNetwork& net, const Dataset& batch) {
  return backward(net, batch.inputs, batch.targets, batch.size());
}

Gradients backward(const mlp::MlpNetwork& net, const Dataset& batch) {
  return backward(net, batch.inputs, batch.targets, batch.size());
}

double batch_loss(const kan::KanNetwork& net, std::span<const double> inputs,
                  std::span<const double> targets, int n_samples) {
  check_batch(net.shape, inputs.size(), targets.size(), n_samples);
  const std::vector<double> preds =
      kan::network_forward_batch(net, inputs, n_samples);
  return mse_loss(preds, targets);
}

double batch_loss(const mlp::MlpNetwork& net, std::span<const double> inputs,
                  std::span<const double> targets, int n_samples) {
  check_batch(net.shape, inputs.size(), targets.size(), n_samples);
  const std::vector<double> preds =
      mlp::mlp_forward_batch(net, inputs, n_samples);
  return mse_loss(preds, targets);
}

template <typename Net>
Gradients finite_diff_grad(Net& net, std::span<const double> inputs,
                           std::span<const double> targets, int n_samples,
                           double h) {
  expect(h > 0.0, "finite_diff_grad: step size must be positive");
  std::vector<double> params = get_params(net);
  Gradients g;
  g.values.resize(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double saved = params[k];
    params[k] = saved + h;
    set_params(net, params);
    const double up = batch_loss(net, inputs, targets, n_samples);
    params[k] = saved - h;
    set_params(net, params);
    const double down = batch_loss(net, inputs, targets, n_samples);
    params[k] = saved;
    g.values[k] = (up - down) / (2.0 * h);
  }
  set_params(net, params);
  return g;
}

template Gradients finite_diff_grad<kan::KanNetwork>(kan::KanNetwork&,
                                                     std::span<const double>,
                                                     std::span<const double>,
                                                     int, double);
template Gradients finite_diff_grad<mlp::MlpNetwork>(mlp::MlpNetwork&,
                                                     std::span<const double>,
                                                     std::span<const double>,
                                                     int, double);

void sgd_step(std::span<double> params, const Gradients& grads, double lr) {
  expect(params.size() == grads.values.size(),
         "sgd_step: gradient size mismatch");
  for (std::size_t k = 0; k < params.size(); ++k)
    params[k] = params[k] - lr * grads.values[k];
}

namespace {

constexpr double kDivergenceCap = 1e12;

// The whole loop is shared between network kinds; Net only has to provide
// get/set_params and the backward entry points.
template <typename Net>
TrainReport train_impl(Net& net, const Dataset& data, const TrainConfig& cfg) {
  validate_dataset(data);
  expect(cfg.steps >= 0, "train: steps must be >= 0");
  expect(std::isfinite(cfg.learning_rate) && cfg.learning_rate > 0.0,
         "train: learning rate must be positive");
  expect(cfg.batch_size >= 0, "train: batch size must be >= 0");

  const auto t0 = std::chrono::steady_clock::now();
  TrainReport report;
  report.seed = cfg.seed;

  auto [tr, te] = split_dataset(data);
  expect(tr.size() >= 1, "train: dataset has no training samples");

  if (cfg.normalize_inputs) {
    tr = normalize_inputs(tr, report.transform);
    if (te.size() > 0) te = apply_transform(report.transform, te);
  }

  const int n = tr.size();
  const bool mini = cfg.batch_size > 0 && cfg.batch_size < n;
  // Seeds cfg.seed and cfg.seed+1 conventionally drive data synthesis and
  // initialization; the mini-batch sampler takes the next stream.
  Rng batch_rng(cfg.seed + 2);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Dataset batch;
  batch.input_dim = tr.input_dim;
  batch.target_dim = tr.target_dim;

  std::vector<double> params = get_params(net);
  report.param_count = params.size();
  report.loss_per_step.reserve(static_cast<std::size_t>(cfg.steps));

  Gradients grads;
  KanScratch scratch;
  for (int step = 0; step < cfg.steps; ++step) {
    const Dataset* cur = &tr;
    if (mini) {
      // Partial Fisher-Yates: a fresh sample of batch_size distinct rows.
      batch.inputs.clear();
      batch.targets.clear();
      for (int k = 0; k < cfg.batch_size; ++k) {
        const std::size_t pick =
            static_cast<std::size_t>(k) +
            static_cast<std::size_t>(batch_rng.below(
                static_cast<std::uint64_t>(n - k)));
        std::swap(order[static_cast<std::size_t>(k)], order[pick]);
        const int s = order[static_cast<std::size_t>(k)];
        const double* in =
            tr.inputs.data() + static_cast<std::size_t>(s) * tr.input_dim;
        const double* tg =
            tr.targets.data() + static_cast<std::size_t>(s) * tr.target_dim;
        batch.inputs.insert(batch.inputs.end(), in, in + tr.input_dim);
        batch.targets.insert(batch.targets.end(), tg, tg + tr.target_dim);
      }
      cur = &batch;
    }

    double loss;
    if constexpr (std::is_same_v<Net, kan::KanNetwork>)
      loss = kan_backward_impl(net, cur->inputs.data(), cur->targets.data(),
                               cur->size(), grads, scratch);
    else
      loss = mlp_backward_impl(net, cur->inputs.data(), cur->targets.data(),
                               cur->size(), grads);
    report.loss_per_step.push_back(loss);
    if (!std::isfinite(loss) || loss > kDivergenceCap) {
      report.diverged = true;
      report.diverged_step = step;
      break;
    }
    sgd_step(params, grads, cfg.learning_rate);
    set_params(net, params);
  }

  report.final_train_rmse =
      std::sqrt(batch_loss(net, tr.inputs, tr.targets, tr.size()));
  report.final_test_rmse =
      te.size() > 0
          ? std::sqrt(batch_loss(net, te.inputs, te.targets, te.size()))
          : std::numeric_limits<double>::quiet_NaN();
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return report;
}

}  // namespace

TrainReport train(kan::KanNetwork& net, const Dataset& data,
                  const TrainConfig& cfg) {
  expect(net.shape.front() == data.input_dim &&
             net.shape.back() == data.target_dim,
         "train: network shape does not match the dataset");
  return train_impl(net, data, cfg);
}

TrainReport train(mlp::MlpNetwork& net, const Dataset& data,
                  const TrainConfig& cfg) {
  expect(net.shape.front() == data.input_dim &&
             net.shape.back() == data.target_dim,
         "train: network shape does not match the dataset");
  return train_impl(net, data, cfg);
}

kan::KanNetwork grid_refine(const kan::KanNetwork& net, int new_grid) {
  expect(!net.layers.empty(), "grid_refine: network has no layers");
  expect(new_grid >= net.config.grid,
         "grid_refine: new grid must be at least the current grid");
  kan::KanNetwork out;
  out.shape = net.shape;
  out.config = net.config;
  out.config.grid = new_grid;
  const interp::KnotVector kv =
      interp::uniform_knots(net.config.domain_min, net.config.domain_max,
                            new_grid, net.config.degree);
  const int nb = kv.basis_count();
  // Dense uniform abscissae give every fine basis function sample support.
  const int n_samples = 8 * nb + 1;
  std::vector<interp::Point> pts(static_cast<std::size_t>(n_samples));
  const double lo = net.config.domain_min;
  const double hi = net.config.domain_max;
  out.layers.reserve(net.layers.size());
  for (const kan::KanLayer& layer : net.layers) {
    kan::KanLayer nl;
    nl.n_in = layer.n_in;
    nl.n_out = layer.n_out;
    nl.edges.reserve(layer.edges.size());
    for (const kan::Edge& e : layer.edges) {
      for (int k = 0; k < n_samples; ++k) {
        const double x = lo + (hi - lo) * k / (n_samples - 1);
        pts[static_cast<std::size_t>(k)] = {x, interp::spline_eval(e.spline, x)};
      }
      interp::Spline1D refined =
          interp::spline_fit(interp::PointSet(pts), kv);
      nl.edges.push_back(
          kan::Edge{std::move(refined), e.linear_weight, e.linear_enabled});
    }
    out.layers.push_back(std::move(nl));
  }
  return out;
}

}  // namespace kanlab::train

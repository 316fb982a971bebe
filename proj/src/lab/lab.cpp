#include "kanlab/lab/lab.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "kanlab/common.hpp"

namespace kanlab::lab {

namespace {

double sin_pi(double x) { return std::sin(std::numbers::pi * x); }

bool parse_additive_dim(const std::string& name, int& n_out) {
  const std::string prefix = "additive_";
  if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return false;
  long n = 0;
  for (std::size_t k = prefix.size(); k < name.size(); ++k) {
    const char c = name[k];
    if (c < '0' || c > '9') return false;
    n = n * 10 + (c - '0');
    if (n > 1'000'000) return false;
  }
  if (n < 1) return false;
  n_out = static_cast<int>(n);
  return true;
}

}  // namespace

TargetFunction make_target(const std::string& name) {
  if (name == "sin1d")
    return {name, 1, [](std::span<const double> x) { return sin_pi(x[0]); }};
  if (name == "poly3")
    return {name, 1, [](std::span<const double> x) {
              return x[0] * x[0] * x[0] - x[0];
            }};
  if (name == "composite2") {
    // exp(sin(pi*x0) + x1^2), rescaled onto [-1, 1] over the input square.
    const double e_hi = std::exp(2.0);
    const double e_lo = std::exp(-1.0);
    return {name, 2, [e_hi, e_lo](std::span<const double> x) {
              const double s = std::exp(sin_pi(x[0]) + x[1] * x[1]);
              return 2.0 * (s - e_lo) / (e_hi - e_lo) - 1.0;
            }};
  }
  if (name == "const1d")
    return {name, 1, [](std::span<const double>) { return 0.5; }};
  int n = 0;
  if (parse_additive_dim(name, n))
    return {name, n, [n](std::span<const double> x) {
              double acc = 0.0;
              for (int i = 0; i < n; ++i)
                acc += sin_pi(x[static_cast<std::size_t>(i)]);
              return acc / static_cast<double>(n);
            }};
  expect(false, "unknown target function: " + name);
  return {};
}

std::vector<std::string> target_names() {
  return {"sin1d", "poly3", "additive_<n>", "composite2", "const1d"};
}

train::Dataset synthesize_dataset(const TargetFunction& target, int n_train,
                                  int n_test, std::uint64_t seed) {
  expect(target.input_dim >= 1, "synthesize_dataset: bad target dimension");
  expect(static_cast<bool>(target.eval), "synthesize_dataset: empty target");
  expect(n_train >= 1, "synthesize_dataset: need at least one training sample");
  expect(n_test >= 0, "synthesize_dataset: negative test count");
  const int n = n_train + n_test;
  const int d = target.input_dim;
  Rng rng(seed);
  train::Dataset data;
  data.input_dim = d;
  data.target_dim = 1;
  data.inputs.resize(static_cast<std::size_t>(n) * d);
  data.targets.resize(static_cast<std::size_t>(n));
  data.tags.resize(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    double* row = data.inputs.data() + static_cast<std::size_t>(s) * d;
    for (int i = 0; i < d; ++i) row[i] = rng.uniform(-1.0, 1.0);
    data.targets[static_cast<std::size_t>(s)] =
        target.eval(std::span<const double>(row, static_cast<std::size_t>(d)));
    data.tags[static_cast<std::size_t>(s)] = s < n_train ? 0 : 1;
  }
  return data;
}

SlopeFit fit_loglog_slope(std::span<const double> gs,
                          std::span<const double> errs) {
  expect(gs.size() == errs.size(), "fit_loglog_slope: size mismatch");
  expect(gs.size() >= 2, "fit_loglog_slope: need at least two points");
  const std::size_t n = gs.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t k = 0; k < n; ++k) {
    expect(gs[k] > 0.0, "fit_loglog_slope: grid sizes must be positive");
    expect(errs[k] > 0.0, "fit_loglog_slope: errors must be positive");
    xs[k] = std::log(gs[k]);
    ys[k] = std::log(errs[k]);
  }
  double xm = 0.0, ym = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    xm += xs[k];
    ym += ys[k];
  }
  xm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (xs[k] - xm) * (xs[k] - xm);
    sxy += (xs[k] - xm) * (ys[k] - ym);
    syy += (ys[k] - ym) * (ys[k] - ym);
  }
  expect(sxx > 0.0, "fit_loglog_slope: grid sizes must be distinct");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  if (syy == 0.0) {
    fit.r2 = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double r = ys[k] - (fit.intercept + fit.slope * xs[k]);
      ss_res += r * r;
    }
    fit.r2 = 1.0 - ss_res / syy;
  }
  return fit;
}

int detect_plateau(std::span<const double> errs) {
  for (std::size_t i = 1; i < errs.size(); ++i)
    if (errs[i] > 0.8 * errs[i - 1]) return static_cast<int>(i);
  return -1;
}

namespace {

// Runs fn(0..n_items-1), optionally across threads; items are independent,
// so the results do not depend on the schedule.  The first exception (if
// any) is rethrown on the caller thread.
void run_jobs(int jobs, int n_items, const std::function<void(int)>& fn) {
  if (jobs <= 1 || n_items <= 1) {
    for (int i = 0; i < n_items; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < n_items; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const int n_threads = std::min(jobs, n_items);
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(n_threads));
  for (int k = 0; k < n_threads; ++k) threads.emplace_back(worker);
  for (std::thread& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Max-abs prediction error over the test rows of a tagged dataset, with the
// training-time input transform applied first.
double kan_test_maxabs(const kan::KanNetwork& net,
                       const train::NormalizeTransform& tf,
                       const train::Dataset& test_split) {
  if (test_split.size() == 0) return std::numeric_limits<double>::quiet_NaN();
  const train::Dataset ten =
      tf.dims.empty() ? test_split : train::apply_transform(tf, test_split);
  const std::vector<double> preds =
      kan::network_forward_batch(net, ten.inputs, ten.size());
  double m = 0.0;
  for (std::size_t k = 0; k < preds.size(); ++k) {
    const double err = std::abs(preds[k] - ten.targets[k]);
    if (!(err <= m)) m = err;  // also latches NaN
  }
  return m;
}

}  // namespace

ScalingReport scaling_sweep(const TargetFunction& target,
                            const std::vector<int>& shape,
                            std::span<const int> grid_sizes, int degree,
                            const train::TrainConfig& cfg, int jobs,
                            int n_train, int n_test) {
  expect(!grid_sizes.empty(), "scaling_sweep: no grid sizes");
  for (int g : grid_sizes) expect(g >= 1, "scaling_sweep: grid sizes must be >= 1");
  expect(jobs >= 1, "scaling_sweep: jobs must be >= 1");
  if (n_train <= 0)
    n_train = target.input_dim == 1 ? kTrainSamples1d : kTrainSamplesNd;
  if (n_test <= 0) n_test = kTestSamples;

  const train::Dataset data =
      synthesize_dataset(target, n_train, n_test, cfg.seed);
  const auto [train_split, test_split] = train::split_dataset(data);
  (void)train_split;

  ScalingReport report;
  report.target = target.name;
  report.shape = shape;
  report.degree = degree;
  report.points.resize(grid_sizes.size());

  run_jobs(jobs, static_cast<int>(grid_sizes.size()), [&](int k) {
    const int g = grid_sizes[static_cast<std::size_t>(k)];
    kan::EdgeConfig ec;
    ec.degree = degree;
    ec.grid = g;
    Rng net_rng(cfg.seed + 1);
    kan::KanNetwork net = kan::make_kan(shape, ec, net_rng);
    train::TrainReport rep = train::train(net, data, cfg);
    ScalingPoint& pt = report.points[static_cast<std::size_t>(k)];
    pt.grid = g;
    pt.params = rep.param_count;
    pt.rmse_test = rep.final_test_rmse;
    pt.maxabs_test = kan_test_maxabs(net, rep.transform, test_split);
    pt.diverged = rep.diverged;
  });

  // Slope over the pre-plateau max-abs errors of the converged points.
  std::vector<double> gs, errs;
  std::vector<int> idx;
  for (std::size_t k = 0; k < report.points.size(); ++k) {
    const ScalingPoint& pt = report.points[k];
    if (pt.diverged || !std::isfinite(pt.maxabs_test)) continue;
    gs.push_back(static_cast<double>(pt.grid));
    errs.push_back(pt.maxabs_test);
    idx.push_back(static_cast<int>(k));
  }
  const int plateau = detect_plateau(errs);
  if (plateau >= 0) {
    report.plateau_index = idx[static_cast<std::size_t>(plateau)];
    gs.resize(static_cast<std::size_t>(plateau));
    errs.resize(static_cast<std::size_t>(plateau));
  }
  bool fittable = errs.size() >= 2;
  bool all_tiny = true;
  for (double e : errs) {
    if (e <= 0.0) fittable = false;
    if (e >= 1e-12) all_tiny = false;
  }
  if (!fittable || all_tiny) {
    report.slope_degenerate = true;
  } else {
    report.fit = fit_loglog_slope(gs, errs);
  }
  return report;
}

DimensionReport dimension_experiment(std::span<const int> dims, int grid,
                                     int degree, const train::TrainConfig& cfg,
                                     int jobs) {
  expect(!dims.empty(), "dimension_experiment: no dimensions");
  for (int n : dims)
    expect(n >= 1, "dimension_experiment: dimensions must be >= 1");
  expect(jobs >= 1, "dimension_experiment: jobs must be >= 1");

  DimensionReport report;
  report.grid = grid;
  report.degree = degree;
  report.points.resize(dims.size());

  run_jobs(jobs, static_cast<int>(dims.size()), [&](int k) {
    const int n = dims[static_cast<std::size_t>(k)];
    const TargetFunction target = make_target("additive_" + std::to_string(n));
    const train::Dataset data =
        synthesize_dataset(target, kTrainSamplesNd, kTestSamples, cfg.seed);
    kan::EdgeConfig ec;
    ec.degree = degree;
    ec.grid = grid;
    Rng net_rng(cfg.seed + 1);
    kan::KanNetwork net = kan::make_kan(kan::kat_shape(n), ec, net_rng);
    train::TrainReport rep = train::train(net, data, cfg);

    const auto [tr, te] = train::split_dataset(data);
    (void)tr;
    DimensionPoint& pt = report.points[static_cast<std::size_t>(k)];
    pt.n = n;
    pt.params = rep.param_count;
    pt.rmse_test = rep.final_test_rmse;
    pt.maxabs_test = kan_test_maxabs(net, rep.transform, te);
    pt.diverged = rep.diverged;
  });

  const DimensionPoint* lo = &report.points.front();
  const DimensionPoint* hi = &report.points.front();
  for (const DimensionPoint& pt : report.points) {
    if (pt.n < lo->n) lo = &pt;
    if (pt.n > hi->n) hi = &pt;
  }
  if (lo->diverged || hi->diverged || !std::isfinite(lo->rmse_test) ||
      !std::isfinite(hi->rmse_test) || lo->rmse_test <= 0.0) {
    report.rmse_ratio = std::numeric_limits<double>::quiet_NaN();
    report.flagged = true;
  } else {
    report.rmse_ratio = hi->rmse_test / lo->rmse_test;
    report.flagged = report.rmse_ratio > kDimensionRatioBound;
  }
  return report;
}

namespace {

struct KanCandidate {
  std::vector<int> shape;
  int grid = 0;
  std::size_t params = 0;
};

// Parameter count of a spline-only network: edges * (grid + degree).
std::size_t kan_params_for(const std::vector<int>& shape, int grid,
                           int degree) {
  std::size_t edges = 0;
  for (std::size_t l = 0; l + 1 < shape.size(); ++l)
    edges += static_cast<std::size_t>(shape[l]) * shape[l + 1];
  return edges * static_cast<std::size_t>(grid + degree);
}

}  // namespace

ComparisonReport kan_vs_mlp(const TargetFunction& target,
                            std::size_t param_budget,
                            const train::TrainConfig& cfg) {
  expect(param_budget >= 1, "kan_vs_mlp: empty parameter budget");
  const int n = target.input_dim;
  const int degree = 3;
  const auto budget = static_cast<double>(param_budget);
  const double tol = 0.1 * budget;

  // KAN candidates: [n,1] and [n,w,1] over grid sizes; closest parameter
  // count wins, ties by fewer parameters, then by shallower shape.
  KanCandidate best;
  bool have_best = false;
  std::size_t min_params = std::numeric_limits<std::size_t>::max();
  auto consider = [&](const std::vector<int>& shape, int grid) {
    const std::size_t params = kan_params_for(shape, grid, degree);
    min_params = std::min(min_params, params);
    const double diff = std::abs(static_cast<double>(params) - budget);
    if (diff > tol) return;
    if (have_best) {
      const double best_diff =
          std::abs(static_cast<double>(best.params) - budget);
      if (diff > best_diff) return;
      if (diff == best_diff &&
          (params > best.params ||
           (params == best.params && shape.size() >= best.shape.size())))
        return;
    }
    best = {shape, grid, params};
    have_best = true;
  };
  for (int g = 1; g <= 512; ++g) consider({n, 1}, g);
  for (int w = 1; w <= 64; ++w)
    for (int g = 1; g <= 512; ++g) consider({n, w, 1}, g);
  expect(have_best,
         "kan_vs_mlp: no spline network within 10% of the budget "
         "(minimum reachable is " +
             std::to_string(min_params) + " parameters)");

  // MLP candidates: one tanh hidden layer, params = h*(n+2) + 1.
  int best_h = 0;
  std::size_t best_mlp_params = 0;
  for (int h = 1; h <= 100000; ++h) {
    const std::size_t params =
        static_cast<std::size_t>(h) * (static_cast<std::size_t>(n) + 2) + 1;
    const double diff = std::abs(static_cast<double>(params) - budget);
    if (diff > tol) {
      if (params > param_budget && best_h != 0) break;
      continue;
    }
    if (best_h == 0 ||
        diff < std::abs(static_cast<double>(best_mlp_params) - budget)) {
      best_h = h;
      best_mlp_params = params;
    }
  }
  expect(best_h != 0,
         "kan_vs_mlp: no perceptron network within 10% of the budget "
         "(minimum reachable is " +
             std::to_string(static_cast<std::size_t>(n) + 3) + " parameters)");

  const int n_train = n == 1 ? kTrainSamples1d : kTrainSamplesNd;
  const train::Dataset data =
      synthesize_dataset(target, n_train, kTestSamples, cfg.seed);

  ComparisonReport report;
  report.param_budget = param_budget;
  report.kan_shape = best.shape;
  report.kan_grid = best.grid;
  report.mlp_shape = {n, best_h, 1};

  {
    kan::EdgeConfig ec;
    ec.degree = degree;
    ec.grid = best.grid;
    Rng net_rng(cfg.seed + 1);
    kan::KanNetwork net = kan::make_kan(best.shape, ec, net_rng);
    train::TrainReport rep = train::train(net, data, cfg);
    report.kan_params = rep.param_count;
    report.kan_rmse = rep.final_test_rmse;
    report.kan_diverged = rep.diverged;
  }
  {
    Rng net_rng(cfg.seed + 1);
    mlp::MlpNetwork net =
        mlp::make_mlp(report.mlp_shape, mlp::Activation::tanh, net_rng);
    train::TrainReport rep = train::train(net, data, cfg);
    report.mlp_params = rep.param_count;
    report.mlp_rmse = rep.final_test_rmse;
    report.mlp_diverged = rep.diverged;
  }
  return report;
}

}  // namespace kanlab::lab

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kanlab/common.hpp"
#include "kanlab/io/csv.hpp"
#include "kanlab/io/format.hpp"
#include "kanlab/io/model_io.hpp"
#include "kanlab/kan/kan.hpp"
#include "kanlab/lab/lab.hpp"
#include "kanlab/mlp/mlp.hpp"
#include "kanlab/train/train.hpp"

namespace {

using namespace kanlab;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string tok = text.substr(pos, comma - pos);
    expect(!tok.empty() && tok.size() <= 7, std::string(what) + ": malformed list entry");
    long v = 0;
    for (char c : tok) {
      expect(c >= '0' && c <= '9', std::string(what) + ": malformed list entry '" + tok + "'");
      v = v * 10 + (c - '0');
    }
    expect(v >= 1, std::string(what) + ": entries must be >= 1");
    out.push_back(static_cast<int>(v));
    pos = comma + 1;
  }
  expect(!out.empty(), std::string(what) + ": empty list");
  return out;
}

std::vector<int> parse_shape(const std::string& text) {
  std::vector<int> shape = parse_int_list(text, "shape");
  expect(shape.size() >= 2, "shape: need at least input and output widths");
  return shape;
}

int auto_train_samples(int requested, int input_dim) {
  if (requested > 0) return requested;
  return input_dim == 1 ? lab::kTrainSamples1d : lab::kTrainSamplesNd;
}

int auto_test_samples(int requested) {
  return requested >= 0 ? requested : lab::kTestSamples;
}

// ---- interp ------------------------------------------------------------

struct InterpOpts {
  std::string method = "linear";
  std::string target = "sin1d";
  int points = 50;
  int degree = 3;
  int grid = 10;
  std::string out;
};

int run_interp(const InterpOpts& o) {
  const lab::TargetFunction target = lab::make_target(o.target);
  expect(target.input_dim == 1, "interp: target must be one-dimensional");
  expect(o.points >= 2, "interp: need at least two interpolation points");

  std::vector<interp::Point> nodes(static_cast<std::size_t>(o.points));
  for (int i = 0; i < o.points; ++i) {
    const double x = -1.0 + 2.0 * i / (o.points - 1);
    nodes[static_cast<std::size_t>(i)] = {
        x, target.eval(std::span<const double>(&x, 1))};
  }

  // Method-specific evaluator over the shared node set.
  std::function<double(double)> evaluate;
  interp::LagrangePoly lagrange({0.0, 1.0}, {0.0, 0.0});
  std::vector<std::pair<std::string, std::string>> extras = {
      {"method", o.method}, {"target", o.target},
      {"interp_points", std::to_string(o.points)}};
  if (o.method == "linear") {
    evaluate = [&nodes](double x) {
      auto it = std::upper_bound(
          nodes.begin(), nodes.end(), x,
          [](double v, const interp::Point& p) { return v < p.x; });
      std::size_t seg = it == nodes.begin()
                            ? 0
                            : static_cast<std::size_t>(it - nodes.begin()) - 1;
      seg = std::min(seg, nodes.size() - 2);
      return interp::linear_interpolate(nodes[seg], nodes[seg + 1], x);
    };
  } else if (o.method == "lagrange") {
    std::vector<double> xs(nodes.size()), ys(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      xs[k] = nodes[k].x;
      ys[k] = nodes[k].y;
    }
    lagrange = interp::LagrangePoly(xs, ys);
    evaluate = [&lagrange](double x) {
      return interp::lagrange_eval(lagrange, x);
    };
  } else if (o.method == "cubic") {
    auto spline = std::make_shared<interp::CubicSpline>(interp::cubic_spline_fit(
        interp::PointSet(nodes), interp::Boundary::natural()));
    evaluate = [spline](double x) {
      return interp::cubic_spline_eval(*spline, x);
    };
  } else if (o.method == "bspline") {
    expect(o.grid >= 1, "interp: grid must be >= 1");
    expect(o.degree >= 0, "interp: degree must be >= 0");
    const interp::KnotVector kv =
        interp::uniform_knots(-1.0, 1.0, o.grid, o.degree);
    expect(o.points >= kv.basis_count(),
           "interp: need at least grid+degree points for a determined fit");
    auto spline = std::make_shared<interp::Spline1D>(
        interp::spline_fit(interp::PointSet(nodes), kv));
    evaluate = [spline](double x) { return interp::spline_eval(*spline, x); };
    extras.emplace_back("degree", std::to_string(o.degree));
    extras.emplace_back("grid", std::to_string(o.grid));
  } else {
    expect(false, "interp: unknown method '" + o.method + "'");
  }

  // Dense probe grid plus the nodes themselves, so node-exactness shows up
  // as zero rows in the table.
  std::vector<double> probes;
  probes.reserve(1001 + nodes.size());
  for (int k = 0; k <= 1000; ++k) probes.push_back(-1.0 + 2.0 * k / 1000.0);
  for (const interp::Point& p : nodes) probes.push_back(p.x);
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());

  std::vector<io::InterpRow> rows;
  rows.reserve(probes.size());
  for (double x : probes)
    rows.push_back(
        {x, target.eval(std::span<const double>(&x, 1)), evaluate(x)});

  io::write_file(o.out, [&](std::ostream& os) {
    io::write_interp_table(os, rows, extras);
  });
  return 0;
}

// ---- fit ---------------------------------------------------------------

struct FitOpts {
  std::string model = "kan";
  std::string target = "sin1d";
  std::string shape;
  int grid = 5;
  int degree = 3;
  std::uint64_t seed = 0;
  double lr = 0.5;
  int steps = 10000;
  int batch = 0;
  bool no_normalize = false;
  int train_samples = 0;
  int test_samples = -1;
  std::string out;
  std::string model_out;
};

int run_fit(const FitOpts& o) {
  const lab::TargetFunction target = lab::make_target(o.target);
  const std::vector<int> shape =
      o.shape.empty() ? kan::kat_shape(target.input_dim) : parse_shape(o.shape);
  expect(shape.front() == target.input_dim,
         "fit: shape input width must match the target dimension");
  expect(shape.back() == 1, "fit: shape must end with a single output");

  const train::Dataset data = lab::synthesize_dataset(
      target, auto_train_samples(o.train_samples, target.input_dim),
      auto_test_samples(o.test_samples), o.seed);

  train::TrainConfig cfg;
  cfg.learning_rate = o.lr;
  cfg.steps = o.steps;
  cfg.batch_size = o.batch;
  cfg.seed = o.seed;
  cfg.normalize_inputs = !o.no_normalize;

  train::TrainReport report;
  Rng net_rng(o.seed + 1);
  io::Model model{kan::KanNetwork{}};
  if (o.model == "kan") {
    kan::EdgeConfig ec;
    ec.degree = o.degree;
    ec.grid = o.grid;
    kan::KanNetwork net = kan::make_kan(shape, ec, net_rng);
    report = train::train(net, data, cfg);
    model = std::move(net);
  } else {
    mlp::MlpNetwork net = mlp::make_mlp(shape, mlp::Activation::tanh, net_rng);
    report = train::train(net, data, cfg);
    model = std::move(net);
  }

  io::write_file(o.out, [&](std::ostream& os) {
    io::write_train_report(os, report);
  });
  const std::string model_path =
      o.model_out.empty() ? o.out + ".model" : o.model_out;
  io::save_model_file(model_path, model);

  std::cout << "final_train_rmse=" << io::format_double(report.final_train_rmse)
            << '\n'
            << "final_test_rmse=" << io::format_double(report.final_test_rmse)
            << '\n';
  if (report.diverged) {
    std::cerr << "training diverged at step " << report.diverged_step << '\n';
    return kExitNumerical;
  }
  return 0;
}

// ---- sweep -------------------------------------------------------------

struct SweepOpts {
  std::string target = "sin1d";
  std::string shape;
  std::string grids = "4,8,16,32";
  int degree = 3;
  std::uint64_t seed = 0;
  double lr = 2.0;
  int steps = 160000;
  int jobs = 1;
  bool normalize = false;
  int train_samples = 0;
  int test_samples = -1;
  std::string out;
};

int run_sweep(const SweepOpts& o) {
  const lab::TargetFunction target = lab::make_target(o.target);
  // Default shape [n,1]: one spline per input, the setting the G^-(k+1)
  // convergence rate is measured in.
  std::vector<int> shape{target.input_dim, 1};
  if (!o.shape.empty()) shape = parse_shape(o.shape);
  const std::vector<int> grids = parse_int_list(o.grids, "grid");
  for (std::size_t k = 1; k < grids.size(); ++k)
    expect(grids[k] > grids[k - 1], "grid: sizes must be strictly increasing");

  train::TrainConfig cfg;
  cfg.learning_rate = o.lr;
  cfg.steps = o.steps;
  cfg.seed = o.seed;
  // Built-in targets are sampled on the spline domain itself; normalizing
  // from the training range would push extreme test points just outside the
  // domain, and the clamped boundary error floors the sup norm.
  cfg.normalize_inputs = o.normalize;

  const lab::ScalingReport report = lab::scaling_sweep(
      target, shape, grids, o.degree, cfg, o.jobs,
      o.train_samples > 0 ? o.train_samples : 0, auto_test_samples(o.test_samples));

  io::write_file(o.out, [&](std::ostream& os) {
    io::write_scaling_report(os, report);
  });
  std::cout << "slope="
            << io::format_double(report.slope_degenerate
                                     ? std::nan("")
                                     : report.fit.slope)
            << '\n';
  return 0;
}

// ---- gradcheck ----------------------------------------------------------

struct GradcheckOpts {
  std::string shape = "2,5,1";
  std::uint64_t seed = 0;
};

// Relative error with the absolute floor folded into the denominator:
// |g - fd| / max(|g|, |fd|, 1e-3) <= 1e-5  <=>
// |g - fd| <= max(1e-5 * max(|g|, |fd|), 1e-8).
double max_rel_err(const train::Gradients& g, const train::Gradients& fd) {
  double worst = 0.0;
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    const double denom =
        std::max({std::abs(g.values[k]), std::abs(fd.values[k]), 1e-3});
    worst = std::max(worst, std::abs(g.values[k] - fd.values[k]) / denom);
  }
  return worst;
}

int run_gradcheck(const GradcheckOpts& o) {
  const std::vector<int> shape = parse_shape(o.shape);
  const int n = 16;
  Rng data_rng(o.seed);
  std::vector<double> inputs(static_cast<std::size_t>(n) * shape.front());
  std::vector<double> targets(static_cast<std::size_t>(n) * shape.back());
  for (double& v : inputs) v = data_rng.uniform(-1.0, 1.0);
  for (double& v : targets) v = data_rng.uniform(-1.0, 1.0);
  const double h = 1e-6;
  const double tol = 1e-5;

  Rng kan_rng(o.seed + 1);
  kan::KanNetwork kan_net = kan::make_kan(shape, kan::EdgeConfig{}, kan_rng);
  const train::Gradients kan_g = train::backward(kan_net, inputs, targets, n);
  const train::Gradients kan_fd =
      train::finite_diff_grad(kan_net, inputs, targets, n, h);
  const double kan_err = max_rel_err(kan_g, kan_fd);

  Rng mlp_rng(o.seed + 1);
  mlp::MlpNetwork mlp_net =
      mlp::make_mlp(shape, mlp::Activation::tanh, mlp_rng);
  const train::Gradients mlp_g = train::backward(mlp_net, inputs, targets, n);
  const train::Gradients mlp_fd =
      train::finite_diff_grad(mlp_net, inputs, targets, n, h);
  const double mlp_err = max_rel_err(mlp_g, mlp_fd);

  std::cout << "max_rel_err_kan=" << io::format_double(kan_err) << '\n'
            << "max_rel_err_mlp=" << io::format_double(mlp_err) << '\n';
  const bool pass = kan_err <= tol && mlp_err <= tol;
  std::cout << (pass ? "gradcheck PASS" : "gradcheck FAIL") << '\n';
  return pass ? 0 : kExitNumerical;
}

// ---- dims ----------------------------------------------------------------

struct DimsOpts {
  std::string dims = "1,2,3,4";
  int grid = 8;
  int degree = 3;
  std::uint64_t seed = 0;
  double lr = 0.1;
  int steps = 20000;
  int jobs = 1;
  std::string out;
};

int run_dims(const DimsOpts& o) {
  const std::vector<int> dims = parse_int_list(o.dims, "dims");
  train::TrainConfig cfg;
  cfg.learning_rate = o.lr;
  cfg.steps = o.steps;
  cfg.seed = o.seed;
  const lab::DimensionReport report =
      lab::dimension_experiment(dims, o.grid, o.degree, cfg, o.jobs);
  io::write_file(o.out, [&](std::ostream& os) {
    io::write_dimension_report(os, report);
  });
  std::cout << "rmse_ratio=" << io::format_double(report.rmse_ratio) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kanlab: spline-based function approximation workbench"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value config file; flags take precedence, the file "
                 "overrides built-in defaults");

  InterpOpts io_opts;
  CLI::App* c_interp =
      app.add_subcommand("interp", "Write an interpolation demo table");
  c_interp->add_option("--method", io_opts.method, "interpolation method")
      ->transform(CLI::IsMember({"linear", "lagrange", "cubic", "bspline"}))
      ->capture_default_str();
  c_interp->add_option("--target", io_opts.target, "1-D target function")
      ->capture_default_str();
  c_interp->add_option("--points", io_opts.points, "number of interpolation points")
      ->capture_default_str();
  c_interp->add_option("--degree", io_opts.degree, "spline degree (bspline)")
      ->capture_default_str();
  c_interp->add_option("--grid", io_opts.grid, "grid size (bspline)")
      ->capture_default_str();
  c_interp->add_option("--out", io_opts.out, "output CSV path")->required();

  FitOpts fit_opts;
  CLI::App* c_fit = app.add_subcommand(
      "fit", "Train one network on a target and write report + model");
  c_fit->add_option("--model", fit_opts.model, "network kind")
      ->transform(CLI::IsMember({"kan", "mlp"}))
      ->capture_default_str();
  c_fit->add_option("--target", fit_opts.target, "target function")
      ->capture_default_str();
  c_fit->add_option("--shape", fit_opts.shape,
                    "layer widths, e.g. 2,5,1 (default: n,2n+1,1)");
  c_fit->add_option("--grid", fit_opts.grid, "spline grid size")
      ->capture_default_str();
  c_fit->add_option("--degree", fit_opts.degree, "spline degree")
      ->capture_default_str();
  c_fit->add_option("--seed", fit_opts.seed, "experiment seed")
      ->capture_default_str();
  c_fit->add_option("--lr", fit_opts.lr, "learning rate")->capture_default_str();
  c_fit->add_option("--steps", fit_opts.steps, "gradient steps")
      ->capture_default_str();
  c_fit->add_option("--batch", fit_opts.batch, "mini-batch size (0 = full)")
      ->capture_default_str();
  c_fit->add_flag("--no-normalize", fit_opts.no_normalize,
                  "skip input normalization");
  c_fit->add_option("--train-samples", fit_opts.train_samples,
                    "training samples (0 = default for the dimension)")
      ->capture_default_str();
  c_fit->add_option("--test-samples", fit_opts.test_samples,
                    "test samples (negative = default)")
      ->capture_default_str();
  c_fit->add_option("--out", fit_opts.out, "report CSV path")->required();
  c_fit->add_option("--model-out", fit_opts.model_out,
                    "model path (default: <out>.model)");

  SweepOpts sweep_opts;
  CLI::App* c_sweep = app.add_subcommand(
      "sweep", "Grid-size scaling sweep with a fitted log-log slope");
  c_sweep->add_option("--target", sweep_opts.target, "target function")
      ->capture_default_str();
  c_sweep->add_option("--shape", sweep_opts.shape,
                      "layer widths (default: n,2n+1,1)");
  c_sweep->add_option("--grid", sweep_opts.grids,
                      "comma-separated increasing grid sizes")
      ->capture_default_str();
  c_sweep->add_option("--degree", sweep_opts.degree, "spline degree")
      ->capture_default_str();
  c_sweep->add_option("--seed", sweep_opts.seed, "experiment seed")
      ->capture_default_str();
  c_sweep->add_option("--lr", sweep_opts.lr, "learning rate")
      ->capture_default_str();
  c_sweep->add_option("--steps", sweep_opts.steps, "gradient steps per point")
      ->capture_default_str();
  c_sweep->add_option("--jobs", sweep_opts.jobs, "parallel training jobs")
      ->capture_default_str();
  c_sweep->add_flag("--normalize", sweep_opts.normalize,
                    "normalize inputs from the training range (off by "
                    "default: built-in targets already span the domain)");
  c_sweep->add_option("--train-samples", sweep_opts.train_samples,
                      "training samples (0 = default)")
      ->capture_default_str();
  c_sweep->add_option("--test-samples", sweep_opts.test_samples,
                      "test samples (negative = default)")
      ->capture_default_str();
  c_sweep->add_option("--out", sweep_opts.out, "report CSV path")->required();

  GradcheckOpts gc_opts;
  CLI::App* c_gradcheck = app.add_subcommand(
      "gradcheck", "Compare reverse-mode gradients to finite differences");
  c_gradcheck->add_option("--shape", gc_opts.shape, "layer widths")
      ->capture_default_str();
  c_gradcheck->add_option("--seed", gc_opts.seed, "experiment seed")
      ->capture_default_str();

  DimsOpts dims_opts;
  CLI::App* c_dims = app.add_subcommand(
      "dims", "Input-dimension consistency experiment on additive targets");
  c_dims->add_option("--dims", dims_opts.dims, "comma-separated input dimensions")
      ->capture_default_str();
  c_dims->add_option("--grid", dims_opts.grid, "spline grid size")
      ->capture_default_str();
  c_dims->add_option("--degree", dims_opts.degree, "spline degree")
      ->capture_default_str();
  c_dims->add_option("--seed", dims_opts.seed, "experiment seed")
      ->capture_default_str();
  c_dims->add_option("--lr", dims_opts.lr, "learning rate")
      ->capture_default_str();
  c_dims->add_option("--steps", dims_opts.steps, "gradient steps per point")
      ->capture_default_str();
  c_dims->add_option("--jobs", dims_opts.jobs, "parallel training jobs")
      ->capture_default_str();
  c_dims->add_option("--out", dims_opts.out, "report CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (c_interp->parsed()) return run_interp(io_opts);
    if (c_fit->parsed()) return run_fit(fit_opts);
    if (c_sweep->parsed()) return run_sweep(sweep_opts);
    if (c_gradcheck->parsed()) return run_gradcheck(gc_opts);
    if (c_dims->parsed()) return run_dims(dims_opts);
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return kExitUsage;
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kanlab/train/train.hpp"

namespace kanlab::lab {

// Closed-form target on [-1,1]^n.  Built-ins: sin1d, poly3, additive_<n>,
// composite2, const1d.
struct TargetFunction {
  std::string name;
  int input_dim = 1;
  std::function<double(std::span<const double>)> eval;
};

TargetFunction make_target(const std::string& name);
std::vector<std::string> target_names();

// Inputs uniform on the domain from the seeded PRNG (sample by sample,
// dimension by dimension), targets by direct evaluation; the first n_train
// samples are tagged train, the rest test.
train::Dataset synthesize_dataset(const TargetFunction& target, int n_train,
                                  int n_test, std::uint64_t seed);

// Training-set sizes large enough that sampling error sits below the
// smallest approximation error measured at G=32, k=3.
constexpr int kTrainSamples1d = 4096;
constexpr int kTrainSamplesNd = 8192;
constexpr int kTestSamples = 1024;

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares on (log g, log err) pairs.  Non-positive errors
// are a domain error; fewer than 2 pairs are a domain error.
SlopeFit fit_loglog_slope(std::span<const double> gs,
                          std::span<const double> errs);

// Index of the first error that improves by less than 20% over its
// predecessor (err[i] > 0.8 * err[i-1]), or -1 if none: past this point the
// curve has hit the optimization/sampling noise floor.
int detect_plateau(std::span<const double> errs);

struct ScalingPoint {
  int grid = 0;
  std::size_t params = 0;
  double rmse_test = 0.0;
  double maxabs_test = 0.0;
  bool diverged = false;
};

struct ScalingReport {
  std::string target;
  std::vector<int> shape;
  int degree = 3;
  int smoothness_order = 0;  // the error metric measures the sup norm (m = 0)
  std::vector<ScalingPoint> points;
  SlopeFit fit;
  int plateau_index = -1;     // into points, -1 = none
  bool slope_degenerate = false;
};

// For each G trains a fresh KAN (same init seed) on a shared dataset and
// records test RMSE and max-abs error; the slope is fitted afterwards on the
// pre-plateau max-abs errors (the metric the G^-(k+1) convergence rate is
// stated in), with diverged points excluded.  Points may be trained in
// parallel (jobs > 1) with identical results.  n_train/n_test of 0 pick the
// defaults above.
ScalingReport scaling_sweep(const TargetFunction& target,
                            const std::vector<int>& shape,
                            std::span<const int> grid_sizes, int degree,
                            const train::TrainConfig& cfg, int jobs = 1,
                            int n_train = 0, int n_test = 0);

struct DimensionPoint {
  int n = 0;
  std::size_t params = 0;
  double rmse_test = 0.0;
  double maxabs_test = 0.0;
  bool diverged = false;
};

struct DimensionReport {
  int grid = 0;
  int degree = 0;
  std::vector<DimensionPoint> points;
  double rmse_ratio = 0.0;  // rmse at largest n over rmse at smallest n
  bool flagged = false;     // ratio above the 5x consistency bound
};

constexpr double kDimensionRatioBound = 5.0;

// Trains kat_shape(n) nets on additive_n for each n at fixed G and degree
// with a fixed training-set size (the n >= 2 default for every n).
DimensionReport dimension_experiment(std::span<const int> dims, int grid,
                                     int degree, const train::TrainConfig& cfg,
                                     int jobs = 1);

struct ComparisonReport {
  std::size_t param_budget = 0;
  std::vector<int> kan_shape;
  int kan_grid = 0;
  std::size_t kan_params = 0;
  double kan_rmse = 0.0;
  bool kan_diverged = false;
  std::vector<int> mlp_shape;
  std::size_t mlp_params = 0;
  double mlp_rmse = 0.0;
  bool mlp_diverged = false;
};

// Builds a KAN and an MLP whose parameter counts are within 10% of the
// budget (searching over hidden width and grid size), trains both with the
// same seed and step count, and reports both test RMSEs.
ComparisonReport kan_vs_mlp(const TargetFunction& target,
                            std::size_t param_budget,
                            const train::TrainConfig& cfg);

}  // namespace kanlab::lab

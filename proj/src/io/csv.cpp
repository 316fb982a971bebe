#include "kanlab/io/csv.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "kanlab/io/format.hpp"

namespace kanlab::io {

namespace {

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(xs[k]);
  }
  return out;
}

}  // namespace

void write_train_report(std::ostream& os, const train::TrainReport& report) {
  os << "step,loss\n";
  for (std::size_t k = 0; k < report.loss_per_step.size(); ++k)
    os << k << ',' << format_double(report.loss_per_step[k]) << '\n';
  os << '\n';
  os << "final_train_rmse=" << format_double(report.final_train_rmse) << '\n';
  os << "final_test_rmse=" << format_double(report.final_test_rmse) << '\n';
  os << "params=" << report.param_count << '\n';
  os << "wall_ms=0\n";
  os << "seed=" << report.seed << '\n';
  os << "diverged=" << (report.diverged ? 1 : 0) << '\n';
  os << "diverged_step=" << report.diverged_step << '\n';
  for (std::size_t i = 0; i < report.transform.dims.size(); ++i) {
    const train::DimTransform& t = report.transform.dims[i];
    os << "transform_" << i << '=' << format_double(t.center) << ','
       << format_double(t.halfwidth) << ',' << (t.degenerate ? 1 : 0) << '\n';
  }
}

void write_scaling_report(std::ostream& os, const lab::ScalingReport& report) {
  os << "G,params,rmse_test,maxabs_test,diverged\n";
  for (const lab::ScalingPoint& pt : report.points)
    os << pt.grid << ',' << pt.params << ',' << format_double(pt.rmse_test)
       << ',' << format_double(pt.maxabs_test) << ','
       << (pt.diverged ? 1 : 0) << '\n';
  os << '\n';
  os << "target=" << report.target << '\n';
  os << "shape=" << join_ints(report.shape) << '\n';
  os << "degree=" << report.degree << '\n';
  const double nan = std::nan("");
  os << "slope="
     << format_double(report.slope_degenerate ? nan : report.fit.slope) << '\n';
  os << "intercept="
     << format_double(report.slope_degenerate ? nan : report.fit.intercept)
     << '\n';
  os << "r2=" << format_double(report.slope_degenerate ? nan : report.fit.r2)
     << '\n';
  if (report.plateau_index >= 0)
    os << "plateau_G="
       << report.points[static_cast<std::size_t>(report.plateau_index)].grid
       << '\n';
  else
    os << "plateau_G=none\n";
  os << "slope_degenerate=" << (report.slope_degenerate ? 1 : 0) << '\n';
}

void write_dimension_report(std::ostream& os,
                            const lab::DimensionReport& report) {
  os << "n,params,rmse_test,maxabs_test,diverged\n";
  for (const lab::DimensionPoint& pt : report.points)
    os << pt.n << ',' << pt.params << ',' << format_double(pt.rmse_test) << ','
       << format_double(pt.maxabs_test) << ',' << (pt.diverged ? 1 : 0)
       << '\n';
  os << '\n';
  os << "grid=" << report.grid << '\n';
  os << "degree=" << report.degree << '\n';
  os << "rmse_ratio=" << format_double(report.rmse_ratio) << '\n';
  os << "ratio_bound=" << format_double(lab::kDimensionRatioBound) << '\n';
  os << "flagged=" << (report.flagged ? 1 : 0) << '\n';
}

void write_interp_table(
    std::ostream& os, std::span<const InterpRow> rows,
    std::span<const std::pair<std::string, std::string>> summary) {
  os << "x,f_true,f_interp,abs_err\n";
  double max_abs = 0.0;
  double sq_sum = 0.0;
  for (const InterpRow& r : rows) {
    const double err = std::abs(r.f_true - r.f_interp);
    max_abs = std::max(max_abs, err);
    sq_sum += err * err;
    os << format_double(r.x) << ',' << format_double(r.f_true) << ','
       << format_double(r.f_interp) << ',' << format_double(err) << '\n';
  }
  os << '\n';
  os << "points=" << rows.size() << '\n';
  os << "max_abs_err=" << format_double(max_abs) << '\n';
  os << "rms_err="
     << format_double(rows.empty()
                          ? 0.0
                          : std::sqrt(sq_sum / static_cast<double>(rows.size())))
     << '\n';
  for (const auto& [key, value] : summary) os << key << '=' << value << '\n';
}

void write_file(const std::string& path,
                const std::function<void(std::ostream&)>& writer) {
  std::ofstream os(path, std::ios::binary);
  if (!os.is_open())
    throw std::runtime_error("cannot open file for writing: " + path);
  writer(os);
  os.flush();
  if (!os.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace kanlab::io

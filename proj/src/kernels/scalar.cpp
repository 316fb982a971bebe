#include "kanlab/kernels/kernels.hpp"

#include <vector>

#include "detail.hpp"

namespace kanlab::kernels {

namespace {

void spline_eval_batch(const double* knots, int n_knots, int degree,
                       const double* coefs, const double* xs, double* out,
                       int n) {
  const int m = n_knots - 1;
  std::vector<double> work(
      static_cast<std::size_t>(detail::scratch_doubles(degree)));
  for (int s = 0; s < n; ++s)
    out[s] = detail::eval_one(knots, m, degree, coefs, xs[s], work.data());
}

void spline_eval_deriv_batch(const double* knots, int n_knots, int degree,
                             const double* coefs, const double* xs, double* val,
                             double* dval, int n) {
  const int m = n_knots - 1;
  std::vector<double> work(
      static_cast<std::size_t>(detail::scratch_doubles(degree)));
  for (int s = 0; s < n; ++s)
    detail::eval_deriv_one(knots, m, degree, coefs, xs[s], &val[s], &dval[s],
                           work.data());
}

void basis_window_batch(const double* knots, int n_knots, int degree,
                        const double* xs, int n, int* spans, double* windows) {
  const int m = n_knots - 1;
  const double lo = knots[degree];
  const double hi = knots[m - degree];
  std::vector<double> work(3 * (static_cast<std::size_t>(degree) + 1));
  double* N = work.data();
  double* left = N + (degree + 1);
  double* right = left + (degree + 1);
  for (int s = 0; s < n; ++s) {
    const double xc = detail::clamp_domain(xs[s], lo, hi);
    const int span = detail::find_span(knots, m, degree, xc);
    spans[s] = span;
    detail::basis_funs(knots, span, degree, xc, N, left, right);
    for (int w = 0; w <= degree; ++w)
      windows[static_cast<std::size_t>(w) * n + s] = N[w];
  }
}

void basis_deriv_window_batch(const double* knots, int n_knots, int degree,
                              const double* xs, int n, int* spans,
                              double* windows, double* dwindows) {
  const int m = n_knots - 1;
  const double lo = knots[degree];
  const double hi = knots[m - degree];
  std::vector<double> work(
      static_cast<std::size_t>(detail::scratch_doubles(degree)));
  double* N = work.data();
  double* dN = N + (degree + 1);
  double* left = work.data() + 2 * (degree + 1);
  double* right = work.data() + 3 * (degree + 1);
  double* Nm = work.data() + 4 * (degree + 1);
  for (int s = 0; s < n; ++s) {
    const double x = xs[s];
    const double xc = detail::clamp_domain(x, lo, hi);
    const int span = detail::find_span(knots, m, degree, xc);
    spans[s] = span;
    detail::basis_and_deriv_funs(knots, span, degree, xc, N, dN, left, right,
                                 Nm);
    const bool outside = x < lo || x > hi;
    for (int w = 0; w <= degree; ++w) {
      windows[static_cast<std::size_t>(w) * n + s] = N[w];
      dwindows[static_cast<std::size_t>(w) * n + s] = outside ? 0.0 : dN[w];
    }
  }
}

void window_dot_accum(const double* coefs, const int* spans,
                      const double* windows, int degree, int n, double* out) {
  for (int s = 0; s < n; ++s) {
    double acc = out[s];
    for (int w = 0; w <= degree; ++w)
      acc = acc + coefs[spans[s] - degree + w] *
                      windows[static_cast<std::size_t>(w) * n + s];
    out[s] = acc;
  }
}

void axpy(double a, const double* x, double* y, int n) {
  for (int s = 0; s < n; ++s) y[s] = y[s] + a * x[s];
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{
      "scalar",          spline_eval_batch, spline_eval_deriv_batch,
      basis_window_batch, basis_deriv_window_batch,
      window_dot_accum,  axpy,
  };
  return ops;
}

}  // namespace kanlab::kernels

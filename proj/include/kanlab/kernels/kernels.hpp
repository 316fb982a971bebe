#pragma once

namespace kanlab::kernels {

// Batched B-spline evaluation kernels.  The scalar variants are the
// reference; the AVX2 variants are required to produce bit-identical
// results (same operations per lane, no FMA, no reordered reductions) and
// are selected at runtime.
//
// Shared data conventions:
//   - knots: the raw knot array t_0..t_m, n_knots = m + 1, with the degree
//     passed alongside; the supported domain is [t[degree], t[m - degree]]
//     and every x is clamped into it before evaluation.
//   - spans: per-point knot span index s with t[s] <= x < t[s+1]
//     (right-closed at the domain end), always in [degree, m - degree - 1].
//   - windows: the degree+1 locally supported basis values per point, laid
//     out column-major as windows[w * n + s] for window position w and point
//     index s (so each window position is contiguous across points).
//   - deriv windows: same layout; rows are zeroed for points whose
//     unclamped x lies outside the supported domain, because the clamped
//     evaluation is constant there.

struct Ops {
  const char* name;

  // out[s] = S(x[s])
  void (*spline_eval_batch)(const double* knots, int n_knots, int degree,
                            const double* coefs, const double* xs, double* out,
                            int n);

  // val[s] = S(x[s]), dval[s] = S'(x[s]) (0 outside the domain)
  void (*spline_eval_deriv_batch)(const double* knots, int n_knots, int degree,
                                  const double* coefs, const double* xs,
                                  double* val, double* dval, int n);

  // Basis windows and spans for a batch of points.
  void (*basis_window_batch)(const double* knots, int n_knots, int degree,
                             const double* xs, int n, int* spans,
                             double* windows);

  // Basis windows plus derivative windows.
  void (*basis_deriv_window_batch)(const double* knots, int n_knots,
                                   int degree, const double* xs, int n,
                                   int* spans, double* windows,
                                   double* dwindows);

  // out[s] += sum_w coefs[spans[s] - degree + w] * windows[w * n + s]
  void (*window_dot_accum)(const double* coefs, const int* spans,
                           const double* windows, int degree, int n,
                           double* out);

  // y[s] += a * x[s]
  void (*axpy)(double a, const double* x, double* y, int n);
};

enum class Backend { scalar, avx2 };

// Active kernel set.  Resolution order: explicit set_backend() call, else
// the KANLAB_KERNELS environment variable ("scalar", "avx2", "auto"), else
// AVX2 when the CPU supports it.
const Ops& active();
Backend active_backend();
void set_backend(Backend b);  // throws std::runtime_error if unsupported

const Ops& scalar_ops();
bool avx2_compiled();   // AVX2 kernels built into this binary
bool avx2_supported();  // ... and the CPU can run them
const Ops& avx2_ops();  // valid only when avx2_compiled()

}  // namespace kanlab::kernels

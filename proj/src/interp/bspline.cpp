#include "kanlab/interp/bspline.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "kanlab/common.hpp"
#include "../kernels/detail.hpp"

namespace kanlab::interp {

KnotVector::KnotVector(std::vector<double> knots, int degree)
    : knots_(std::move(knots)), degree_(degree) {
  expect(degree_ >= 0, "KnotVector: degree must be >= 0");
  const int count = static_cast<int>(knots_.size());
  expect(count >= 2 * (degree_ + 1),
         "KnotVector: need at least 2(p+1) knots to support a basis function");
  for (double v : knots_)
    expect(std::isfinite(v), "KnotVector: knots must be finite");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    expect(knots_[i - 1] <= knots_[i], "KnotVector: knots must be non-decreasing");
}

KnotVector uniform_knots(double a, double b, int grid_size, int degree) {
  expect(std::isfinite(a) && std::isfinite(b) && a < b,
         "uniform_knots: domain must satisfy a < b");
  expect(grid_size >= 1, "uniform_knots: grid size must be >= 1");
  expect(degree >= 0, "uniform_knots: degree must be >= 0");
  const int total = grid_size + 2 * degree + 1;
  std::vector<double> knots(static_cast<std::size_t>(total));
  const double g = static_cast<double>(grid_size);
  for (int idx = 0; idx < total; ++idx) {
    // j runs -p..G+p, extrapolating the same spacing beyond both ends.
    const double j = static_cast<double>(idx - degree);
    knots[static_cast<std::size_t>(idx)] = (a * (g - j) + b * j) / g;
  }
  // The affine combination can miss the ends by an ulp (e.g. (b*G)/G != b),
  // which would push x == b outside every degree-0 basis.  Pin them; the
  // neighbours sit a full grid step away, so ordering is unaffected.
  knots[static_cast<std::size_t>(degree)] = a;
  knots[static_cast<std::size_t>(degree + grid_size)] = b;
  return KnotVector(std::move(knots), degree);
}

namespace {

// Zeroth-order indicator with the half-open convention; the last non-empty
// interval also claims the maximal knot so the partition of unity holds at
// the right end.
bool zeroth_order_one(const std::vector<double>& t, int i, double x) {
  if (x >= t[static_cast<std::size_t>(i)] &&
      x < t[static_cast<std::size_t>(i) + 1])
    return true;
  const double t_max = t.back();
  return x == t_max && t[static_cast<std::size_t>(i) + 1] == t_max &&
         t[static_cast<std::size_t>(i)] < t_max;
}

void check_basis_index(const KnotVector& kv, int i, int p,
                       const char* who) {
  expect(p >= 0 && p <= kv.degree(),
         std::string(who) + ": degree out of range");
  expect(i >= 0 && i <= kv.last_index() - p - 1,
         std::string(who) + ": basis index out of range");
}

}  // namespace

double bspline_basis(const KnotVector& kv, int i, int p, double t) {
  check_basis_index(kv, i, p, "bspline_basis");
  const auto& T = kv.knots();
  // Bottom-up over the support window; level j holds B_{i+r, j}.  Each
  // entry is computed by the same expression as the textbook recursion, so
  // the values match a direct recursive transcription exactly.
  std::vector<double> B(static_cast<std::size_t>(p) + 1);
  for (int r = 0; r <= p; ++r)
    B[static_cast<std::size_t>(r)] = zeroth_order_one(T, i + r, t) ? 1.0 : 0.0;
  for (int j = 1; j <= p; ++j) {
    for (int r = 0; r + j <= p; ++r) {
      double term1 = 0.0, term2 = 0.0;
      const double den1 = T[static_cast<std::size_t>(i + r + j)] -
                          T[static_cast<std::size_t>(i + r)];
      if (den1 != 0.0)
        term1 = (t - T[static_cast<std::size_t>(i + r)]) / den1 *
                B[static_cast<std::size_t>(r)];
      const double den2 = T[static_cast<std::size_t>(i + r + j + 1)] -
                          T[static_cast<std::size_t>(i + r + 1)];
      if (den2 != 0.0)
        term2 = (T[static_cast<std::size_t>(i + r + j + 1)] - t) / den2 *
                B[static_cast<std::size_t>(r) + 1];
      B[static_cast<std::size_t>(r)] = term1 + term2;
    }
  }
  return B[0];
}

double bspline_basis_derivative(const KnotVector& kv, int i, int p, double t) {
  check_basis_index(kv, i, p, "bspline_basis_derivative");
  if (p == 0) return 0.0;
  const auto& T = kv.knots();
  double term1 = 0.0, term2 = 0.0;
  const double den1 =
      T[static_cast<std::size_t>(i + p)] - T[static_cast<std::size_t>(i)];
  if (den1 != 0.0) term1 = bspline_basis(kv, i, p - 1, t) / den1;
  const double den2 = T[static_cast<std::size_t>(i + p + 1)] -
                      T[static_cast<std::size_t>(i + 1)];
  if (den2 != 0.0) term2 = bspline_basis(kv, i + 1, p - 1, t) / den2;
  return p * (term1 - term2);
}

Spline1D::Spline1D(KnotVector kv, std::vector<double> coefficients)
    : knots(std::move(kv)), coeffs(std::move(coefficients)) {
  expect(static_cast<int>(coeffs.size()) == knots.basis_count(),
         "Spline1D: coefficient count must equal the basis count");
  expect(knots.domain_min() < knots.domain_max(),
         "Spline1D: knot vector has an empty supported domain");
}

double spline_eval(const Spline1D& s, double x) {
  const int p = s.knots.degree();
  std::vector<double> work(
      static_cast<std::size_t>(kernels::detail::scratch_doubles(p)));
  return kernels::detail::eval_one(s.knots.knots().data(),
                                   s.knots.last_index(), p, s.coeffs.data(), x,
                                   work.data());
}

ValueDeriv spline_eval_deriv(const Spline1D& s, double x) {
  const int p = s.knots.degree();
  std::vector<double> work(
      static_cast<std::size_t>(kernels::detail::scratch_doubles(p)));
  ValueDeriv out;
  kernels::detail::eval_deriv_one(s.knots.knots().data(), s.knots.last_index(),
                                  p, s.coeffs.data(), x, &out.value,
                                  &out.deriv, work.data());
  return out;
}

Spline1D spline_fit(const PointSet& samples, const KnotVector& kv) {
  const int nb = kv.basis_count();
  const int n = static_cast<int>(samples.size());
  expect(n >= nb,
         "spline_fit: underdetermined system (fewer samples than basis "
         "functions)");
  const double lo = kv.domain_min();
  const double hi = kv.domain_max();
  for (int s = 0; s < n; ++s)
    expect(samples[static_cast<std::size_t>(s)].x >= lo &&
               samples[static_cast<std::size_t>(s)].x <= hi,
           "spline_fit: sample outside the supported domain");

  const double* t = kv.knots().data();
  const int m = kv.last_index();
  const int p = kv.degree();

  // Normal equations A alpha = rhs accumulated through the local windows;
  // A is symmetric positive semi-definite with bandwidth p.
  std::vector<double> A(static_cast<std::size_t>(nb) * nb, 0.0);
  std::vector<double> rhs(static_cast<std::size_t>(nb), 0.0);
  std::vector<double> N(static_cast<std::size_t>(p) + 1);
  std::vector<double> scratch(2 * (static_cast<std::size_t>(p) + 1));
  for (int s = 0; s < n; ++s) {
    const auto& pt = samples[static_cast<std::size_t>(s)];
    const int span = kernels::detail::find_span(t, m, p, pt.x);
    kernels::detail::basis_funs(t, span, p, pt.x, N.data(), scratch.data(),
                                scratch.data() + (p + 1));
    const int first = span - p;
    for (int w1 = 0; w1 <= p; ++w1) {
      rhs[static_cast<std::size_t>(first + w1)] += N[static_cast<std::size_t>(w1)] * pt.y;
      for (int w2 = 0; w2 <= p; ++w2)
        A[static_cast<std::size_t>(first + w1) * nb + (first + w2)] +=
            N[static_cast<std::size_t>(w1)] * N[static_cast<std::size_t>(w2)];
    }
  }

  double diag_max = 0.0;
  for (int i = 0; i < nb; ++i)
    diag_max = std::max(diag_max, A[static_cast<std::size_t>(i) * nb + i]);
  for (int i = 0; i < nb; ++i)
    expect(A[static_cast<std::size_t>(i) * nb + i] != 0.0,
           "spline_fit: basis function " + std::to_string(i) +
               " has no sample support");

  // In-place Cholesky A = L L^T; a collapsed pivot means the samples do not
  // determine the coefficients (e.g. too few distinct abscissae).
  const double pivot_floor = 1e-12 * diag_max;
  for (int j = 0; j < nb; ++j) {
    double d = A[static_cast<std::size_t>(j) * nb + j];
    for (int k = 0; k < j; ++k) {
      const double l = A[static_cast<std::size_t>(j) * nb + k];
      d -= l * l;
    }
    expect(std::isfinite(d) && d > pivot_floor,
           "spline_fit: rank-deficient design matrix");
    const double dj = std::sqrt(d);
    A[static_cast<std::size_t>(j) * nb + j] = dj;
    for (int i = j + 1; i < nb; ++i) {
      double v = A[static_cast<std::size_t>(i) * nb + j];
      for (int k = 0; k < j; ++k)
        v -= A[static_cast<std::size_t>(i) * nb + k] *
             A[static_cast<std::size_t>(j) * nb + k];
      A[static_cast<std::size_t>(i) * nb + j] = v / dj;
    }
  }
  // Forward then backward substitution.
  std::vector<double> y(static_cast<std::size_t>(nb));
  for (int i = 0; i < nb; ++i) {
    double v = rhs[static_cast<std::size_t>(i)];
    for (int k = 0; k < i; ++k)
      v -= A[static_cast<std::size_t>(i) * nb + k] * y[static_cast<std::size_t>(k)];
    y[static_cast<std::size_t>(i)] = v / A[static_cast<std::size_t>(i) * nb + i];
  }
  std::vector<double> alpha(static_cast<std::size_t>(nb));
  for (int i = nb; i-- > 0;) {
    double v = y[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < nb; ++k)
      v -= A[static_cast<std::size_t>(k) * nb + i] * alpha[static_cast<std::size_t>(k)];
    alpha[static_cast<std::size_t>(i)] = v / A[static_cast<std::size_t>(i) * nb + i];
  }
  return Spline1D(kv, std::move(alpha));
}

}  // namespace kanlab::interp

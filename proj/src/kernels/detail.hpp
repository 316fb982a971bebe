#pragma once

// Scalar B-spline evaluation core shared by the public interp entry points,
// the scalar batch kernels, and the AVX2 remainder loops.  Everything here
// is deliberately written as plain IEEE expressions (no FMA-able compound
// statements are required for correctness) so that vector code can mirror
// the exact operation order per lane.

namespace kanlab::kernels::detail {

inline double clamp_domain(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

// Knot span index s in [p, m-p-1] with t[s] <= x < t[s+1]; x at the domain's
// right end lands in the last non-empty interval.  x must already be clamped
// into [t[p], t[m-p]].
inline int find_span(const double* t, int m, int p, double x) {
  const int hi = m - p;
  if (x >= t[hi]) {
    int s = hi - 1;
    while (s > p && t[s] == t[hi]) --s;
    return s;
  }
  int lo = p, up = hi;
  int mid = (lo + up) / 2;
  while (x < t[mid] || x >= t[mid + 1]) {
    if (x < t[mid])
      up = mid;
    else
      lo = mid;
    mid = (lo + up) / 2;
  }
  return mid;
}

// The p+1 non-vanishing basis values at x (span s) via the banded triangle.
// N, left, right each hold p+1 doubles.  Denominators are differences of
// knots bracketing the non-empty span interval, so they are never zero.
inline void basis_funs(const double* t, int s, int p, double x, double* N,
                       double* left, double* right) {
  N[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - t[s + 1 - j];
    right[j] = t[s + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = N[r] / (right[r + 1] + left[j - r]);
      N[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    N[j] = saved;
  }
}

// Basis values plus first derivatives of the p+1 window bases.  Nm is
// scratch for the degree p-1 row (p doubles).  dN[w] is the right-limit
// derivative; 0/0 terms drop out.
inline void basis_and_deriv_funs(const double* t, int s, int p, double x,
                                 double* N, double* dN, double* left,
                                 double* right, double* Nm) {
  N[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    if (j == p)
      for (int r = 0; r < p; ++r) Nm[r] = N[r];
    left[j] = x - t[s + 1 - j];
    right[j] = t[s + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = N[r] / (right[r + 1] + left[j - r]);
      N[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    N[j] = saved;
  }
  if (p == 0) {
    dN[0] = 0.0;
    return;
  }
  for (int w = 0; w <= p; ++w) {
    const int i = s - p + w;
    double term1 = 0.0, term2 = 0.0;
    if (w >= 1) {
      const double den = t[i + p] - t[i];
      if (den != 0.0) term1 = Nm[w - 1] / den;
    }
    if (w <= p - 1) {
      const double den = t[i + p + 1] - t[i + 1];
      if (den != 0.0) term2 = Nm[w] / den;
    }
    dN[w] = p * (term1 - term2);
  }
}

// Scratch requirement for eval_one / eval_deriv_one below.
inline int scratch_doubles(int p) { return 5 * (p + 1); }

inline double eval_one(const double* t, int m, int p, const double* coefs,
                       double x, double* work) {
  const double lo = t[p];
  const double hi = t[m - p];
  const double xc = clamp_domain(x, lo, hi);
  const int s = find_span(t, m, p, xc);
  double* N = work;
  double* left = work + (p + 1);
  double* right = left + (p + 1);
  basis_funs(t, s, p, xc, N, left, right);
  double acc = 0.0;
  for (int w = 0; w <= p; ++w) acc = acc + coefs[s - p + w] * N[w];
  return acc;
}

inline void eval_deriv_one(const double* t, int m, int p, const double* coefs,
                           double x, double* val, double* dval, double* work) {
  const double lo = t[p];
  const double hi = t[m - p];
  const double xc = clamp_domain(x, lo, hi);
  const int s = find_span(t, m, p, xc);
  double* N = work;
  double* dN = work + (p + 1);
  double* left = work + 2 * (p + 1);
  double* right = work + 3 * (p + 1);
  double* Nm = work + 4 * (p + 1);
  basis_and_deriv_funs(t, s, p, xc, N, dN, left, right, Nm);
  double acc = 0.0;
  for (int w = 0; w <= p; ++w) acc = acc + coefs[s - p + w] * N[w];
  *val = acc;
  if (x < lo || x > hi) {
    *dval = 0.0;
    return;
  }
  double dacc = 0.0;
  for (int w = 0; w <= p; ++w) dacc = dacc + coefs[s - p + w] * dN[w];
  *dval = dacc;
}

}  // namespace kanlab::kernels::detail

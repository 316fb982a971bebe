#include "kanlab/kernels/kernels.hpp"

#if !defined(__AVX2__)
#error "avx2.cpp must be compiled with -mavx2"
#endif

#include <immintrin.h>

#include "detail.hpp"

// Four-lane counterparts of the scalar kernels.  Every lane performs the
// same IEEE operations in the same order as the scalar code (explicit
// mul/add intrinsics, no FMA, blend-based clamping), so the results are
// bit-identical to the scalar backend.  The remainder of each batch and any
// degree above kMaxVecDegree run through the shared scalar core.

namespace kanlab::kernels {

namespace {

constexpr int kMaxVecDegree = 12;

inline __m128i span_offsets(__m128i spans, int offset) {
  return _mm_add_epi32(spans, _mm_set1_epi32(offset));
}

inline __m256d gather(const double* base, __m128i idx) {
  return _mm256_i32gather_pd(base, idx, 8);
}

// Mirrors detail::clamp_domain bit-for-bit: x < lo picks lo, else x > hi
// picks hi, else x passes through unchanged (including the sign of zero).
inline __m256d clamp4(__m256d x, __m256d lo, __m256d hi) {
  __m256d xc = _mm256_blendv_pd(x, hi, _mm256_cmp_pd(x, hi, _CMP_GT_OQ));
  return _mm256_blendv_pd(xc, lo, _mm256_cmp_pd(x, lo, _CMP_LT_OQ));
}

inline __m128i find_span4(const double* t, int m, int p, __m256d xc) {
  alignas(32) double xb[4];
  _mm256_store_pd(xb, xc);
  alignas(16) int sp[4];
  for (int l = 0; l < 4; ++l) sp[l] = detail::find_span(t, m, p, xb[l]);
  return _mm_load_si128(reinterpret_cast<const __m128i*>(sp));
}

inline void basis_funs4(const double* t, __m128i spans, int p, __m256d x,
                        __m256d* N, __m256d* left, __m256d* right) {
  N[0] = _mm256_set1_pd(1.0);
  for (int j = 1; j <= p; ++j) {
    left[j] = _mm256_sub_pd(x, gather(t, span_offsets(spans, 1 - j)));
    right[j] = _mm256_sub_pd(gather(t, span_offsets(spans, j)), x);
    __m256d saved = _mm256_setzero_pd();
    for (int r = 0; r < j; ++r) {
      const __m256d temp =
          _mm256_div_pd(N[r], _mm256_add_pd(right[r + 1], left[j - r]));
      N[r] = _mm256_add_pd(saved, _mm256_mul_pd(right[r + 1], temp));
      saved = _mm256_mul_pd(left[j - r], temp);
    }
    N[j] = saved;
  }
}

inline void basis_and_deriv_funs4(const double* t, __m128i spans, int p,
                                  __m256d x, __m256d* N, __m256d* dN,
                                  __m256d* left, __m256d* right, __m256d* Nm) {
  N[0] = _mm256_set1_pd(1.0);
  for (int j = 1; j <= p; ++j) {
    if (j == p)
      for (int r = 0; r < p; ++r) Nm[r] = N[r];
    left[j] = _mm256_sub_pd(x, gather(t, span_offsets(spans, 1 - j)));
    right[j] = _mm256_sub_pd(gather(t, span_offsets(spans, j)), x);
    __m256d saved = _mm256_setzero_pd();
    for (int r = 0; r < j; ++r) {
      const __m256d temp =
          _mm256_div_pd(N[r], _mm256_add_pd(right[r + 1], left[j - r]));
      N[r] = _mm256_add_pd(saved, _mm256_mul_pd(right[r + 1], temp));
      saved = _mm256_mul_pd(left[j - r], temp);
    }
    N[j] = saved;
  }
  if (p == 0) {
    dN[0] = _mm256_setzero_pd();
    return;
  }
  const __m256d zero = _mm256_setzero_pd();
  const __m256d pv = _mm256_set1_pd(static_cast<double>(p));
  for (int w = 0; w <= p; ++w) {
    // Window base index i = s - p + w; lanes with a zero denominator get a
    // zero term (the divide result is masked away before use).
    __m256d term1 = zero;
    if (w >= 1) {
      const __m256d den = _mm256_sub_pd(gather(t, span_offsets(spans, w)),
                                        gather(t, span_offsets(spans, w - p)));
      term1 = _mm256_and_pd(_mm256_div_pd(Nm[w - 1], den),
                            _mm256_cmp_pd(den, zero, _CMP_NEQ_OQ));
    }
    __m256d term2 = zero;
    if (w <= p - 1) {
      const __m256d den =
          _mm256_sub_pd(gather(t, span_offsets(spans, w + 1)),
                        gather(t, span_offsets(spans, w - p + 1)));
      term2 = _mm256_and_pd(_mm256_div_pd(Nm[w], den),
                            _mm256_cmp_pd(den, zero, _CMP_NEQ_OQ));
    }
    dN[w] = _mm256_mul_pd(pv, _mm256_sub_pd(term1, term2));
  }
}

void spline_eval_batch(const double* knots, int n_knots, int degree,
                       const double* coefs, const double* xs, double* out,
                       int n) {
  if (degree > kMaxVecDegree) {
    scalar_ops().spline_eval_batch(knots, n_knots, degree, coefs, xs, out, n);
    return;
  }
  const int m = n_knots - 1;
  const double lo = knots[degree];
  const double hi = knots[m - degree];
  const __m256d lov = _mm256_set1_pd(lo);
  const __m256d hiv = _mm256_set1_pd(hi);
  __m256d N[kMaxVecDegree + 1];
  __m256d left[kMaxVecDegree + 1];
  __m256d right[kMaxVecDegree + 1];
  int s = 0;
  for (; s + 4 <= n; s += 4) {
    const __m256d x = _mm256_loadu_pd(xs + s);
    const __m256d xc = clamp4(x, lov, hiv);
    const __m128i sv = find_span4(knots, m, degree, xc);
    basis_funs4(knots, sv, degree, xc, N, left, right);
    __m256d acc = _mm256_setzero_pd();
    for (int w = 0; w <= degree; ++w)
      acc = _mm256_add_pd(
          acc, _mm256_mul_pd(gather(coefs, span_offsets(sv, w - degree)),
                             N[w]));
    _mm256_storeu_pd(out + s, acc);
  }
  double work[5 * (kMaxVecDegree + 1)];
  for (; s < n; ++s)
    out[s] = detail::eval_one(knots, m, degree, coefs, xs[s], work);
}

void spline_eval_deriv_batch(const double* knots, int n_knots, int degree,
                             const double* coefs, const double* xs, double* val,
                             double* dval, int n) {
  if (degree > kMaxVecDegree) {
    scalar_ops().spline_eval_deriv_batch(knots, n_knots, degree, coefs, xs,
                                         val, dval, n);
    return;
  }
  const int m = n_knots - 1;
  const double lo = knots[degree];
  const double hi = knots[m - degree];
  const __m256d lov = _mm256_set1_pd(lo);
  const __m256d hiv = _mm256_set1_pd(hi);
  __m256d N[kMaxVecDegree + 1];
  __m256d dN[kMaxVecDegree + 1];
  __m256d left[kMaxVecDegree + 1];
  __m256d right[kMaxVecDegree + 1];
  __m256d Nm[kMaxVecDegree + 1];
  int s = 0;
  for (; s + 4 <= n; s += 4) {
    const __m256d x = _mm256_loadu_pd(xs + s);
    const __m256d xc = clamp4(x, lov, hiv);
    const __m128i sv = find_span4(knots, m, degree, xc);
    basis_and_deriv_funs4(knots, sv, degree, xc, N, dN, left, right, Nm);
    __m256d acc = _mm256_setzero_pd();
    __m256d dacc = _mm256_setzero_pd();
    for (int w = 0; w <= degree; ++w) {
      const __m256d c = gather(coefs, span_offsets(sv, w - degree));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(c, N[w]));
      dacc = _mm256_add_pd(dacc, _mm256_mul_pd(c, dN[w]));
    }
    // The clamped evaluation is constant outside the domain.
    const __m256d inside = _mm256_and_pd(_mm256_cmp_pd(x, lov, _CMP_GE_OQ),
                                         _mm256_cmp_pd(x, hiv, _CMP_LE_OQ));
    _mm256_storeu_pd(val + s, acc);
    _mm256_storeu_pd(dval + s, _mm256_and_pd(dacc, inside));
  }
  double work[5 * (kMaxVecDegree + 1)];
  for (; s < n; ++s)
    detail::eval_deriv_one(knots, m, degree, coefs, xs[s], &val[s], &dval[s],
                           work);
}

void basis_window_batch(const double* knots, int n_knots, int degree,
                        const double* xs, int n, int* spans, double* windows) {
  if (degree > kMaxVecDegree) {
    scalar_ops().basis_window_batch(knots, n_knots, degree, xs, n, spans,
                                    windows);
    return;
  }
  const int m = n_knots - 1;
  const double lo = knots[degree];
  const double hi = knots[m - degree];
  const __m256d lov = _mm256_set1_pd(lo);
  const __m256d hiv = _mm256_set1_pd(hi);
  __m256d N[kMaxVecDegree + 1];
  __m256d left[kMaxVecDegree + 1];
  __m256d right[kMaxVecDegree + 1];
  int s = 0;
  for (; s + 4 <= n; s += 4) {
    const __m256d x = _mm256_loadu_pd(xs + s);
    const __m256d xc = clamp4(x, lov, hiv);
    const __m128i sv = find_span4(knots, m, degree, xc);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(spans + s), sv);
    basis_funs4(knots, sv, degree, xc, N, left, right);
    for (int w = 0; w <= degree; ++w)
      _mm256_storeu_pd(windows + static_cast<std::size_t>(w) * n + s, N[w]);
  }
  // The tail keeps the full-batch window stride n, so it cannot reuse the
  // scalar batch entry point.
  double work[3 * (kMaxVecDegree + 1)];
  double* Ns = work;
  double* lefts = work + (degree + 1);
  double* rights = work + 2 * (degree + 1);
  for (; s < n; ++s) {
    const double xc = detail::clamp_domain(xs[s], lo, hi);
    const int span = detail::find_span(knots, m, degree, xc);
    spans[s] = span;
    detail::basis_funs(knots, span, degree, xc, Ns, lefts, rights);
    for (int w = 0; w <= degree; ++w)
      windows[static_cast<std::size_t>(w) * n + s] = Ns[w];
  }
}

void basis_deriv_window_batch(const double* knots, int n_knots, int degree,
                              const double* xs, int n, int* spans,
                              double* windows, double* dwindows) {
  if (degree > kMaxVecDegree) {
    scalar_ops().basis_deriv_window_batch(knots, n_knots, degree, xs, n, spans,
                                          windows, dwindows);
    return;
  }
  const int m = n_knots - 1;
  const double lo = knots[degree];
  const double hi = knots[m - degree];
  const __m256d lov = _mm256_set1_pd(lo);
  const __m256d hiv = _mm256_set1_pd(hi);
  __m256d N[kMaxVecDegree + 1];
  __m256d dN[kMaxVecDegree + 1];
  __m256d left[kMaxVecDegree + 1];
  __m256d right[kMaxVecDegree + 1];
  __m256d Nm[kMaxVecDegree + 1];
  int s = 0;
  for (; s + 4 <= n; s += 4) {
    const __m256d x = _mm256_loadu_pd(xs + s);
    const __m256d xc = clamp4(x, lov, hiv);
    const __m128i sv = find_span4(knots, m, degree, xc);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(spans + s), sv);
    basis_and_deriv_funs4(knots, sv, degree, xc, N, dN, left, right, Nm);
    const __m256d inside = _mm256_and_pd(_mm256_cmp_pd(x, lov, _CMP_GE_OQ),
                                         _mm256_cmp_pd(x, hiv, _CMP_LE_OQ));
    for (int w = 0; w <= degree; ++w) {
      _mm256_storeu_pd(windows + static_cast<std::size_t>(w) * n + s, N[w]);
      _mm256_storeu_pd(dwindows + static_cast<std::size_t>(w) * n + s,
                       _mm256_and_pd(dN[w], inside));
    }
  }
  double work[5 * (kMaxVecDegree + 1)];
  double* Ns = work;
  double* dNs = work + (degree + 1);
  double* lefts = work + 2 * (degree + 1);
  double* rights = work + 3 * (degree + 1);
  double* Nms = work + 4 * (degree + 1);
  for (; s < n; ++s) {
    const double x = xs[s];
    const double xc = detail::clamp_domain(x, lo, hi);
    const int span = detail::find_span(knots, m, degree, xc);
    spans[s] = span;
    detail::basis_and_deriv_funs(knots, span, degree, xc, Ns, dNs, lefts,
                                 rights, Nms);
    const bool outside = x < lo || x > hi;
    for (int w = 0; w <= degree; ++w) {
      windows[static_cast<std::size_t>(w) * n + s] = Ns[w];
      dwindows[static_cast<std::size_t>(w) * n + s] = outside ? 0.0 : dNs[w];
    }
  }
}

void window_dot_accum(const double* coefs, const int* spans,
                      const double* windows, int degree, int n, double* out) {
  int s = 0;
  for (; s + 4 <= n; s += 4) {
    const __m128i sv =
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(spans + s));
    __m256d acc = _mm256_loadu_pd(out + s);
    for (int w = 0; w <= degree; ++w)
      acc = _mm256_add_pd(
          acc,
          _mm256_mul_pd(
              gather(coefs, span_offsets(sv, w - degree)),
              _mm256_loadu_pd(windows + static_cast<std::size_t>(w) * n + s)));
    _mm256_storeu_pd(out + s, acc);
  }
  for (; s < n; ++s) {
    double acc = out[s];
    for (int w = 0; w <= degree; ++w)
      acc = acc + coefs[spans[s] - degree + w] *
                      windows[static_cast<std::size_t>(w) * n + s];
    out[s] = acc;
  }
}

void axpy(double a, const double* x, double* y, int n) {
  const __m256d av = _mm256_set1_pd(a);
  int s = 0;
  for (; s + 4 <= n; s += 4)
    _mm256_storeu_pd(
        y + s, _mm256_add_pd(_mm256_loadu_pd(y + s),
                             _mm256_mul_pd(av, _mm256_loadu_pd(x + s))));
  for (; s < n; ++s) y[s] = y[s] + a * x[s];
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops{
      "avx2",             spline_eval_batch, spline_eval_deriv_batch,
      basis_window_batch, basis_deriv_window_batch,
      window_dot_accum,   axpy,
  };
  return ops;
}

}  // namespace kanlab::kernels

#include <cmath>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "kanlab/interp/bspline.hpp"
#include "kanlab/kernels/kernels.hpp"
#include "oracles.hpp"

using namespace kanlab;
using kernels::Ops;

namespace {

struct Case {
  interp::KnotVector kv;
  std::vector<double> coefs;
  std::vector<double> xs;  // deliberately includes out-of-domain points
};

Case make_case(std::mt19937_64& gen, int degree, int n_points) {
  const int G = 1 + static_cast<int>(gen() % 12);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Case c{interp::uniform_knots(-1.0, 1.0, G, degree), {}, {}};
  c.coefs.resize(static_cast<std::size_t>(c.kv.basis_count()));
  for (double& v : c.coefs) v = U(gen);
  c.xs.resize(static_cast<std::size_t>(n_points));
  std::uniform_real_distribution<double> X(-1.4, 1.4);
  for (std::size_t k = 0; k < c.xs.size(); ++k) {
    if (k % 7 == 0)
      c.xs[k] = c.kv.knots()[gen() % c.kv.knots().size()];  // exact knots
    else
      c.xs[k] = X(gen);
  }
  c.xs.front() = 1.0;  // domain ends are the touchiest points
  c.xs.back() = -1.0;
  return c;
}

// All six kernel entry points on one case, returning every output buffer so
// callers can compare backends wholesale.
struct Outputs {
  std::vector<double> eval, val, dval, windows, dwindows, dot, axpy;
  std::vector<int> spans, spans2;
};

Outputs run_ops(const Ops& ops, const Case& c) {
  const int n = static_cast<int>(c.xs.size());
  const auto& t = c.kv.knots();
  const int nk = static_cast<int>(t.size());
  const int p = c.kv.degree();
  Outputs o;
  o.eval.resize(c.xs.size());
  ops.spline_eval_batch(t.data(), nk, p, c.coefs.data(), c.xs.data(),
                        o.eval.data(), n);
  o.val.resize(c.xs.size());
  o.dval.resize(c.xs.size());
  ops.spline_eval_deriv_batch(t.data(), nk, p, c.coefs.data(), c.xs.data(),
                              o.val.data(), o.dval.data(), n);
  o.spans.resize(c.xs.size());
  o.windows.resize(static_cast<std::size_t>(p + 1) * c.xs.size());
  ops.basis_window_batch(t.data(), nk, p, c.xs.data(), n, o.spans.data(),
                         o.windows.data());
  o.spans2.resize(c.xs.size());
  std::vector<double> win2(o.windows.size());
  o.dwindows.resize(o.windows.size());
  ops.basis_deriv_window_batch(t.data(), nk, p, c.xs.data(), n,
                               o.spans2.data(), win2.data(),
                               o.dwindows.data());
  // window_dot_accum accumulates on top of existing content.
  o.dot.assign(c.xs.size(), 0.25);
  ops.window_dot_accum(c.coefs.data(), o.spans.data(), o.windows.data(), p, n,
                       o.dot.data());
  o.axpy.assign(c.xs.size(), 1.5);
  ops.axpy(-0.75, c.xs.data(), o.axpy.data(), n);
  return o;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar spline kernels agree with the public evaluation") {
  std::mt19937_64 gen(51);
  const Ops& S = kernels::scalar_ops();
  for (int trial = 0; trial < 12; ++trial) {
    const Case c = make_case(gen, static_cast<int>(gen() % 6), 33);
    const Outputs o = run_ops(S, c);
    const interp::Spline1D s(c.kv, c.coefs);
    for (std::size_t k = 0; k < c.xs.size(); ++k) {
      CHECK(o.eval[k] == interp::spline_eval(s, c.xs[k]));
      const interp::ValueDeriv vd = interp::spline_eval_deriv(s, c.xs[k]);
      CHECK(o.val[k] == vd.value);
      CHECK(o.dval[k] == vd.deriv);
    }
  }
}

TEST_CASE("scalar window batch reproduces the recursive basis values") {
  std::mt19937_64 gen(53);
  const Ops& S = kernels::scalar_ops();
  for (int trial = 0; trial < 10; ++trial) {
    const int p = static_cast<int>(gen() % 6);
    const Case c = make_case(gen, p, 17);
    const Outputs o = run_ops(S, c);
    const auto& t = c.kv.knots();
    const int n = static_cast<int>(c.xs.size());
    for (std::size_t k = 0; k < c.xs.size(); ++k) {
      // Window w maps to basis index spans[k] - p + w of the clamped point.
      const double lo = c.kv.domain_min(), hi = c.kv.domain_max();
      const double xc = c.xs[k] < lo ? lo : (c.xs[k] > hi ? hi : c.xs[k]);
      CHECK(o.spans[k] == o.spans2[k]);
      CHECK(o.spans[k] >= p);
      CHECK(o.spans[k] <= c.kv.last_index() - p - 1);
      for (int w = 0; w <= p; ++w) {
        const int i = o.spans[k] - p + w;
        const double want = oracle::recursive_bspline(t, i, p, xc);
        CHECK(o.windows[static_cast<std::size_t>(w) * n + k] ==
              doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("derivative windows are zero for clamped points") {
  std::mt19937_64 gen(57);
  const Ops& S = kernels::scalar_ops();
  const Case c = make_case(gen, 3, 21);
  const Outputs o = run_ops(S, c);
  const int n = static_cast<int>(c.xs.size());
  for (std::size_t k = 0; k < c.xs.size(); ++k) {
    if (c.xs[k] < c.kv.domain_min() || c.xs[k] > c.kv.domain_max()) {
      for (int w = 0; w <= 3; ++w)
        CHECK(o.dwindows[static_cast<std::size_t>(w) * n + k] == 0.0);
    }
  }
}

TEST_CASE("window_dot_accum adds onto the output buffer") {
  const Ops& S = kernels::scalar_ops();
  const interp::KnotVector kv = interp::uniform_knots(-1.0, 1.0, 4, 2);
  std::vector<double> coefs(static_cast<std::size_t>(kv.basis_count()), 1.0);
  const std::vector<double> xs{-0.5, 0.0, 0.5};
  std::vector<int> spans(xs.size());
  std::vector<double> windows(3 * xs.size());
  S.basis_window_batch(kv.knots().data(),
                       static_cast<int>(kv.knots().size()), 2, xs.data(),
                       static_cast<int>(xs.size()), spans.data(),
                       windows.data());
  std::vector<double> out{10.0, 20.0, 30.0};
  S.window_dot_accum(coefs.data(), spans.data(), windows.data(), 2,
                     static_cast<int>(xs.size()), out.data());
  // All-ones coefficients dot a partition of unity: adds exactly 1.
  CHECK(out[0] == doctest::Approx(11.0).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(21.0).epsilon(1e-12));
  CHECK(out[2] == doctest::Approx(31.0).epsilon(1e-12));
}

#if KANLAB_TEST_HAVE_AVX2

TEST_CASE("avx2 kernels are bit-identical to the scalar reference") {
  if (!kernels::avx2_supported()) {
    MESSAGE("AVX2 not supported on this CPU; skipping");
    return;
  }
  std::mt19937_64 gen(61);
  const Ops& S = kernels::scalar_ops();
  const Ops& V = kernels::avx2_ops();
  CHECK(std::string(V.name) == "avx2");
  for (int trial = 0; trial < 40; ++trial) {
    // Sizes straddle the 4-lane width to exercise the remainder loops; the
    // degree range crosses the vector-path limit into scalar fallback.
    const int n = 1 + static_cast<int>(gen() % 23);
    const int degree = static_cast<int>(gen() % 14);
    const Case c = make_case(gen, degree, n);
    const Outputs a = run_ops(S, c);
    const Outputs b = run_ops(V, c);
    CHECK(a.spans == b.spans);
    CHECK(a.spans2 == b.spans2);
    CHECK(bitwise_equal(a.eval, b.eval));
    CHECK(bitwise_equal(a.val, b.val));
    CHECK(bitwise_equal(a.dval, b.dval));
    CHECK(bitwise_equal(a.windows, b.windows));
    CHECK(bitwise_equal(a.dwindows, b.dwindows));
    CHECK(bitwise_equal(a.dot, b.dot));
    CHECK(bitwise_equal(a.axpy, b.axpy));
  }
}

TEST_CASE("backend selection is explicit and sticky") {
  const kernels::Backend before = kernels::active_backend();
  kernels::set_backend(kernels::Backend::scalar);
  CHECK(std::string(kernels::active().name) == "scalar");
  if (kernels::avx2_supported()) {
    kernels::set_backend(kernels::Backend::avx2);
    CHECK(std::string(kernels::active().name) == "avx2");
  }
  kernels::set_backend(before);
}

#endif  // KANLAB_TEST_HAVE_AVX2

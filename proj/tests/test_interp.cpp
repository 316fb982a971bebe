#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "kanlab/interp/interp.hpp"

using namespace kanlab::interp;

namespace {

double eval_cubic(const std::vector<double>& c, double x) {
  return c[0] + x * (c[1] + x * (c[2] + x * c[3]));
}

double eval_cubic_deriv(const std::vector<double>& c, double x) {
  return c[1] + x * (2.0 * c[2] + x * 3.0 * c[3]);
}

}  // namespace

TEST_CASE("linear_interpolate hits endpoints and midpoints") {
  const Point a{1.0, 2.0}, b{3.0, -4.0};
  CHECK(linear_interpolate(a, b, 1.0) == 2.0);
  CHECK(linear_interpolate(a, b, 2.0) == doctest::Approx(-1.0));
  // Extrapolation continues the same line.
  CHECK(linear_interpolate(a, b, 4.0) == doctest::Approx(-7.0));
  CHECK_THROWS_AS(linear_interpolate(a, Point{1.0, 5.0}, 1.0),
                  std::domain_error);
}

TEST_CASE("PointSet requires strictly increasing abscissae") {
  CHECK_THROWS_AS(PointSet(std::vector<Point>{{0.0, 1.0}, {0.0, 2.0}}),
                  std::domain_error);
  CHECK_THROWS_AS(PointSet(std::vector<Point>{{1.0, 1.0}, {0.0, 2.0}}),
                  std::domain_error);
  CHECK_THROWS_AS(PointSet(std::vector<Point>{}), std::domain_error);
  const PointSet ps(std::vector<Point>{{0.0, 1.0}, {2.0, 3.0}});
  CHECK(ps.size() == 2);
  CHECK(ps.x_min() == 0.0);
  CHECK(ps.x_max() == 2.0);
}

TEST_CASE("lagrange basis is cardinal on its nodes") {
  const std::vector<double> nodes{-1.0, -0.25, 0.5, 2.0};
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j)
      CHECK(lagrange_basis(nodes, i, nodes[j]) ==
            doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("lagrange interpolation reproduces low-degree polynomials") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int deg = trial % 6;
    std::vector<double> coef(static_cast<std::size_t>(deg) + 1);
    for (double& c : coef) c = U(gen);
    auto poly = [&](double x) {
      double acc = 0.0;
      for (std::size_t k = coef.size(); k-- > 0;) acc = acc * x + coef[k];
      return acc;
    };
    std::vector<double> nodes, values;
    for (int k = 0; k <= deg; ++k) {
      const double x = -1.0 + 2.0 * k / std::max(deg, 1) + 0.01 * U(gen);
      nodes.push_back(x);
      values.push_back(poly(x));
    }
    const LagrangePoly lp(nodes, values);
    for (int probe = 0; probe < 20; ++probe) {
      const double x = 1.5 * U(gen);
      CHECK(lagrange_eval(lp, x) == doctest::Approx(poly(x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("lagrange rejects duplicate nodes and size mismatch") {
  CHECK_THROWS_AS(LagrangePoly({0.0, 0.0}, {1.0, 2.0}), std::domain_error);
  CHECK_THROWS_AS(LagrangePoly({0.0, 1.0}, {1.0}), std::domain_error);
  CHECK_THROWS_AS(LagrangePoly({}, {}), std::domain_error);
}

TEST_CASE("hermite segment matches an explicit cubic") {
  // q(x) = 2 - x + 3x^2 - 0.5x^3 on [0.25, 1.75], with exact end slopes.
  const std::vector<double> c{2.0, -1.0, 3.0, -0.5};
  const Point p0{0.25, eval_cubic(c, 0.25)}, p1{1.75, eval_cubic(c, 1.75)};
  const double k1 = eval_cubic_deriv(c, 0.25), k2 = eval_cubic_deriv(c, 1.75);
  for (double x : {0.25, 0.5, 1.0, 1.5, 1.75}) {
    CHECK(hermite_segment_eval(p0, p1, k1, k2, x) ==
          doctest::Approx(eval_cubic(c, x)).epsilon(1e-13));
    CHECK(hermite_segment_deriv(p0, p1, k1, k2, x) ==
          doctest::Approx(eval_cubic_deriv(c, x)).epsilon(1e-12));
    CHECK(hermite_segment_second_deriv(p0, p1, k1, k2, x) ==
          doctest::Approx(2.0 * c[2] + 6.0 * c[3] * x).epsilon(1e-11));
  }
  CHECK_THROWS_AS(hermite_segment_eval(p0, p1, k1, k2, 2.0),
                  std::domain_error);
}

TEST_CASE("natural cubic spline interpolates and has zero end curvature") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<Point> pts;
  double x = 0.0;
  for (int k = 0; k < 9; ++k) {
    pts.push_back({x, U(gen)});
    x += 0.3 + 0.5 * std::abs(U(gen));
  }
  const PointSet ps(pts);
  const CubicSpline s = cubic_spline_fit(ps, Boundary::natural());
  REQUIRE(s.slopes.size() == pts.size());
  for (const Point& p : pts)
    CHECK(cubic_spline_eval(s, p.x) == doctest::Approx(p.y).epsilon(1e-12));
  // Second derivative vanishes at both boundary knots.
  const std::size_t n = pts.size();
  CHECK(hermite_segment_second_deriv(pts[0], pts[1], s.slopes[0], s.slopes[1],
                                     pts[0].x) == doctest::Approx(0.0));
  CHECK(hermite_segment_second_deriv(pts[n - 2], pts[n - 1], s.slopes[n - 2],
                                     s.slopes[n - 1], pts[n - 1].x) ==
        doctest::Approx(0.0));
}

TEST_CASE("natural cubic spline is C2 at interior knots") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Point> pts;
    double x = U(gen);
    const int n = 4 + static_cast<int>(gen() % 8);
    for (int k = 0; k < n; ++k) {
      pts.push_back({x, U(gen)});
      x += 0.2 + std::abs(U(gen));
    }
    const CubicSpline s = cubic_spline_fit(PointSet(pts), Boundary::natural());
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
      const double left = hermite_segment_second_deriv(
          pts[k - 1], pts[k], s.slopes[k - 1], s.slopes[k], pts[k].x);
      const double right = hermite_segment_second_deriv(
          pts[k], pts[k + 1], s.slopes[k], s.slopes[k + 1], pts[k].x);
      CHECK(std::abs(left - right) < 1e-8);
    }
  }
}

TEST_CASE("clamped cubic spline reproduces cubics exactly") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> c{U(gen), U(gen), U(gen), U(gen)};
    std::vector<Point> pts;
    for (int k = 0; k <= 6; ++k) {
      const double x = -1.0 + 2.0 * k / 6.0;
      pts.push_back({x, eval_cubic(c, x)});
    }
    const CubicSpline s = cubic_spline_fit(
        PointSet(pts), Boundary::clamped(eval_cubic_deriv(c, -1.0),
                                         eval_cubic_deriv(c, 1.0)));
    for (int probe = 0; probe <= 40; ++probe) {
      const double x = -1.0 + 2.0 * probe / 40.0;
      CHECK(std::abs(cubic_spline_eval(s, x) - eval_cubic(c, x)) < 1e-9);
    }
  }
}

TEST_CASE("cubic spline evaluation outside the knot range is an error") {
  const CubicSpline s = cubic_spline_fit(
      PointSet({{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}}), Boundary::natural());
  CHECK_THROWS_AS(cubic_spline_eval(s, -0.1), std::domain_error);
  CHECK_THROWS_AS(cubic_spline_eval(s, 2.1), std::domain_error);
}

TEST_CASE("two-point natural spline degenerates to the straight line") {
  const CubicSpline s = cubic_spline_fit(PointSet(std::vector<Point>{{0.0, 1.0}, {2.0, 5.0}}),
                                         Boundary::natural());
  CHECK(cubic_spline_eval(s, 0.5) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(cubic_spline_eval(s, 1.5) == doctest::Approx(4.0).epsilon(1e-13));
}

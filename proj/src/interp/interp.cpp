#include "kanlab/interp/interp.hpp"

#include <algorithm>
#include <cmath>

#include "kanlab/common.hpp"

namespace kanlab::interp {

PointSet::PointSet(std::vector<Point> pts) : pts_(std::move(pts)) {
  expect(!pts_.empty(), "PointSet: at least one point required");
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    expect(std::isfinite(pts_[i].x) && std::isfinite(pts_[i].y),
           "PointSet: points must be finite");
    if (i > 0)
      expect(pts_[i - 1].x < pts_[i].x,
             "PointSet: abscissae must be strictly increasing");
  }
}

PointSet::PointSet(std::vector<double> xs, std::vector<double> ys)
    : PointSet([&] {
        expect(xs.size() == ys.size(), "PointSet: xs and ys lengths differ");
        std::vector<Point> pts(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) pts[i] = {xs[i], ys[i]};
        return pts;
      }()) {}

double linear_interpolate(const Point& a, const Point& b, double x) {
  expect(a.x != b.x, "linear_interpolate: degenerate segment (a.x == b.x)");
  return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

LagrangePoly::LagrangePoly(std::vector<double> nodes,
                           std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  expect(!nodes_.empty(), "LagrangePoly: at least one node required");
  expect(nodes_.size() == values_.size(),
         "LagrangePoly: node and value counts differ");
  for (double v : nodes_)
    expect(std::isfinite(v), "LagrangePoly: nodes must be finite");
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (std::size_t j = i + 1; j < nodes_.size(); ++j)
      expect(nodes_[i] != nodes_[j], "LagrangePoly: duplicate nodes");
}

double lagrange_basis(std::span<const double> nodes, std::size_t i, double x) {
  expect(i < nodes.size(), "lagrange_basis: index out of range");
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b)
      expect(nodes[a] != nodes[b], "lagrange_basis: duplicate nodes");
  double prod = 1.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (j == i) continue;
    prod *= (x - nodes[j]) / (nodes[i] - nodes[j]);
  }
  return prod;
}

double lagrange_eval(const LagrangePoly& poly, double x) {
  const auto& nodes = poly.nodes();
  const auto& values = poly.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double basis = 1.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (j == i) continue;
      basis *= (x - nodes[j]) / (nodes[i] - nodes[j]);
    }
    sum += basis * values[i];
  }
  return sum;
}

namespace {

struct HermiteCoeffs {
  double t, h, a, b, dy;
};

HermiteCoeffs hermite_coeffs(const Point& p0, const Point& p1, double k1,
                             double k2, double x) {
  expect(p0.x < p1.x, "hermite_segment: p0.x must be < p1.x");
  expect(x >= p0.x && x <= p1.x, "hermite_segment: x outside segment");
  const double h = p1.x - p0.x;
  const double dy = p1.y - p0.y;
  return {(x - p0.x) / h, h, k1 * h - dy, -k2 * h + dy, dy};
}

}  // namespace

double hermite_segment_eval(const Point& p0, const Point& p1, double k1,
                            double k2, double x) {
  const auto c = hermite_coeffs(p0, p1, k1, k2, x);
  const double t = c.t;
  return (1.0 - t) * p0.y + t * p1.y +
         t * (1.0 - t) * ((1.0 - t) * c.a + t * c.b);
}

double hermite_segment_deriv(const Point& p0, const Point& p1, double k1,
                             double k2, double x) {
  const auto c = hermite_coeffs(p0, p1, k1, k2, x);
  const double t = c.t;
  // d/dt of the symmetric form, divided by the segment width.
  const double dq_dt = c.dy + c.a * (1.0 - t) * (1.0 - 3.0 * t) +
                       c.b * t * (2.0 - 3.0 * t);
  return dq_dt / c.h;
}

double hermite_segment_second_deriv(const Point& p0, const Point& p1,
                                    double k1, double k2, double x) {
  const auto c = hermite_coeffs(p0, p1, k1, k2, x);
  const double t = c.t;
  const double d2q_dt2 = c.a * (6.0 * t - 4.0) + c.b * (2.0 - 6.0 * t);
  return d2q_dt2 / (c.h * c.h);
}

CubicSpline::CubicSpline(PointSet knots_in, std::vector<double> slopes_in,
                         Boundary boundary_in)
    : knots(std::move(knots_in)),
      slopes(std::move(slopes_in)),
      boundary(boundary_in) {
  expect(slopes.size() == knots.size(),
         "CubicSpline: one slope per knot required");
}

CubicSpline cubic_spline_fit(const PointSet& points, const Boundary& bc) {
  const std::size_t n = points.size();
  expect(n >= 2, "cubic_spline_fit: at least 2 points required");

  // Unknowns are the knot slopes k_0..k_{n-1}.  Interior rows enforce
  // second-derivative continuity:
  //   k_{i-1}/h_{i-1} + 2 k_i (1/h_{i-1} + 1/h_i) + k_{i+1}/h_i
  //     = 3 (d_{i-1}/h_{i-1} + d_i/h_i),   d_i = (y_{i+1}-y_i)/h_i.
  // Natural ends (q'' = 0): 2 k_0 + k_1 = 3 d_0 and k_{n-2} + 2 k_{n-1}
  // = 3 d_{n-2}; clamped ends pin the slope directly.
  std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);

  auto h = [&](std::size_t i) { return points[i + 1].x - points[i].x; };
  auto d = [&](std::size_t i) {
    return (points[i + 1].y - points[i].y) / h(i);
  };

  if (bc.kind == Boundary::Kind::natural) {
    diag[0] = 2.0;
    upper[0] = 1.0;
    rhs[0] = 3.0 * d(0);
    diag[n - 1] = 2.0;
    lower[n - 1] = 1.0;
    rhs[n - 1] = 3.0 * d(n - 2);
  } else {
    diag[0] = 1.0;
    rhs[0] = bc.slope_first;
    diag[n - 1] = 1.0;
    rhs[n - 1] = bc.slope_last;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    lower[i] = 1.0 / h(i - 1);
    diag[i] = 2.0 * (1.0 / h(i - 1) + 1.0 / h(i));
    upper[i] = 1.0 / h(i);
    rhs[i] = 3.0 * (d(i - 1) / h(i - 1) + d(i) / h(i));
  }

  // Thomas algorithm; the system is strictly diagonally dominant.
  std::vector<double> c(n, 0.0), g(n, 0.0);
  c[0] = upper[0] / diag[0];
  g[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double m = diag[i] - lower[i] * c[i - 1];
    c[i] = upper[i] / m;
    g[i] = (rhs[i] - lower[i] * g[i - 1]) / m;
  }
  std::vector<double> slopes(n);
  slopes[n - 1] = g[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) slopes[i] = g[i] - c[i] * slopes[i + 1];

  return CubicSpline(points, std::move(slopes), bc);
}

double cubic_spline_eval(const CubicSpline& spline, double x) {
  const auto& pts = spline.knots.points();
  expect(x >= pts.front().x && x <= pts.back().x,
         "cubic_spline_eval: x outside the knot range");
  // Largest segment start <= x, clamped so x == last knot uses the last
  // segment.
  auto it = std::upper_bound(pts.begin(), pts.end(), x,
                             [](double v, const Point& p) { return v < p.x; });
  std::size_t seg = static_cast<std::size_t>(it - pts.begin());
  seg = (seg == 0) ? 0 : seg - 1;
  if (seg > pts.size() - 2) seg = pts.size() - 2;
  return hermite_segment_eval(pts[seg], pts[seg + 1], spline.slopes[seg],
                              spline.slopes[seg + 1], x);
}

}  // namespace kanlab::interp

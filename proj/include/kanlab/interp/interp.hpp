#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kanlab::interp {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Sample points with strictly increasing abscissae.
class PointSet {
 public:
  explicit PointSet(std::vector<Point> pts);
  PointSet(std::vector<double> xs, std::vector<double> ys);

  const std::vector<Point>& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }
  const Point& operator[](std::size_t i) const { return pts_[i]; }
  double x_min() const { return pts_.front().x; }
  double x_max() const { return pts_.back().x; }

 private:
  std::vector<Point> pts_;
};

// Straight line through a and b evaluated at x.  Extrapolates linearly
// outside [a.x, b.x]; a.x == b.x is a domain error.
double linear_interpolate(const Point& a, const Point& b, double x);

// Interpolation nodes with values; nodes must be pairwise distinct but need
// not be sorted.
class LagrangePoly {
 public:
  LagrangePoly(std::vector<double> nodes, std::vector<double> values);
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
};

// i-th Lagrange basis polynomial over the given nodes: 1 at nodes[i], 0 at
// every other node.
double lagrange_basis(std::span<const double> nodes, std::size_t i, double x);

// Interpolating polynomial through (nodes, values) evaluated at x.
double lagrange_eval(const LagrangePoly& poly, double x);

// Cubic Hermite segment between p0 and p1 with end slopes k1 and k2, in the
// symmetric form q = (1-t) y1 + t y2 + t (1-t) ((1-t) a + t b) where
// t = (x - x1)/(x2 - x1), a = k1 (x2-x1) - (y2-y1), b = -k2 (x2-x1) + (y2-y1).
// x outside the segment is a domain error; the spline container picks the
// segment.
double hermite_segment_eval(const Point& p0, const Point& p1, double k1,
                            double k2, double x);
double hermite_segment_deriv(const Point& p0, const Point& p1, double k1,
                             double k2, double x);
// Second derivative of the segment; used to verify C2 continuity.
double hermite_segment_second_deriv(const Point& p0, const Point& p1,
                                    double k1, double k2, double x);

struct Boundary {
  enum class Kind { natural, clamped };
  Kind kind = Kind::natural;
  double slope_first = 0.0;  // used when clamped
  double slope_last = 0.0;

  static Boundary natural() { return {}; }
  static Boundary clamped(double k_first, double k_last) {
    return {Kind::clamped, k_first, k_last};
  }
};

struct CubicSpline {
  CubicSpline(PointSet knots, std::vector<double> slopes, Boundary boundary);
  PointSet knots;
  std::vector<double> slopes;  // one per knot
  Boundary boundary;
};

// Solves the standard tridiagonal system for knot slopes so that first and
// second derivatives agree at interior knots.  Natural boundaries zero the
// second derivative at both ends; clamped boundaries pin the end slopes.
CubicSpline cubic_spline_fit(const PointSet& points, const Boundary& boundary);

// Piecewise Hermite evaluation; x outside [first knot, last knot] is a
// domain error (no extrapolation).
double cubic_spline_eval(const CubicSpline& spline, double x);

}  // namespace kanlab::interp

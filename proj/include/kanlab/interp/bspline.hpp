#pragma once

#include <vector>

#include "kanlab/interp/interp.hpp"

namespace kanlab::interp {

// Non-decreasing knot sequence t_0..t_m with a declared degree p.
//
// Conventions used throughout the library:
//   - number of basis functions: m - p (indices 0..m-p-1)
//   - fully supported domain: [t_p, t_{m-p}]
//   - zeroth-order bases are indicators of [t_i, t_{i+1}), except that the
//     last non-empty interval ending at t_m also claims t_m itself, so the
//     partition of unity holds up to and including the right end
//   - any 0/0 term in the recursion is defined as 0 (repeated knots)
class KnotVector {
 public:
  KnotVector(std::vector<double> knots, int degree);

  const std::vector<double>& knots() const { return knots_; }
  int degree() const { return degree_; }
  int last_index() const { return static_cast<int>(knots_.size()) - 1; }  // m
  int basis_count() const { return last_index() - degree_; }
  double domain_min() const { return knots_[static_cast<std::size_t>(degree_)]; }
  double domain_max() const {
    return knots_[static_cast<std::size_t>(last_index() - degree_)];
  }

 private:
  std::vector<double> knots_;
  int degree_;
};

// G+1 uniformly spaced knots on [a, b] extended by p extra knots per side:
// total G + 2p + 1 knots, G + p basis functions, supported domain [a, b].
// Knot j (counted from -p) is the exact affine combination
// (a*(G-j) + b*j)/G, which lands on a and b exactly.
KnotVector uniform_knots(double a, double b, int grid_size, int degree);

// Cox-de Boor basis value B_{i,p}(t).  p may be any degree <= kv.degree();
// valid indices are 0 <= i <= m - p - 1.  Zero outside [t_i, t_{i+p+1}].
double bspline_basis(const KnotVector& kv, int i, int p, double t);

// Derivative of B_{i,p} at t:
//   p * ( B_{i,p-1}(t)/(t_{i+p}-t_i) - B_{i+1,p-1}(t)/(t_{i+p+1}-t_{i+1}) )
// with 0/0 terms as 0.  For p == 0 the derivative is 0 everywhere
// (piecewise-constant convention).  At a knot the value is the right-limit
// one, matching the half-open interval convention.
double bspline_basis_derivative(const KnotVector& kv, int i, int p, double t);

// B-spline curve: coefficients over a knot vector, one per basis function.
struct Spline1D {
  Spline1D(KnotVector kv, std::vector<double> coefficients);
  KnotVector knots;
  std::vector<double> coeffs;
};

// S(x) = sum_i alpha_i B_{i,p}(x) computed over the p+1 locally supported
// bases.  x outside the supported domain is clamped to the boundary, so
// evaluation is total and never NaN for finite x.
double spline_eval(const Spline1D& s, double x);

struct ValueDeriv {
  double value = 0.0;
  double deriv = 0.0;
};

// Value and derivative of the clamped evaluation: outside the supported
// domain the value is the boundary value and the derivative is 0.
ValueDeriv spline_eval_deriv(const Spline1D& s, double x);

// Least-squares coefficients for the given samples via the normal equations
// with a dense Cholesky solve.  Errors: fewer samples than basis functions;
// samples outside the supported domain; any basis function left with no
// sample support (reported by index); rank deficiency.
Spline1D spline_fit(const PointSet& samples, const KnotVector& kv);

}  // namespace kanlab::interp

#pragma once

// Quadrature on the reference shapes. Tensor shapes use Gauss-Legendre
// products; simplices use collapsed-coordinate rules with Gauss-Jacobi
// weights absorbing the Duffy Jacobian, so polynomial exactness is retained.

#include "sipdg/common.hpp"
#include "sipdg/shapes.hpp"

namespace sipdg {

struct QuadratureRule {
  Shape shape;
  Matrix points;   // dim x n_points, reference coordinates
  Vector weights;  // n_points, includes the reference measure
};

// Gauss-Legendre rule on [0,1]; exact for polynomials of degree 2n-1.
void gauss_legendre_01(int n, Vector& points, Vector& weights);

// Gauss rule on [0,1] for the weight (1-x)^alpha; exact for polynomial
// factors of degree 2n-1.
void gauss_jacobi_01(int n, int alpha, Vector& points, Vector& weights);

// Rule exact for polynomials of (total degree on simplices / per-axis degree
// on tensor shapes) at least `degree`.
QuadratureRule quadrature(Shape shape, int degree);

// Gauss-Legendre product rule with a fixed number of points per axis
// (tensor shapes only).
QuadratureRule tensor_gauss(Shape shape, int points_per_axis);

}  // namespace sipdg

#pragma once

// Reference-orthonormal modal bases. Generators are products of shifted
// Legendre polynomials on [0,1] (restricted to total degree p on simplices,
// per-axis degree p on tensor shapes); a Cholesky factorization of the
// reference Gram matrix turns them into an orthonormal basis, which is the
// Legendre product basis on tensor shapes and a Dubiner-equivalent basis on
// simplices.

#include "sipdg/common.hpp"
#include "sipdg/quadrature.hpp"
#include "sipdg/shapes.hpp"

#include <vector>

namespace sipdg {

class BasisSet {
 public:
  BasisSet(Shape shape, int p);

  Shape shape() const { return shape_; }
  int degree() const { return p_; }
  Index size() const { return static_cast<Index>(exponents_.size()); }

  // Basis values at reference points (dim x n_points), as n_points x size.
  Matrix values(const Matrix& points) const;

  // Per-axis derivative matrices, each n_points x size.
  std::vector<Matrix> gradients(const Matrix& points) const;

 private:
  Matrix generator_values(const Matrix& points, int diff_axis) const;

  Shape shape_;
  int p_;
  std::vector<std::array<int, 3>> exponents_;
  Matrix coeff_;  // column j holds the generator coefficients of basis j
};

}  // namespace sipdg

#include "sipdg/basis.hpp"

#include <array>
#include <cmath>

namespace sipdg {

namespace {

// Orthonormal shifted Legendre values/derivatives on [0,1], degrees 0..p.
void legendre_01(int p, Real x, std::vector<Real>& val, std::vector<Real>& der) {
  Real t = 2.0 * x - 1.0;
  std::vector<Real> P(p + 1), D(p + 1);
  P[0] = 1.0;
  D[0] = 0.0;
  if (p >= 1) {
    P[1] = t;
    D[1] = 1.0;
  }
  for (int k = 1; k < p; ++k) {
    P[k + 1] = ((2.0 * k + 1.0) * t * P[k] - k * P[k - 1]) / (k + 1.0);
    D[k + 1] = D[k - 1] + (2.0 * k + 1.0) * P[k];
  }
  val.resize(p + 1);
  der.resize(p + 1);
  for (int k = 0; k <= p; ++k) {
    Real scale = std::sqrt(2.0 * k + 1.0);
    val[k] = scale * P[k];
    der[k] = scale * 2.0 * D[k];  // chain rule for t = 2x-1
  }
}

std::vector<std::array<int, 3>> graded_exponents(const ShapeInfo& info, int p, bool total_degree) {
  std::vector<std::array<int, 3>> out;
  int dim = info.dim;
  int max_sum = total_degree ? p : dim * p;
  for (int s = 0; s <= max_sum; ++s) {
    std::array<int, 3> a{0, 0, 0};
    std::function<void(int, int)> rec = [&](int axis, int rem) {
      if (axis == dim - 1) {
        if (rem <= p) {
          a[axis] = rem;
          out.push_back(a);
        }
        return;
      }
      for (int k = std::min(rem, p); k >= 0; --k) {
        a[axis] = k;
        rec(axis + 1, rem - k);
      }
    };
    if (dim == 0) {
      if (s == 0) out.push_back(a);
    } else {
      rec(0, s);
    }
  }
  return out;
}

}  // namespace

BasisSet::BasisSet(Shape shape, int p) : shape_(shape), p_(p) {
  if (p < 0) throw InvalidInputError("BasisSet: p must be nonnegative");
  const ShapeInfo& info = shape_info(shape);
  exponents_ = graded_exponents(info, p, info.simplex);
  Index nb = static_cast<Index>(exponents_.size());
  if (nb != basis_dimension(shape, p)) throw NumericalError("BasisSet: exponent enumeration mismatch");
  if (shape == Shape::point) {
    coeff_ = Matrix::Ones(1, 1);
    return;
  }
  QuadratureRule rule = quadrature(shape, 2 * p);
  Matrix gen = generator_values(rule.points, -1);
  Matrix gram = gen.transpose() * rule.weights.asDiagonal() * gen;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) throw NumericalError("BasisSet: reference Gram matrix is not SPD");
  // basis = gen * L^{-T}: columns solve L^T coeff = I
  coeff_ = llt.matrixL().transpose().solve(Matrix::Identity(nb, nb));
}

Matrix BasisSet::generator_values(const Matrix& points, int diff_axis) const {
  const ShapeInfo& info = shape_info(shape_);
  Index np = points.cols();
  Index nb = static_cast<Index>(exponents_.size());
  Matrix out(np, nb);
  std::vector<Real> val, der;
  std::vector<std::vector<Real>> vals(info.dim), ders(info.dim);
  for (Index q = 0; q < np; ++q) {
    for (int axis = 0; axis < info.dim; ++axis) {
      legendre_01(p_, points(axis, q), vals[axis], ders[axis]);
    }
    for (Index j = 0; j < nb; ++j) {
      Real v = 1.0;
      for (int axis = 0; axis < info.dim; ++axis) {
        int k = exponents_[j][axis];
        v *= (axis == diff_axis) ? ders[axis][k] : vals[axis][k];
      }
      out(q, j) = v;
    }
  }
  return out;
}

Matrix BasisSet::values(const Matrix& points) const { return generator_values(points, -1) * coeff_; }

std::vector<Matrix> BasisSet::gradients(const Matrix& points) const {
  const ShapeInfo& info = shape_info(shape_);
  std::vector<Matrix> out;
  out.reserve(info.dim);
  for (int axis = 0; axis < info.dim; ++axis) out.push_back(generator_values(points, axis) * coeff_);
  return out;
}

}  // namespace sipdg

#include "sipdg/quadrature.hpp"

#include <cmath>

namespace sipdg {

namespace {

// Golub-Welsch on the Jacobi weight (1-x)^a (1+x)^b over [-1,1].
void gauss_jacobi_sym(int n, Real a, Real b, Vector& x, Vector& w) {
  if (n < 1) throw InvalidInputError("gauss rule needs at least one point");
  Matrix J = Matrix::Zero(n, n);
  auto diag = [&](int k) -> Real {
    if (k == 0) return (b - a) / (a + b + 2.0);
    Real s = 2.0 * k + a + b;
    return (b * b - a * a) / (s * (s + 2.0));
  };
  auto offdiag = [&](int k) -> Real {  // k >= 1
    Real s = 2.0 * k + a + b;
    Real num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
    Real den = s * s * (s + 1.0) * (s - 1.0);
    return std::sqrt(num / den);
  };
  for (int k = 0; k < n; ++k) J(k, k) = diag(k);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = offdiag(k);
  Eigen::SelfAdjointEigenSolver<Matrix> es(J);
  if (es.info() != Eigen::Success) throw NumericalError("gauss rule: tridiagonal eigensolve failed");
  Real mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0);
  x = es.eigenvalues();
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    Real v0 = es.eigenvectors()(0, i);
    w[i] = mu0 * v0 * v0;
  }
}

int points_for_degree(int degree) { return std::max(1, (degree + 2) / 2); }

QuadratureRule product_rule(Shape shape, const std::vector<Vector>& xs, const std::vector<Vector>& ws) {
  const ShapeInfo& info = shape_info(shape);
  Index total = 1;
  for (const auto& x : xs) total *= x.size();
  QuadratureRule rule;
  rule.shape = shape;
  rule.points.resize(info.dim, total);
  rule.weights.resize(total);
  std::vector<Index> idx(info.dim, 0);
  for (Index q = 0; q < total; ++q) {
    Real w = 1.0;
    for (int dd = 0; dd < info.dim; ++dd) {
      rule.points(dd, q) = xs[dd][idx[dd]];
      w *= ws[dd][idx[dd]];
    }
    rule.weights[q] = w;
    for (int dd = 0; dd < info.dim; ++dd) {
      if (++idx[dd] < xs[dd].size()) break;
      idx[dd] = 0;
    }
  }
  return rule;
}

// Collapse a product rule onto the simplex. For the triangle:
//   x = r (1-s), y = s, dxdy = (1-s) dr ds
// and for the tetrahedron:
//   x = r (1-s)(1-t), y = s (1-t), z = t, dxdydz = (1-s)(1-t)^2 dr ds dt,
// with the extra factors carried by the Gauss-Jacobi weights.
QuadratureRule collapsed_simplex(Shape shape, int n) {
  Vector xr, wr, xs, ws, xt, wt;
  gauss_legendre_01(n, xr, wr);
  gauss_jacobi_01(n, 1, xs, ws);
  if (shape == Shape::triangle) {
    QuadratureRule prod = product_rule(Shape::quad, {xr, xs}, {wr, ws});
    QuadratureRule rule;
    rule.shape = shape;
    rule.points.resize(2, prod.weights.size());
    rule.weights = prod.weights;
    for (Index q = 0; q < prod.weights.size(); ++q) {
      Real r = prod.points(0, q), s = prod.points(1, q);
      rule.points(0, q) = r * (1.0 - s);
      rule.points(1, q) = s;
    }
    return rule;
  }
  gauss_jacobi_01(n, 2, xt, wt);
  QuadratureRule prod = product_rule(Shape::hex, {xr, xs, xt}, {wr, ws, wt});
  QuadratureRule rule;
  rule.shape = shape;
  rule.points.resize(3, prod.weights.size());
  rule.weights = prod.weights;
  for (Index q = 0; q < prod.weights.size(); ++q) {
    Real r = prod.points(0, q), s = prod.points(1, q), t = prod.points(2, q);
    rule.points(0, q) = r * (1.0 - s) * (1.0 - t);
    rule.points(1, q) = s * (1.0 - t);
    rule.points(2, q) = t;
  }
  return rule;
}

}  // namespace

void gauss_legendre_01(int n, Vector& points, Vector& weights) {
  Vector x, w;
  gauss_jacobi_sym(n, 0.0, 0.0, x, w);
  points.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    points[i] = 0.5 * (x[i] + 1.0);
    weights[i] = 0.5 * w[i];
  }
}

void gauss_jacobi_01(int n, int alpha, Vector& points, Vector& weights) {
  // t = (1-x)/2 maps the Jacobi weight (1+x)^alpha on [-1,1] to (1-t)^alpha.
  Vector x, w;
  gauss_jacobi_sym(n, 0.0, static_cast<Real>(alpha), x, w);
  points.resize(n);
  weights.resize(n);
  Real scale = std::pow(2.0, -(alpha + 1.0));
  for (int i = 0; i < n; ++i) {
    points[i] = 0.5 * (1.0 - x[i]);
    weights[i] = scale * w[i];
  }
}

QuadratureRule quadrature(Shape shape, int degree) {
  if (degree < 0) throw InvalidInputError("quadrature: degree must be nonnegative");
  int n = points_for_degree(degree);
  switch (shape) {
    case Shape::point: {
      QuadratureRule rule;
      rule.shape = shape;
      rule.points = Matrix::Zero(0, 1);
      rule.weights = Vector::Ones(1);
      return rule;
    }
    case Shape::interval:
    case Shape::quad:
    case Shape::hex: return tensor_gauss(shape, n);
    case Shape::triangle:
    case Shape::tet: return collapsed_simplex(shape, n);
  }
  throw InvalidInputError("quadrature: unknown shape");
}

QuadratureRule tensor_gauss(Shape shape, int points_per_axis) {
  const ShapeInfo& info = shape_info(shape);
  if (!info.tensor || shape == Shape::point)
    throw InvalidInputError("tensor_gauss: shape is not a tensor-product shape");
  Vector x, w;
  gauss_legendre_01(points_per_axis, x, w);
  std::vector<Vector> xs(info.dim, x), ws(info.dim, w);
  return product_rule(shape, xs, ws);
}

}  // namespace sipdg

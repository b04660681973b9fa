#include <doctest.h>

#include "sipdg/basis.hpp"
#include "sipdg/mapping.hpp"
#include "sipdg/quadrature.hpp"
#include "sipdg/shapes.hpp"

#include <array>
#include <cmath>
#include <random>

using namespace sipdg;

namespace {

Real factorial(int n) {
  Real f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Closed-form monomial integrals over the reference shapes.
Real monomial_integral(Shape shape, const std::array<int, 3>& a) {
  const ShapeInfo& info = shape_info(shape);
  if (info.tensor) {
    Real v = 1.0;
    for (int axis = 0; axis < info.dim; ++axis) v /= (a[axis] + 1.0);
    return v;
  }
  // unit simplex: prod a_i! / (d + sum a_i)!
  int total = 0;
  Real num = 1.0;
  for (int axis = 0; axis < info.dim; ++axis) {
    num *= factorial(a[axis]);
    total += a[axis];
  }
  return num / factorial(info.dim + total);
}

Real integrate_monomial(const QuadratureRule& rule, const std::array<int, 3>& a) {
  const ShapeInfo& info = shape_info(rule.shape);
  Real sum = 0.0;
  for (Index q = 0; q < rule.weights.size(); ++q) {
    Real v = 1.0;
    for (int axis = 0; axis < info.dim; ++axis) v *= std::pow(rule.points(axis, q), a[axis]);
    sum += rule.weights[q] * v;
  }
  return sum;
}

void check_exactness(Shape shape, int degree) {
  const ShapeInfo& info = shape_info(shape);
  QuadratureRule rule = quadrature(shape, degree);
  int cap = degree;
  for (int ax = 0; ax <= (info.dim > 0 ? cap : 0); ++ax) {
    for (int ay = 0; ay <= (info.dim > 1 ? cap : 0); ++ay) {
      for (int az = 0; az <= (info.dim > 2 ? cap : 0); ++az) {
        std::array<int, 3> a{ax, ay, az};
        int total = ax + ay + az;
        bool covered = info.simplex && !info.tensor ? total <= degree : true;
        if (!covered) continue;
        Real expect = monomial_integral(shape, a);
        Real got = integrate_monomial(rule, a);
        CHECK(got == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

Matrix random_points(Shape shape, int n, unsigned seed) {
  const ShapeInfo& info = shape_info(shape);
  std::mt19937 gen(seed);
  std::uniform_real_distribution<Real> dist(0.05, 0.95);
  Matrix pts(info.dim, n);
  for (int q = 0; q < n; ++q) {
    Vector x(info.dim);
    for (;;) {
      for (int axis = 0; axis < info.dim; ++axis) x[axis] = dist(gen);
      if (info.tensor || x.sum() <= 0.95) break;
    }
    pts.col(q) = x;
  }
  return pts;
}

}  // namespace

TEST_CASE("quadrature is exact against closed-form monomial integrals") {
  SUBCASE("spot values") {
    // interval: x^1 -> 1/2; triangle: x -> 1/6; tet: x -> 1/24; hex: xyz -> 1/8
    CHECK(integrate_monomial(quadrature(Shape::interval, 2), {1, 0, 0}) == doctest::Approx(0.5));
    CHECK(integrate_monomial(quadrature(Shape::triangle, 2), {1, 0, 0}) == doctest::Approx(1.0 / 6.0));
    CHECK(integrate_monomial(quadrature(Shape::tet, 2), {1, 0, 0}) == doctest::Approx(1.0 / 24.0));
    CHECK(integrate_monomial(quadrature(Shape::hex, 3), {1, 1, 1}) == doctest::Approx(1.0 / 8.0));
  }
  for (Shape shape : {Shape::interval, Shape::triangle, Shape::quad, Shape::tet, Shape::hex}) {
    for (int degree = 0; degree <= 8; ++degree) check_exactness(shape, degree);
  }
}

TEST_CASE("gauss rules on [0,1]") {
  Vector x, w;
  gauss_legendre_01(3, x, w);
  CHECK(w.sum() == doctest::Approx(1.0));
  CHECK(x.dot(w) == doctest::Approx(0.5));
  // weight (1-t)^2: integral of t against it is 1/12
  gauss_jacobi_01(3, 2, x, w);
  CHECK(w.sum() == doctest::Approx(1.0 / 3.0));
  CHECK(x.dot(w) == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("basis dimensions and reference orthonormality") {
  CHECK(basis_dimension(Shape::triangle, 3) == 10);
  CHECK(basis_dimension(Shape::tet, 1) == 4);
  CHECK(basis_dimension(Shape::tet, 3) == 20);
  CHECK(basis_dimension(Shape::hex, 2) == 27);

  for (Shape shape : {Shape::interval, Shape::triangle, Shape::quad, Shape::tet, Shape::hex}) {
    for (int p = 0; p <= 4; ++p) {
      BasisSet basis(shape, p);
      REQUIRE(basis.size() == basis_dimension(shape, p));
      QuadratureRule rule = quadrature(shape, 2 * p);
      Matrix V = basis.values(rule.points);
      Matrix G = V.transpose() * rule.weights.asDiagonal() * V;
      Matrix err = G - Matrix::Identity(basis.size(), basis.size());
      CHECK(err.cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("basis gradients match central differences") {
  for (Shape shape : {Shape::interval, Shape::triangle, Shape::quad, Shape::tet, Shape::hex}) {
    const ShapeInfo& info = shape_info(shape);
    BasisSet basis(shape, 3);
    Matrix pts = random_points(shape, 4, 17);
    std::vector<Matrix> grads = basis.gradients(pts);
    const Real h = 1e-6;
    for (int q = 0; q < 4; ++q) {
      for (int axis = 0; axis < info.dim; ++axis) {
        Matrix pp = pts.col(q), pm = pts.col(q);
        pp(axis, 0) += h;
        pm(axis, 0) -= h;
        Matrix vp = basis.values(pp), vm = basis.values(pm);
        for (Index j = 0; j < basis.size(); ++j) {
          Real fd = (vp(0, j) - vm(0, j)) / (2.0 * h);
          CHECK(grads[axis](q, j) == doctest::Approx(fd).epsilon(5e-5));
        }
      }
    }
  }
}

TEST_CASE("element mappings") {
  SUBCASE("scaled cube: nu = 1/h on every face") {
    const Real h = 0.25;
    const ShapeInfo& info = shape_info(Shape::hex);
    ElementMapping map(Shape::hex, h * info.ref_vertices);
    CHECK(map.affine());
    CHECK(map.volume() == doctest::Approx(h * h * h));
    Vector center(2);
    center << 0.5, 0.5;
    for (int f = 0; f < 6; ++f) {
      FaceFrame frame = map.face_frame(f, center);
      CHECK(frame.face_jacobian == doctest::Approx(h * h));
      CHECK(map.nu(f, center) == doctest::Approx(1.0 / h));
      CHECK(frame.normal.norm() == doctest::Approx(1.0));
      // outward: normal points away from the element center
      Vector to_face = frame.position - map.map(Vector::Constant(3, 0.5));
      CHECK(frame.normal.dot(to_face) > 0.0);
    }
  }

  SUBCASE("1D faces have unit face jacobian") {
    Matrix nodes(1, 2);
    nodes << 0.0, 0.5;
    ElementMapping map(Shape::interval, nodes);
    Vector none(0);
    CHECK(map.face_frame(0, none).face_jacobian == doctest::Approx(1.0));
    CHECK(map.nu(0, none) == doctest::Approx(2.0));
    CHECK(map.face_frame(0, none).normal[0] == doctest::Approx(-1.0));
    CHECK(map.face_frame(1, none).normal[0] == doctest::Approx(1.0));
  }

  SUBCASE("pushforward matches central differences on a deformed hex") {
    const ShapeInfo& info = shape_info(Shape::hex);
    Matrix nodes = info.ref_vertices;
    nodes.col(6) << 1.4, 1.3, 1.2;  // pull one corner
    ElementMapping map(Shape::hex, nodes);
    CHECK(!map.affine());
    std::mt19937 gen(3);
    std::uniform_real_distribution<Real> dist(0.1, 0.9);
    const Real h = 1e-6;
    for (int trial = 0; trial < 5; ++trial) {
      Vector x(3);
      for (int axis = 0; axis < 3; ++axis) x[axis] = dist(gen);
      Matrix J = map.jacobian(x);
      for (int axis = 0; axis < 3; ++axis) {
        Vector xp = x, xm = x;
        xp[axis] += h;
        xm[axis] -= h;
        Vector fd = (map.map(xp) - map.map(xm)) / (2.0 * h);
        for (int i = 0; i < 3; ++i) CHECK(J(i, axis) == doctest::Approx(fd[i]).epsilon(1e-6));
      }
    }
  }

  SUBCASE("flipped element is rejected") {
    Matrix nodes(2, 3);
    nodes << 0, 0, 1, 0, 1, 0;  // clockwise triangle
    ElementMapping map(Shape::triangle, nodes);
    CHECK_THROWS_AS(map.jacobian_det(Vector::Constant(2, 0.25)), MappingError);
  }
}

TEST_CASE("inscribed diameters of simplices") {
  // right unit triangle: d_i = 2 - sqrt(2); reference tet: 2 / (3 + sqrt(3))
  const ShapeInfo& tri = shape_info(Shape::triangle);
  CHECK(inscribed_diameter(ElementMapping(Shape::triangle, tri.ref_vertices)) ==
        doctest::Approx(2.0 - std::sqrt(2.0)));
  const ShapeInfo& tet = shape_info(Shape::tet);
  CHECK(inscribed_diameter(ElementMapping(Shape::tet, tet.ref_vertices)) ==
        doctest::Approx(2.0 / (3.0 + std::sqrt(3.0))));
  const ShapeInfo& quad = shape_info(Shape::quad);
  CHECK_THROWS_AS(inscribed_diameter(ElementMapping(Shape::quad, quad.ref_vertices)), InvalidInputError);
}

#include "sipdg/shapes.hpp"

#include <cmath>
#include <map>

namespace sipdg {

namespace {

Matrix columns(std::initializer_list<std::initializer_list<Real>> cols) {
  int n = static_cast<int>(cols.size());
  int d = static_cast<int>(cols.begin()->size());
  Matrix m(d, n);
  int j = 0;
  for (const auto& c : cols) {
    int i = 0;
    for (Real v : c) m(i++, j) = v;
    ++j;
  }
  return m;
}

Vector normal(std::initializer_list<Real> entries) {
  Vector n(static_cast<Index>(entries.size()));
  Index i = 0;
  for (Real v : entries) n[i++] = v;
  return n / n.norm();
}

ShapeInfo make_point() {
  ShapeInfo s;
  s.shape = Shape::point;
  s.dim = 0;
  s.n_vertices = 1;
  s.ref_vertices = Matrix::Zero(0, 1);
  s.simplex = true;
  s.tensor = true;
  return s;
}

ShapeInfo make_interval() {
  ShapeInfo s;
  s.shape = Shape::interval;
  s.dim = 1;
  s.n_vertices = 2;
  s.ref_vertices = columns({{0.0}, {1.0}});
  s.faces = {{Shape::point, {0}, normal({-1.0})}, {Shape::point, {1}, normal({1.0})}};
  s.simplex = true;
  s.tensor = true;
  return s;
}

ShapeInfo make_triangle() {
  ShapeInfo s;
  s.shape = Shape::triangle;
  s.dim = 2;
  s.n_vertices = 3;
  s.ref_vertices = columns({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
  s.faces = {{Shape::interval, {0, 1}, normal({0.0, -1.0})},
             {Shape::interval, {1, 2}, normal({1.0, 1.0})},
             {Shape::interval, {2, 0}, normal({-1.0, 0.0})}};
  s.simplex = true;
  s.tensor = false;
  return s;
}

ShapeInfo make_quad() {
  ShapeInfo s;
  s.shape = Shape::quad;
  s.dim = 2;
  s.n_vertices = 4;
  s.ref_vertices = columns({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
  s.faces = {{Shape::interval, {0, 1}, normal({0.0, -1.0})},
             {Shape::interval, {1, 2}, normal({1.0, 0.0})},
             {Shape::interval, {2, 3}, normal({0.0, 1.0})},
             {Shape::interval, {3, 0}, normal({-1.0, 0.0})}};
  s.simplex = false;
  s.tensor = true;
  return s;
}

ShapeInfo make_tet() {
  ShapeInfo s;
  s.shape = Shape::tet;
  s.dim = 3;
  s.n_vertices = 4;
  s.ref_vertices = columns({{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
  s.faces = {{Shape::triangle, {0, 2, 1}, normal({0.0, 0.0, -1.0})},
             {Shape::triangle, {0, 1, 3}, normal({0.0, -1.0, 0.0})},
             {Shape::triangle, {0, 3, 2}, normal({-1.0, 0.0, 0.0})},
             {Shape::triangle, {1, 2, 3}, normal({1.0, 1.0, 1.0})}};
  s.simplex = true;
  s.tensor = false;
  return s;
}

ShapeInfo make_hex() {
  ShapeInfo s;
  s.shape = Shape::hex;
  s.dim = 3;
  s.n_vertices = 8;
  s.ref_vertices = columns({{0.0, 0.0, 0.0},
                            {1.0, 0.0, 0.0},
                            {1.0, 1.0, 0.0},
                            {0.0, 1.0, 0.0},
                            {0.0, 0.0, 1.0},
                            {1.0, 0.0, 1.0},
                            {1.0, 1.0, 1.0},
                            {0.0, 1.0, 1.0}});
  s.faces = {{Shape::quad, {0, 1, 2, 3}, normal({0.0, 0.0, -1.0})},
             {Shape::quad, {4, 5, 6, 7}, normal({0.0, 0.0, 1.0})},
             {Shape::quad, {0, 1, 5, 4}, normal({0.0, -1.0, 0.0})},
             {Shape::quad, {1, 2, 6, 5}, normal({1.0, 0.0, 0.0})},
             {Shape::quad, {2, 3, 7, 6}, normal({0.0, 1.0, 0.0})},
             {Shape::quad, {3, 0, 4, 7}, normal({-1.0, 0.0, 0.0})}};
  s.simplex = false;
  s.tensor = true;
  return s;
}

}  // namespace

const ShapeInfo& shape_info(Shape shape) {
  static const ShapeInfo point = make_point();
  static const ShapeInfo interval = make_interval();
  static const ShapeInfo triangle = make_triangle();
  static const ShapeInfo quad = make_quad();
  static const ShapeInfo tet = make_tet();
  static const ShapeInfo hex = make_hex();
  switch (shape) {
    case Shape::point: return point;
    case Shape::interval: return interval;
    case Shape::triangle: return triangle;
    case Shape::quad: return quad;
    case Shape::tet: return tet;
    case Shape::hex: return hex;
  }
  throw InvalidInputError("shape_info: unknown shape");
}

Shape shape_from_name(const std::string& name) {
  static const std::map<std::string, Shape> names = {
      {"interval", Shape::interval}, {"triangle", Shape::triangle},   {"quad", Shape::quad},
      {"tet", Shape::tet},           {"hex", Shape::hex},             {"point", Shape::point},
      {"quadrilateral", Shape::quad}, {"tetrahedron", Shape::tet},    {"hexahedron", Shape::hex}};
  auto it = names.find(name);
  if (it == names.end()) throw InvalidInputError("unknown shape name: " + name);
  return it->second;
}

std::string shape_name(Shape shape) {
  switch (shape) {
    case Shape::point: return "point";
    case Shape::interval: return "interval";
    case Shape::triangle: return "triangle";
    case Shape::quad: return "quad";
    case Shape::tet: return "tet";
    case Shape::hex: return "hex";
  }
  throw InvalidInputError("shape_name: unknown shape");
}

int basis_dimension(Shape shape, int p) {
  if (p < 0) throw InvalidInputError("basis_dimension: p must be nonnegative");
  switch (shape) {
    case Shape::point: return 1;
    case Shape::interval: return p + 1;
    case Shape::triangle: return (p + 1) * (p + 2) / 2;
    case Shape::quad: return (p + 1) * (p + 1);
    case Shape::tet: return (p + 1) * (p + 2) * (p + 3) / 6;
    case Shape::hex: return (p + 1) * (p + 1) * (p + 1);
  }
  throw InvalidInputError("basis_dimension: unknown shape");
}

Vector vertex_weights(Shape shape, const Vector& x) {
  switch (shape) {
    case Shape::point: {
      Vector w(1);
      w[0] = 1.0;
      return w;
    }
    case Shape::interval: {
      Vector w(2);
      w << 1.0 - x[0], x[0];
      return w;
    }
    case Shape::triangle: {
      Vector w(3);
      w << 1.0 - x[0] - x[1], x[0], x[1];
      return w;
    }
    case Shape::quad: {
      Vector w(4);
      w << (1 - x[0]) * (1 - x[1]), x[0] * (1 - x[1]), x[0] * x[1], (1 - x[0]) * x[1];
      return w;
    }
    case Shape::tet: {
      Vector w(4);
      w << 1.0 - x[0] - x[1] - x[2], x[0], x[1], x[2];
      return w;
    }
    case Shape::hex: {
      Vector w(8);
      w << (1 - x[0]) * (1 - x[1]) * (1 - x[2]), x[0] * (1 - x[1]) * (1 - x[2]), x[0] * x[1] * (1 - x[2]),
          (1 - x[0]) * x[1] * (1 - x[2]), (1 - x[0]) * (1 - x[1]) * x[2], x[0] * (1 - x[1]) * x[2],
          x[0] * x[1] * x[2], (1 - x[0]) * x[1] * x[2];
      return w;
    }
  }
  throw InvalidInputError("vertex_weights: unknown shape");
}

Matrix vertex_weight_gradients(Shape shape, const Vector& x) {
  switch (shape) {
    case Shape::interval: {
      Matrix g(1, 2);
      g << -1.0, 1.0;
      return g;
    }
    case Shape::triangle: {
      Matrix g(2, 3);
      g << -1, 1, 0, -1, 0, 1;
      return g;
    }
    case Shape::quad: {
      Matrix g(2, 4);
      g << -(1 - x[1]), (1 - x[1]), x[1], -x[1], -(1 - x[0]), -x[0], x[0], (1 - x[0]);
      return g;
    }
    case Shape::tet: {
      Matrix g(3, 4);
      g << -1, 1, 0, 0, -1, 0, 1, 0, -1, 0, 0, 1;
      return g;
    }
    case Shape::hex: {
      Matrix g(3, 8);
      const Real x0 = x[0], x1 = x[1], x2 = x[2];
      g.row(0) << -(1 - x1) * (1 - x2), (1 - x1) * (1 - x2), x1 * (1 - x2), -x1 * (1 - x2), -(1 - x1) * x2,
          (1 - x1) * x2, x1 * x2, -x1 * x2;
      g.row(1) << -(1 - x0) * (1 - x2), -x0 * (1 - x2), x0 * (1 - x2), (1 - x0) * (1 - x2), -(1 - x0) * x2,
          -x0 * x2, x0 * x2, (1 - x0) * x2;
      g.row(2) << -(1 - x0) * (1 - x1), -x0 * (1 - x1), -x0 * x1, -(1 - x0) * x1, (1 - x0) * (1 - x1),
          x0 * (1 - x1), x0 * x1, (1 - x0) * x1;
      return g;
    }
    default: throw InvalidInputError("vertex_weight_gradients: unsupported shape");
  }
}

}  // namespace sipdg

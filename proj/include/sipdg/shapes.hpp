#pragma once

// Reference shapes on [0,1]-based domains: the unit interval, the unit right
// triangle/tetrahedron {x_i >= 0, sum x_i <= 1}, and the unit square/cube.
// Faces are listed with a vertex order that fixes their own reference
// parameterization (affine for simplex faces, bilinear for quad faces).

#include "sipdg/common.hpp"

#include <string>
#include <vector>

namespace sipdg {

enum class Shape { point, interval, triangle, quad, tet, hex };

struct FaceDef {
  Shape shape;
  std::vector<int> vertices;  // indices into the element's vertex list
  Vector ref_normal;          // outward unit normal on the reference element
};

struct ShapeInfo {
  Shape shape;
  int dim;
  int n_vertices;
  Matrix ref_vertices;  // dim x n_vertices
  std::vector<FaceDef> faces;
  bool simplex;
  bool tensor;
};

const ShapeInfo& shape_info(Shape shape);

Shape shape_from_name(const std::string& name);
std::string shape_name(Shape shape);

// Dimension of the local polynomial space: total degree p on simplices,
// per-axis degree p on tensor shapes.
int basis_dimension(Shape shape, int p);

// Multilinear vertex weights (P1 on simplices, Q1 on tensor shapes) at a
// reference point; these interpolate per-vertex coefficient values and embed
// faces into element reference coordinates.
Vector vertex_weights(Shape shape, const Vector& ref_point);

// Gradients of the vertex weights, dim x n_vertices.
Matrix vertex_weight_gradients(Shape shape, const Vector& ref_point);

}  // namespace sipdg

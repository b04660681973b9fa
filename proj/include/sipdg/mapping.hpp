#pragma once

// Reference-to-physical element mappings: affine on simplices, multilinear
// on quads/hexes. Faces are parameterized over their own reference shape by
// interpolating the face corner positions, which coincides with the
// restriction of the element mapping, so adjacent elements see the same
// face geometry pointwise.

#include "sipdg/common.hpp"
#include "sipdg/quadrature.hpp"
#include "sipdg/shapes.hpp"

namespace sipdg {

struct FaceFrame {
  Vector elem_ref;     // element reference coordinates of the face point
  Vector position;     // physical coordinates
  Vector normal;       // outward unit normal
  Real face_jacobian;  // |J_f|: 1 in 1D, tangent norm in 2D, tangent cross norm in 3D
};

class ElementMapping {
 public:
  ElementMapping(Shape shape, Matrix nodes);  // nodes: dim x n_vertices, physical

  Shape shape() const { return shape_; }
  int dim() const { return static_cast<int>(nodes_.rows()); }
  const Matrix& nodes() const { return nodes_; }
  bool affine() const { return affine_; }

  Vector map(const Vector& ref) const;
  Matrix jacobian(const Vector& ref) const;
  Real jacobian_det(const Vector& ref) const;

  // Element reference coordinates of a point on face `face` given in the
  // face's own reference coordinates.
  Vector face_ref_to_elem(int face, const Vector& face_ref) const;

  FaceFrame face_frame(int face, const Vector& face_ref) const;

  // Penalty scaling nu = |J_f| / |J_e| at a face point.
  Real nu(int face, const Vector& face_ref) const;

  Real volume() const;

  // Surface measure of one face.
  Real face_area(int face) const;

 private:
  Shape shape_;
  Matrix nodes_;
  bool affine_;
};

// Inscribed-sphere diameter 2 d |e| / (sum of face areas); simplices only.
Real inscribed_diameter(const ElementMapping& mapping);

}  // namespace sipdg

#include "sipdg/mapping.hpp"

#include <cmath>

namespace sipdg {

namespace {

bool detect_affine(Shape shape, const Matrix& nodes) {
  auto near_zero = [&](const Vector& v) { return v.norm() <= 1e-12 * (1.0 + nodes.cwiseAbs().maxCoeff()); };
  switch (shape) {
    case Shape::interval:
    case Shape::triangle:
    case Shape::tet: return true;
    case Shape::quad: return near_zero(nodes.col(0) - nodes.col(1) + nodes.col(2) - nodes.col(3));
    case Shape::hex: {
      Vector cxy = nodes.col(0) - nodes.col(1) + nodes.col(2) - nodes.col(3);
      Vector cxz = nodes.col(0) - nodes.col(1) + nodes.col(5) - nodes.col(4);
      Vector cyz = nodes.col(0) - nodes.col(3) + nodes.col(7) - nodes.col(4);
      Vector cxyz = -nodes.col(0) + nodes.col(1) - nodes.col(2) + nodes.col(3) + nodes.col(4) - nodes.col(5) +
                    nodes.col(6) - nodes.col(7);
      return near_zero(cxy) && near_zero(cxz) && near_zero(cyz) && near_zero(cxyz);
    }
    default: throw InvalidInputError("ElementMapping: unsupported shape");
  }
}

}  // namespace

ElementMapping::ElementMapping(Shape shape, Matrix nodes) : shape_(shape), nodes_(std::move(nodes)) {
  const ShapeInfo& info = shape_info(shape);
  if (nodes_.cols() != info.n_vertices || nodes_.rows() != info.dim)
    throw InvalidInputError("ElementMapping: node matrix has wrong shape");
  affine_ = detect_affine(shape, nodes_);
}

Vector ElementMapping::map(const Vector& ref) const { return nodes_ * vertex_weights(shape_, ref); }

Matrix ElementMapping::jacobian(const Vector& ref) const {
  return nodes_ * vertex_weight_gradients(shape_, ref).transpose();
}

Real ElementMapping::jacobian_det(const Vector& ref) const {
  Real det = jacobian(ref).determinant();
  if (!(det > 0.0)) throw MappingError("element mapping has non-positive Jacobian");
  return det;
}

Vector ElementMapping::face_ref_to_elem(int face, const Vector& face_ref) const {
  const ShapeInfo& info = shape_info(shape_);
  const FaceDef& fd = info.faces.at(face);
  Vector w = vertex_weights(fd.shape, face_ref);
  Vector ref = Vector::Zero(info.dim);
  for (std::size_t i = 0; i < fd.vertices.size(); ++i) ref += w[i] * info.ref_vertices.col(fd.vertices[i]);
  return ref;
}

FaceFrame ElementMapping::face_frame(int face, const Vector& face_ref) const {
  const ShapeInfo& info = shape_info(shape_);
  const FaceDef& fd = info.faces.at(face);
  FaceFrame frame;
  frame.elem_ref = face_ref_to_elem(face, face_ref);
  frame.position = map(frame.elem_ref);
  Matrix J = jacobian(frame.elem_ref);
  Real det = J.determinant();
  if (!(det > 0.0)) throw MappingError("face frame: non-positive element Jacobian");

  // Outward normal along det(J) J^{-T} n_ref (Nanson direction).
  Vector dir = det * J.inverse().transpose() * fd.ref_normal;
  Real dn = dir.norm();
  if (!(dn > 0.0)) throw MappingError("face frame: degenerate normal");
  frame.normal = dir / dn;

  if (info.dim == 1) {
    frame.face_jacobian = 1.0;
    return frame;
  }
  // Face tangents: element reference tangents of the face parameterization
  // pushed forward by the element Jacobian.
  Matrix gface = vertex_weight_gradients(fd.shape, face_ref);  // (dim-1) x nfv
  Matrix ref_tangents(info.dim, info.dim - 1);
  for (int axis = 0; axis < info.dim - 1; ++axis) {
    Vector t = Vector::Zero(info.dim);
    for (std::size_t i = 0; i < fd.vertices.size(); ++i)
      t += gface(axis, static_cast<Index>(i)) * info.ref_vertices.col(fd.vertices[i]);
    ref_tangents.col(axis) = t;
  }
  Matrix T = J * ref_tangents;
  if (info.dim == 2) {
    frame.face_jacobian = T.col(0).norm();
  } else {
    Eigen::Vector3d a = T.col(0), b = T.col(1);
    frame.face_jacobian = a.cross(b).norm();
  }
  if (!(frame.face_jacobian > 0.0)) throw MappingError("face frame: degenerate face Jacobian");
  return frame;
}

Real ElementMapping::nu(int face, const Vector& face_ref) const {
  FaceFrame frame = face_frame(face, face_ref);
  Real det = jacobian(frame.elem_ref).determinant();
  return frame.face_jacobian / det;
}

Real ElementMapping::volume() const {
  QuadratureRule rule = quadrature(shape_, 4);
  Real v = 0.0;
  for (Index q = 0; q < rule.weights.size(); ++q) v += rule.weights[q] * jacobian_det(rule.points.col(q));
  return v;
}

Real ElementMapping::face_area(int face) const {
  const ShapeInfo& info = shape_info(shape_);
  const FaceDef& fd = info.faces.at(face);
  QuadratureRule rule = quadrature(fd.shape, 4);
  Real a = 0.0;
  for (Index q = 0; q < rule.weights.size(); ++q)
    a += rule.weights[q] * face_frame(face, rule.points.col(q)).face_jacobian;
  return a;
}

Real inscribed_diameter(const ElementMapping& mapping) {
  const ShapeInfo& info = shape_info(mapping.shape());
  if (!info.simplex) throw InvalidInputError("inscribed_diameter: simplices only");
  Real faces = 0.0;
  for (std::size_t f = 0; f < info.faces.size(); ++f) faces += mapping.face_area(static_cast<int>(f));
  return 2.0 * info.dim * mapping.volume() / faces;
}

}  // namespace sipdg

#include "sipdg/assembly.hpp"

#include "sipdg/mapping.hpp"
#include "sipdg/quadrature.hpp"
#include "sipdg/tensor4.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <vector>

namespace sipdg {
namespace {

constexpr Real kRankTol = 1e-10;
constexpr Real kMatchTol = 1e-9;

// Affine elements get rules exact for the highest-degree integrand (the
// penalty form with piecewise linear coefficients, degree 2p+2); curved
// quads/hexes use p+1 Gauss-Legendre points per axis.
QuadratureRule element_rule(Shape shape, int p, bool affine) {
  if (affine) return quadrature(shape, 2 * p + 2);
  return tensor_gauss(shape, p + 1);
}

QuadratureRule boundary_rule(Shape face_shape, int p, bool affine) {
  if (affine) return quadrature(face_shape, 2 * p + 2);
  return tensor_gauss(face_shape, p + 1);
}

// Value interpolation: (m x nb*m), maps stacked dofs to the m field values.
Matrix value_interpolation(const Eigen::RowVectorXd& phi, int m) {
  const Index nb = phi.size();
  Matrix V = Matrix::Zero(m, nb * m);
  for (Index i = 0; i < nb; ++i)
    for (int v = 0; v < m; ++v) V(v, i * m + v) = phi[i];
  return V;
}

// Gradient interpolation: (d*m x nb*m), maps dofs to the vectorized d x m
// physical gradient; g is the d x nb physical basis gradient.
Matrix gradient_interpolation(const Matrix& g, int m) {
  const Index d = g.rows(), nb = g.cols();
  Matrix D = Matrix::Zero(d * m, nb * m);
  for (Index k = 0; k < d; ++k)
    for (Index i = 0; i < nb; ++i)
      for (int v = 0; v < m; ++v) D(k * m + v, i * m + v) = g(k, i);
  return D;
}

// Rows of C.flat() contracted with the normal: (m x d*m), so that
// F = extractor * gradient_interpolation gives the normal flux of the dofs.
Matrix flux_extractor(const Tensor4d& C, const Vector& n) {
  const int d = C.d(), m = C.m();
  Matrix P = Matrix::Zero(m, d * m);
  for (int k = 0; k < d; ++k) P += n[k] * C.flat().middleRows(k * m, m);
  return P;
}

// Jump interpolation: (d*m x nb*m), maps dofs to vec(n outer u).
Matrix jump_interpolation(const Vector& n, const Eigen::RowVectorXd& phi, int m) {
  const Index d = n.size(), nb = phi.size();
  Matrix J = Matrix::Zero(d * m, nb * m);
  for (Index k = 0; k < d; ++k)
    for (Index i = 0; i < nb; ++i)
      for (int v = 0; v < m; ++v) J(k * m + v, i * m + v) = n[k] * phi[i];
  return J;
}

// Coefficient of trace side t in (u* - u_s) on a face of the given kind.
Real jump_coefficient(FaceKind kind, int s, int t) {
  if (kind == FaceKind::dirichlet) return -1.0;
  return s == t ? -0.5 : 0.5;
}

// Face-reference points on side 1 matched to side-0 points: corners are
// paired through physical coordinates (after the periodic shift) and the
// pairing is interpolated with the face shape's vertex weights.
Matrix matched_face_refs(const Mesh& mesh, const Face& face, const Matrix& points) {
  const FaceSide& s0 = face.sides.at(0);
  const FaceSide& s1 = face.sides.at(1);
  const Element& e0 = mesh.elements.at(s0.element);
  const Element& e1 = mesh.elements.at(s1.element);
  const FaceDef& f0 = shape_info(e0.shape).faces.at(s0.local_face);
  const FaceDef& f1 = shape_info(e1.shape).faces.at(s1.local_face);
  if (f0.shape != f1.shape) throw MappingError("face sides have different face shapes");
  const ShapeInfo& fs = shape_info(f0.shape);

  Vector shift = Vector::Zero(mesh.dim);
  for (int axis = 0; axis < mesh.dim; ++axis)
    if (mesh.period[axis] > 0.0) shift[axis] = s0.offset[axis] * mesh.period[axis];

  Matrix ref1(fs.dim, static_cast<Index>(fs.n_vertices));
  for (int j = 0; j < fs.n_vertices; ++j) {
    Vector p0 = mesh.vertices.col(e0.vertices.at(f0.vertices[j]));
    int match = -1;
    for (int k = 0; k < fs.n_vertices; ++k) {
      Vector p1 = mesh.vertices.col(e1.vertices.at(f1.vertices[k]));
      if ((p1 + shift - p0).norm() <= kMatchTol * (1.0 + p0.norm())) {
        match = k;
        break;
      }
    }
    if (match < 0) throw MappingError("face corners of the two sides do not coincide");
    ref1.col(j) = fs.ref_vertices.col(match);
  }

  Matrix out(fs.dim, points.cols());
  for (Index q = 0; q < points.cols(); ++q) out.col(q) = ref1 * vertex_weights(fs.shape, points.col(q));
  return out;
}

// Quadrature-point traces of one element at a face: frames, basis values,
// physical gradients, coefficient tensors and volume Jacobians.
struct SideEval {
  int element = -1;
  Index nb = 0;
  std::vector<FaceFrame> frames;
  Matrix values;                 // n_q x nb
  std::vector<Matrix> grads;     // n_q of d x nb
  std::vector<Tensor4d> tensors; // n_q
  Vector det;                    // n_q volume Jacobians at the face points
};

SideEval evaluate_side(const Mesh& mesh, const FaceSide& side, const Matrix& face_refs) {
  const Element& el = mesh.elements.at(side.element);
  ElementMapping map = mesh.mapping(side.element);
  BasisSet basis(el.shape, el.degree);
  const Index nq = face_refs.cols();

  SideEval ev;
  ev.element = side.element;
  ev.nb = basis.size();

  Matrix elem_refs(mesh.dim, nq);
  ev.frames.reserve(nq);
  for (Index q = 0; q < nq; ++q) {
    elem_refs.col(q) = map.face_ref_to_elem(side.local_face, face_refs.col(q));
    ev.frames.push_back(map.face_frame(side.local_face, face_refs.col(q)));
  }

  ev.values = basis.values(elem_refs);
  std::vector<Matrix> gref = basis.gradients(elem_refs);
  ev.grads.resize(nq);
  ev.tensors.reserve(nq);
  ev.det.resize(nq);
  for (Index q = 0; q < nq; ++q) {
    Vector ref = elem_refs.col(q);
    Matrix J = map.jacobian(ref);
    ev.det[q] = map.jacobian_det(ref);
    Matrix g(mesh.dim, ev.nb);
    for (int axis = 0; axis < mesh.dim; ++axis) g.row(axis) = gref[axis].row(q);
    ev.grads[q] = J.transpose().partialPivLu().solve(g);
    ev.tensors.push_back(el.material.tensor(vertex_weights(el.shape, ref)));
  }
  return ev;
}

// Shared face-quadrature context: rule, per-side point sets and evaluations,
// with the cross-side position consistency check applied.
struct FaceEval {
  QuadratureRule rule;
  std::vector<SideEval> sides;
};

FaceEval evaluate_face(const Mesh& mesh, const Face& face) {
  const FaceSide& s0 = face.sides.at(0);
  const Element& e0 = mesh.elements.at(s0.element);
  const FaceDef& f0 = shape_info(e0.shape).faces.at(s0.local_face);

  int maxp = e0.degree;
  bool affine = mesh.mapping(s0.element).affine();
  if (face.sides.size() > 1) {
    const Element& e1 = mesh.elements.at(face.sides[1].element);
    maxp = std::max(maxp, e1.degree);
    affine = affine && mesh.mapping(face.sides[1].element).affine();
  }

  FaceEval ev;
  ev.rule = boundary_rule(f0.shape, maxp, affine);
  ev.sides.push_back(evaluate_side(mesh, s0, ev.rule.points));
  if (face.sides.size() > 1) {
    Matrix refs1 = matched_face_refs(mesh, face, ev.rule.points);
    ev.sides.push_back(evaluate_side(mesh, face.sides[1], refs1));

    Vector shift = Vector::Zero(mesh.dim);
    for (int axis = 0; axis < mesh.dim; ++axis)
      if (mesh.period[axis] > 0.0) shift[axis] = s0.offset[axis] * mesh.period[axis];
    for (Index q = 0; q < ev.rule.points.cols(); ++q) {
      const Vector& p0 = ev.sides[0].frames[q].position;
      const Vector& p1 = ev.sides[1].frames[q].position;
      if ((p1 + shift - p0).norm() > kMatchTol * (1.0 + p0.norm()))
        throw MappingError("face sides do not parameterize the same surface");
    }
  }
  return ev;
}

Offset relative_offset(const Face& face, int from, int to) {
  if (from == to) return Offset::Zero();
  return face.sides.at(from).offset;
}

void add_block(std::vector<Eigen::Triplet<Real>>& triplets, Index row0, Index col0, const Matrix& block, Real scale) {
  if (scale == 0.0) return;
  for (Index i = 0; i < block.rows(); ++i)
    for (Index j = 0; j < block.cols(); ++j)
      if (block(i, j) != 0.0) triplets.emplace_back(row0 + i, col0 + j, scale * block(i, j));
}

void volume_blocks(const Mesh& mesh, int e, Matrix& mass, Matrix& stiff) {
  const Element& el = mesh.elements.at(e);
  ElementMapping map = mesh.mapping(e);
  BasisSet basis(el.shape, el.degree);
  const int m = el.material.var_count();
  const Index nb = basis.size();
  const Index nd = nb * m;

  QuadratureRule rule = element_rule(el.shape, el.degree, map.affine());
  Matrix vals = basis.values(rule.points);
  std::vector<Matrix> gref = basis.gradients(rule.points);

  mass = Matrix::Zero(nd, nd);
  stiff = Matrix::Zero(nd, nd);
  for (Index q = 0; q < rule.points.cols(); ++q) {
    Vector ref = rule.points.col(q);
    Matrix J = map.jacobian(ref);
    Real w = rule.weights[q] * map.jacobian_det(ref);
    Vector vw = vertex_weights(el.shape, ref);

    Matrix g(mesh.dim, nb);
    for (int axis = 0; axis < mesh.dim; ++axis) g.row(axis) = gref[axis].row(q);
    Matrix gphys = J.transpose().partialPivLu().solve(g);

    Matrix V = value_interpolation(vals.row(q), m);
    Matrix D = gradient_interpolation(gphys, m);
    mass.noalias() += (w * el.material.density(vw)) * V.transpose() * V;
    stiff.noalias() += w * D.transpose() * el.material.tensor(vw).flat() * D;
  }
}

}  // namespace

ElementBlocks element_blocks(const Mesh& mesh, int e) {
  const Element& el = mesh.elements.at(e);
  const int m = el.material.var_count();
  ElementBlocks blocks;
  volume_blocks(mesh, e, blocks.mass, blocks.stiff);

  const Index nd = blocks.mass.rows();
  blocks.bstar = Matrix::Zero(nd, nd);
  blocks.bstar2 = Matrix::Zero(nd, nd);

  ElementMapping map = mesh.mapping(e);
  const ShapeInfo& info = shape_info(el.shape);
  for (int lf = 0; lf < static_cast<int>(info.faces.size()); ++lf) {
    QuadratureRule rule = boundary_rule(info.faces[lf].shape, el.degree, map.affine());
    FaceSide side{e, lf, Offset::Zero()};
    SideEval ev = evaluate_side(mesh, side, rule.points);
    for (Index q = 0; q < rule.points.cols(); ++q) {
      // nu^{-1} ds = (|J_e|/|J_f|) |J_f| dq = |J_e| dq
      Real w = rule.weights[q] * ev.det[q];
      Matrix D = gradient_interpolation(ev.grads[q], m);
      blocks.bstar.noalias() += w * D.transpose() * ev.tensors[q].flat() * D;
      Matrix F = flux_extractor(ev.tensors[q], ev.frames[q].normal) * D;
      Matrix cni = cn_pinv(ev.tensors[q], ev.frames[q].normal, kRankTol);
      blocks.bstar2.noalias() += w * F.transpose() * cni * F;
    }
  }
  return blocks;
}

GlobalSystem::GlobalSystem(const Mesh& mesh, Vector eta, AssemblyOptions options)
    : mesh_(&mesh), eta_(std::move(eta)), options_(options) {
  const int n_elements = static_cast<int>(mesh.elements.size());
  if (eta_.size() != n_elements) throw InvalidInputError("GlobalSystem: eta needs one entry per element");
  for (Index e = 0; e < eta_.size(); ++e)
    if (!(eta_[e] > 0.0)) throw InvalidInputError("GlobalSystem: penalty parameters must be positive");
  m_ = mesh.var_count();

  offsets_.resize(n_elements);
  sizes_.resize(n_elements);
  total_dofs_ = 0;
  for (int e = 0; e < n_elements; ++e) {
    offsets_[e] = total_dofs_;
    sizes_[e] = static_cast<Index>(basis_dimension(mesh.elements[e].shape, mesh.elements[e].degree)) * m_;
    total_dofs_ += sizes_[e];
  }

  // Deterministic slot layout: one volume block per element, then per face
  // the consistency blocks (integrating side x trace side) followed by the
  // penalty blocks (integrating side x trace pair).
  const int n_faces = static_cast<int>(mesh.faces.size());
  std::vector<Index> face_slot(n_faces + 1, 0);
  face_slot[0] = n_elements;
  for (int f = 0; f < n_faces; ++f) {
    const Face& face = mesh.faces[f];
    Index count = 0;
    if (face.kind != FaceKind::neumann) {
      Index s = static_cast<Index>(face.sides.size());
      count = s * s + s * s * s;
    }
    face_slot[f + 1] = face_slot[f] + count;
  }

  mass_blocks_.resize(n_elements);
  contributions_.resize(face_slot[n_faces]);

  parallel_for(n_elements, [&](Index e) {
    Matrix mass, stiff;
    volume_blocks(mesh, static_cast<int>(e), mass, stiff);
    mass_blocks_[e] = std::move(mass);
    Contribution c;
    c.part = ContributionPart::volume;
    c.row_element = c.col_element = c.source_element = static_cast<int>(e);
    c.block = std::move(stiff);
    contributions_[e] = std::move(c);
  });

  Vector diameters;
  if (options_.ip_scaling == IpScaling::inscribed_diameter) {
    diameters.resize(n_elements);
    parallel_for(n_elements, [&](Index e) { diameters[e] = inscribed_diameter(mesh.mapping(static_cast<int>(e))); });
  }

  parallel_for(n_faces, [&](Index f) {
    const Face& face = mesh.faces[f];
    if (face.kind == FaceKind::neumann) return;
    FaceEval ev = evaluate_face(mesh, face);
    const int n_sides = static_cast<int>(face.sides.size());
    const Index nq = ev.rule.points.cols();

    // Per-side, per-point value interpolation matrices.
    std::vector<std::vector<Matrix>> V(n_sides);
    for (int t = 0; t < n_sides; ++t) {
      V[t].reserve(nq);
      for (Index q = 0; q < nq; ++q) V[t].push_back(value_interpolation(ev.sides[t].values.row(q), m_));
    }

    Real nu_face = 0.0;
    if (options_.ip_scaling == IpScaling::inscribed_diameter) {
      Real eps = face.kind == FaceKind::interior ? 0.5 : 1.0;
      Real dmin = std::numeric_limits<Real>::infinity();
      for (const FaceSide& side : face.sides) dmin = std::min(dmin, diameters[side.element]);
      nu_face = 1.0 / (eps * dmin);
    }

    Index slot = face_slot[f];
    for (int s = 0; s < n_sides; ++s) {
      const SideEval& S = ev.sides[s];
      const Index nds = S.nb * m_;

      std::vector<Matrix> flux;
      flux.reserve(nq);
      for (Index q = 0; q < nq; ++q)
        flux.push_back(flux_extractor(S.tensors[q], S.frames[q].normal) *
                       gradient_interpolation(S.grads[q], m_));

      for (int t = 0; t < n_sides; ++t) {
        Real alpha = jump_coefficient(face.kind, s, t);
        Matrix block = Matrix::Zero(ev.sides[t].nb * m_, nds);
        for (Index q = 0; q < nq; ++q)
          block.noalias() += (ev.rule.weights[q] * S.frames[q].face_jacobian * alpha) *
                             V[t][q].transpose() * flux[q];
        Contribution c;
        c.part = ContributionPart::dg;
        c.row_element = face.sides[t].element;
        c.col_element = S.element;
        c.source_element = S.element;
        c.col_offset = relative_offset(face, t, s);
        c.face = static_cast<int>(f);
        c.add_transpose = true;
        c.block = std::move(block);
        contributions_[slot++] = std::move(c);
      }

      std::vector<Matrix> cn;
      Vector ipw(nq);
      cn.reserve(nq);
      for (Index q = 0; q < nq; ++q) {
        cn.push_back(normal_tensor(S.tensors[q], S.frames[q].normal));
        Real jf = S.frames[q].face_jacobian;
        // nu ds = (|J_f|/|J_e|) |J_f| dq, or the face-constant variant.
        ipw[q] = options_.ip_scaling == IpScaling::inscribed_diameter
                     ? ev.rule.weights[q] * jf * nu_face
                     : ev.rule.weights[q] * jf * jf / S.det[q];
      }
      for (int t1 = 0; t1 < n_sides; ++t1) {
        Real a1 = jump_coefficient(face.kind, s, t1);
        for (int t2 = 0; t2 < n_sides; ++t2) {
          Real a2 = jump_coefficient(face.kind, s, t2);
          Matrix block = Matrix::Zero(ev.sides[t1].nb * m_, ev.sides[t2].nb * m_);
          for (Index q = 0; q < nq; ++q)
            block.noalias() += (eta_[S.element] * a1 * a2 * ipw[q]) * V[t1][q].transpose() * cn[q] * V[t2][q];
          Contribution c;
          c.part = ContributionPart::ip;
          c.row_element = face.sides[t1].element;
          c.col_element = face.sides[t2].element;
          c.source_element = S.element;
          c.col_offset = relative_offset(face, t1, t2);
          c.face = static_cast<int>(f);
          c.block = std::move(block);
          contributions_[slot++] = std::move(c);
        }
      }
    }
  });
}

SparseMatrix GlobalSystem::mass() const {
  std::vector<Eigen::Triplet<Real>> triplets;
  for (std::size_t e = 0; e < mass_blocks_.size(); ++e)
    add_block(triplets, offsets_[e], offsets_[e], mass_blocks_[e], 1.0);
  SparseMatrix M(total_dofs_, total_dofs_);
  M.setFromTriplets(triplets.begin(), triplets.end());
  return M;
}

SparseMatrix GlobalSystem::stiffness(Real ip_scale) const {
  std::vector<Eigen::Triplet<Real>> triplets;
  for (const Contribution& c : contributions_) {
    Real scale = c.part == ContributionPart::ip ? ip_scale : 1.0;
    add_block(triplets, offsets_[c.row_element], offsets_[c.col_element], c.block, scale);
    if (c.add_transpose)
      add_block(triplets, offsets_[c.col_element], offsets_[c.row_element], c.block.transpose(), scale);
  }
  SparseMatrix A(total_dofs_, total_dofs_);
  A.setFromTriplets(triplets.begin(), triplets.end());
  return A;
}

namespace {

Real map_weight(const std::map<int, Real>& weights, int key) {
  auto it = weights.find(key);
  return it == weights.end() ? 0.0 : it->second;
}

}  // namespace

std::pair<SparseMatrix, SparseMatrix> GlobalSystem::weighted(const WeightedSubmesh& submesh, Real ip_scale) const {
  std::vector<Eigen::Triplet<Real>> mt, at;
  for (const auto& [e, w] : submesh.element_weights) {
    if (e < 0 || e >= static_cast<int>(mass_blocks_.size()))
      throw InvalidInputError("weighted: element index out of range");
    add_block(mt, offsets_[e], offsets_[e], mass_blocks_[e], w);
  }
  for (const Contribution& c : contributions_) {
    Real w;
    if (c.part == ContributionPart::volume) {
      w = map_weight(submesh.element_weights, c.row_element);
    } else {
      w = map_weight(submesh.face_weights, c.face);
      if (w != 0.0 && (map_weight(submesh.element_weights, c.row_element) <= 0.0 ||
                       map_weight(submesh.element_weights, c.col_element) <= 0.0))
        throw InvalidInputError("weighted: face weight touches an element with zero weight");
    }
    if (w == 0.0) continue;
    if (c.part == ContributionPart::ip) w *= ip_scale;
    add_block(at, offsets_[c.row_element], offsets_[c.col_element], c.block, w);
    if (c.add_transpose)
      add_block(at, offsets_[c.col_element], offsets_[c.row_element], c.block.transpose(), w);
  }
  SparseMatrix M(total_dofs_, total_dofs_), A(total_dofs_, total_dofs_);
  M.setFromTriplets(mt.begin(), mt.end());
  A.setFromTriplets(at.begin(), at.end());
  return {std::move(M), std::move(A)};
}

std::pair<Matrix, Matrix> GlobalSystem::weighted_reduced(const WeightedSubmesh& submesh, Real ip_scale) const {
  std::map<int, Index> reduced;
  Index n = 0;
  for (const auto& [e, w] : submesh.element_weights) {
    if (e < 0 || e >= static_cast<int>(mass_blocks_.size()))
      throw InvalidInputError("weighted_reduced: element index out of range");
    if (w <= 0.0) continue;
    reduced[e] = n;
    n += sizes_[e];
  }
  Matrix M = Matrix::Zero(n, n), A = Matrix::Zero(n, n);
  for (const auto& [e, w] : submesh.element_weights) {
    if (w <= 0.0) continue;
    Index o = reduced.at(e);
    M.block(o, o, sizes_[e], sizes_[e]) = w * mass_blocks_[e];
  }
  for (const Contribution& c : contributions_) {
    Real w;
    if (c.part == ContributionPart::volume) {
      w = map_weight(submesh.element_weights, c.row_element);
    } else {
      w = map_weight(submesh.face_weights, c.face);
      if (w != 0.0 && (map_weight(submesh.element_weights, c.row_element) <= 0.0 ||
                       map_weight(submesh.element_weights, c.col_element) <= 0.0))
        throw InvalidInputError("weighted_reduced: face weight touches an element with zero weight");
    }
    if (w == 0.0) continue;
    if (c.part == ContributionPart::ip) w *= ip_scale;
    Index ro = reduced.at(c.row_element), co = reduced.at(c.col_element);
    A.block(ro, co, c.block.rows(), c.block.cols()) += w * c.block;
    if (c.add_transpose) A.block(co, ro, c.block.cols(), c.block.rows()) += w * c.block.transpose();
  }
  return {std::move(M), std::move(A)};
}

Real face_form_crosscheck(const Mesh& mesh, const Vector& eta) {
  GlobalSystem sys(mesh, eta);
  const Index n = sys.total_dofs();

  std::vector<Eigen::Triplet<Real>> t1, t2;
  for (const Contribution& c : sys.contributions())
    if (c.part == ContributionPart::ip)
      add_block(t1, sys.dof_offset(c.row_element), sys.dof_offset(c.col_element), c.block, 1.0);

  const int m = sys.var_count();
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    const Face& face = mesh.faces[f];
    if (face.kind == FaceKind::neumann) continue;
    FaceEval ev = evaluate_face(mesh, face);
    const int n_sides = static_cast<int>(face.sides.size());
    const Index nq = ev.rule.points.cols();
    const Real eps = face.kind == FaceKind::interior ? 0.5 : 1.0;

    // <eta nu C> averaged over the face's sides, per quadrature point.
    std::vector<Tensor4d> avg;
    avg.reserve(nq);
    for (Index q = 0; q < nq; ++q) {
      Tensor4d acc(mesh.dim, m);
      for (int s = 0; s < n_sides; ++s) {
        const SideEval& S = ev.sides[s];
        Real nu = S.frames[q].face_jacobian / S.det[q];
        acc = acc + S.tensors[q] * (eta[S.element] * nu / n_sides);
      }
      avg.push_back(acc);
    }

    std::vector<std::vector<Matrix>> jumps(n_sides);
    for (int t = 0; t < n_sides; ++t) {
      jumps[t].reserve(nq);
      for (Index q = 0; q < nq; ++q)
        jumps[t].push_back(jump_interpolation(ev.sides[t].frames[q].normal, ev.sides[t].values.row(q), m));
    }

    for (int a = 0; a < n_sides; ++a)
      for (int b = 0; b < n_sides; ++b) {
        Matrix block = Matrix::Zero(ev.sides[a].nb * m, ev.sides[b].nb * m);
        for (Index q = 0; q < nq; ++q)
          block.noalias() += (eps * ev.rule.weights[q] * ev.sides[0].frames[q].face_jacobian) *
                             jumps[a][q].transpose() * avg[q].flat() * jumps[b][q];
        add_block(t2, sys.dof_offset(ev.sides[a].element), sys.dof_offset(ev.sides[b].element), block, 1.0);
      }
  }

  SparseMatrix A1(n, n), A2(n, n);
  A1.setFromTriplets(t1.begin(), t1.end());
  A2.setFromTriplets(t2.begin(), t2.end());

  auto max_abs = [](const SparseMatrix& A) {
    Real m = 0.0;
    for (int k = 0; k < A.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
  };
  SparseMatrix diff = A1 - A2;
  Real dev = max_abs(diff);
  Real scale = std::max(max_abs(A1), max_abs(A2));
  return scale == 0.0 ? dev : dev / scale;
}

void write_coordinate_matrix(const SparseMatrix& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("write_coordinate_matrix: cannot open " + path);
  out << matrix.rows() << " " << matrix.cols() << " " << matrix.nonZeros() << "\n";
  char buf[64];
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%lld %lld %.17g\n", static_cast<long long>(it.row()),
                    static_cast<long long>(it.col()), it.value());
      out << buf;
    }
  if (!out) throw NumericalError("write_coordinate_matrix: write failed for " + path);
}

std::string dof_map_json(const GlobalSystem& system) {
  nlohmann::json j;
  j["dofs"] = system.total_dofs();
  j["variables"] = system.var_count();
  nlohmann::json elems = nlohmann::json::array();
  for (int e = 0; e < static_cast<int>(system.mesh().elements.size()); ++e) {
    nlohmann::json je;
    je["element"] = e;
    je["offset"] = system.dof_offset(e);
    je["dofs"] = system.element_dofs(e);
    elems.push_back(je);
  }
  j["elements"] = std::move(elems);
  return j.dump(2);
}

}  // namespace sipdg

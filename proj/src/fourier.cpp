#include "sipdg/fourier.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace sipdg {
namespace {

// Routes one dense block into the coupling bin selected by a lattice offset.
void route_block(SymbolBlocks& blocks, const Offset& offset, Index row, Index col,
                 const Matrix& block, Real scale) {
  int axis = -1;
  for (int i = 0; i < 3; ++i) {
    if (offset[i] == 0) continue;
    if (std::abs(offset[i]) > 1 || axis >= 0)
      throw InvalidInputError("symbol_blocks: cell coupling reaches beyond nearest neighbours");
    axis = i;
  }
  if (axis >= blocks.dim)
    throw InvalidInputError("symbol_blocks: cell coupling along an axis outside the mesh dimension");
  Matrix& target = axis < 0 ? blocks.center
                            : (offset[axis] > 0 ? blocks.plus[axis] : blocks.minus[axis]);
  target.block(row, col, block.rows(), block.cols()) += scale * block;
}

}  // namespace

SymbolBlocks symbol_blocks(const GlobalSystem& system, Real ip_scale) {
  const Mesh& mesh = system.mesh();
  // Neumann faces carry no coupling, so they do not break translation
  // invariance; Dirichlet faces do.
  for (const Face& face : mesh.faces)
    if (face.kind == FaceKind::dirichlet)
      throw InvalidInputError("symbol_blocks: mesh must be translation invariant (no dirichlet faces)");

  SymbolBlocks blocks;
  blocks.dim = mesh.dim;
  blocks.size = system.total_dofs();
  blocks.mass = Matrix::Zero(blocks.size, blocks.size);
  blocks.center = Matrix::Zero(blocks.size, blocks.size);
  blocks.plus.assign(mesh.dim, Matrix::Zero(blocks.size, blocks.size));
  blocks.minus.assign(mesh.dim, Matrix::Zero(blocks.size, blocks.size));

  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    Index o = system.dof_offset(e);
    const Matrix& me = system.mass_blocks()[e];
    blocks.mass.block(o, o, me.rows(), me.cols()) = me;
  }

  for (const Contribution& c : system.contributions()) {
    Real scale = c.part == ContributionPart::ip ? ip_scale : 1.0;
    Index ro = system.dof_offset(c.row_element);
    Index co = system.dof_offset(c.col_element);
    route_block(blocks, c.col_offset, ro, co, c.block, scale);
    if (c.add_transpose) {
      Offset back = -c.col_offset;
      Matrix tr = c.block.transpose();
      route_block(blocks, back, co, ro, tr, scale);
    }
  }
  return blocks;
}

SymbolBlocks symbol_blocks(const Mesh& mesh, const Vector& eta, Real ip_scale,
                           const AssemblyOptions& options) {
  GlobalSystem system(mesh, eta, options);
  return symbol_blocks(system, ip_scale);
}

MatrixC symbol(const SymbolBlocks& blocks, const Vector& theta) {
  if (theta.size() != blocks.dim)
    throw InvalidInputError("symbol: phase vector size must match the mesh dimension");
  MatrixC a = blocks.center.cast<Complex>();
  for (int i = 0; i < blocks.dim; ++i) {
    Complex forward = std::exp(Complex(0.0, theta[i]));
    a += forward * blocks.plus[i].cast<Complex>();
    a += std::conj(forward) * blocks.minus[i].cast<Complex>();
  }
  return a;
}

std::vector<PhasePoint> phase_scan(const SymbolBlocks& blocks, int n_cells) {
  if (n_cells < 1) throw InvalidInputError("phase_scan: the number of cells must be positive");
  Eigen::LLT<Matrix> llt(blocks.mass);
  if (llt.info() != Eigen::Success)
    throw NumericalError("phase_scan: cell mass matrix is not positive definite");
  // Eigen's triangular solver cannot mix a real factor with complex
  // right-hand sides, so promote the factor once.
  MatrixC factor = Matrix(llt.matrixL()).cast<Complex>();
  auto lower = factor.triangularView<Eigen::Lower>();

  Index n_points = 1;
  for (int i = 0; i < blocks.dim; ++i) n_points *= n_cells;

  std::vector<PhasePoint> scan(n_points);
  for (Index flat = 0; flat < n_points; ++flat) {
    PhasePoint& point = scan[flat];
    Index rest = flat;
    Vector theta = Vector::Zero(blocks.dim);
    // Row-major order: the last axis varies fastest.
    for (int i = blocks.dim - 1; i >= 0; --i) {
      point.z[i] = static_cast<int>(rest % n_cells);
      rest /= n_cells;
      theta[i] = 2.0 * std::numbers::pi * point.z[i] / n_cells;
    }
    MatrixC a = symbol(blocks, theta);
    // Pencil (A(theta), M): reduce with the Cholesky factor of M.
    MatrixC reduced = lower.solve(a);
    reduced = lower.solve(reduced.adjoint().eval()).adjoint();
    Eigen::SelfAdjointEigenSolver<MatrixC> es(reduced, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("phase_scan: eigenvalue solver failed");
    point.lambda_min = es.eigenvalues().minCoeff();
    point.lambda_max = es.eigenvalues().maxCoeff();
  }
  return scan;
}

Real spectral_radius(const SymbolBlocks& blocks, int n_cells) {
  Real top = -std::numeric_limits<Real>::infinity();
  for (const PhasePoint& point : phase_scan(blocks, n_cells)) top = std::max(top, point.lambda_max);
  return top;
}

Real psd_min_eig(const SymbolBlocks& blocks, int n_cells) {
  Real bottom = std::numeric_limits<Real>::infinity();
  for (const PhasePoint& point : phase_scan(blocks, n_cells))
    bottom = std::min(bottom, point.lambda_min);
  return bottom;
}

void write_phase_scan_csv(const std::vector<PhasePoint>& scan, int dim, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("write_phase_scan_csv: cannot open '" + path + "'");
  for (int i = 0; i < dim; ++i) out << "z" << i << ",";
  out << "lambda_min,lambda_max\n";
  char buf[64];
  for (const PhasePoint& point : scan) {
    for (int i = 0; i < dim; ++i) out << point.z[i] << ",";
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", point.lambda_min, point.lambda_max);
    out << buf;
  }
}

}  // namespace sipdg

#pragma once

// Bilinear-form assembly: per-element mass/stiffness and boundary auxiliary
// forms, DG consistency and interior-penalty face couplings, and the global
// system with per-block provenance so weighted submesh systems, penalty
// rescalings and lattice-offset binnings can be formed without reassembly.

#include "sipdg/basis.hpp"
#include "sipdg/decomposition.hpp"
#include "sipdg/mesh.hpp"

#include <Eigen/SparseCore>

#include <utility>
#include <vector>

namespace sipdg {

using SparseMatrix = Eigen::SparseMatrix<Real>;

// Scaling function nu used inside the interior-penalty form: the default
// |J_f|/|J_e| ratio, or the face-constant 1/(eps_f min d_i) built from
// inscribed-sphere diameters (simplicial elements only).
enum class IpScaling { jacobian_ratio, inscribed_diameter };

struct AssemblyOptions {
  IpScaling ip_scaling = IpScaling::jacobian_ratio;
};

struct ElementBlocks {
  Matrix mass;    // (rho u, w)_e
  Matrix stiff;   // volume gradient form
  Matrix bstar;   // boundary gradient form, nu^{-1}-weighted
  Matrix bstar2;  // boundary flux form, nu^{-1} c_n^+-weighted
};

// Per-element quadrature-evaluated blocks. Dofs are ordered basis-major with
// the m variables innermost: dof = basis_index * m + variable.
ElementBlocks element_blocks(const Mesh& mesh, int e);

enum class ContributionPart { volume, dg, ip };

struct Contribution {
  ContributionPart part = ContributionPart::volume;
  int row_element = -1;
  int col_element = -1;
  // Element whose boundary/volume integral produced this block, so
  // per-element forms can be reconstituted from a global assembly.
  int source_element = -1;
  // Lattice offset (in domain periods) of the column element's copy relative
  // to the row element's copy; zero except across periodic wraps.
  Offset col_offset = Offset::Zero();
  int face = -1;             // provenance face id, -1 for volume blocks
  bool add_transpose = false;  // consistency blocks enter as B + B^t
  Matrix block;
};

class GlobalSystem {
 public:
  GlobalSystem(const Mesh& mesh, Vector eta, AssemblyOptions options = {});

  const Mesh& mesh() const { return *mesh_; }
  const Vector& eta() const { return eta_; }
  int var_count() const { return m_; }

  Index total_dofs() const { return total_dofs_; }
  Index dof_offset(int e) const { return offsets_.at(e); }
  Index element_dofs(int e) const { return sizes_.at(e); }

  const std::vector<Matrix>& mass_blocks() const { return mass_blocks_; }
  const std::vector<Contribution>& contributions() const { return contributions_; }

  SparseMatrix mass() const;
  // A with the interior-penalty part scaled by ip_scale (eta -> ip_scale*eta).
  SparseMatrix stiffness(Real ip_scale = 1.0) const;

  // Weighted pair (M_w, A_w): element weights scale volume and mass blocks,
  // face weights scale consistency and penalty blocks. Throws on
  // inadmissible submeshes (weighted face next to an unweighted element).
  std::pair<SparseMatrix, SparseMatrix> weighted(const WeightedSubmesh& submesh, Real ip_scale = 1.0) const;

  // Dense reduction of the weighted pair to the dofs of positively weighted
  // elements, in ascending element order.
  std::pair<Matrix, Matrix> weighted_reduced(const WeightedSubmesh& submesh, Real ip_scale = 1.0) const;

 private:
  const Mesh* mesh_;
  Vector eta_;
  AssemblyOptions options_;
  int m_ = 0;
  Index total_dofs_ = 0;
  std::vector<Index> offsets_;
  std::vector<Index> sizes_;
  std::vector<Matrix> mass_blocks_;
  std::vector<Contribution> contributions_;
};

// Assembles the interior-penalty part both element-boundary-wise and via the
// face-based jump/average form and returns the maximum entrywise deviation
// relative to the largest entry (0 when both vanish).
Real face_form_crosscheck(const Mesh& mesh, const Vector& eta);

// Coordinate text export (row col value per line) for external auditing.
void write_coordinate_matrix(const SparseMatrix& matrix, const std::string& path);

// JSON header describing the dof layout of an assembled system.
std::string dof_map_json(const GlobalSystem& system);

}  // namespace sipdg

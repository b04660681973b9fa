#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "sipdg/assembly.hpp"
#include "sipdg/common.hpp"
#include "sipdg/mesh.hpp"

namespace sipdg {

// Nearest-neighbour cell coupling of a translation-invariant operator,
// extracted from the assembly of a single periodic generator cell.
//
// On an N-periodic tiling the global operator A acts block-Toeplitz on
// per-cell coefficient vectors u_k (k in Z^dim mod N):
//
//   (A u)_k = center * u_k + sum_i (plus[i] * u_{k+e_i} + minus[i] * u_{k-e_i})
//
// and the cell mass matrix `mass` is block diagonal.  Couplings never reach
// beyond adjacent cells because every face joins lattice neighbours.
struct SymbolBlocks {
  int dim = 0;
  Index size = 0;               // dofs per generator cell
  Matrix mass;                  // block M_0 (symmetric positive definite)
  Matrix center;                // block A_0
  std::vector<Matrix> plus;     // plus[i]  = A_i^+ (coupling to cell k+e_i)
  std::vector<Matrix> minus;    // minus[i] = A_i^- (coupling to cell k-e_i)
};

// Extracts the symbol blocks from a fully periodic single-cell assembly.
// The system must be built on a mesh whose generator tiles the domain once
// (cells == 1) with periodic boundaries in every direction.  `ip_scale`
// multiplies the penalty contributions, exactly as in
// GlobalSystem::stiffness.  Throws InvalidInputError if the mesh couples
// cells beyond nearest neighbours or is not fully periodic.
SymbolBlocks symbol_blocks(const GlobalSystem& system, Real ip_scale = 1.0);

// Convenience overload: assembles the generator cell internally.
SymbolBlocks symbol_blocks(const Mesh& mesh, const Vector& eta, Real ip_scale = 1.0,
                           const AssemblyOptions& options = {});

// The Fourier symbol  A(theta) = A_0 + sum_i (e^{+i theta_i} A_i^+ +
// e^{-i theta_i} A_i^-)  for phase angles theta in [0, 2*pi)^dim.
// Hermitian whenever the assembled operator is symmetric.
MatrixC symbol(const SymbolBlocks& blocks, const Vector& theta);

// One sampled phase point z (integer frequencies, 0 <= z_i < N) together
// with the extreme eigenvalues of the generalized pencil (A(theta_z), M_0).
struct PhasePoint {
  Offset z = Offset::Zero();
  Real lambda_min = 0.0;
  Real lambda_max = 0.0;
};

// Evaluates the symbol pencil at every grid phase z in {0,...,N-1}^dim,
// theta_z = 2*pi*z/N.  The eigenvalues of M^{-1}A on the N-periodic tiling
// are exactly the union of the pencil eigenvalues over this grid.
std::vector<PhasePoint> phase_scan(const SymbolBlocks& blocks, int n_cells);

// Largest pencil eigenvalue over the phase grid: the exact largest
// eigenvalue of M^{-1}A on the N-periodic tiling.
Real spectral_radius(const SymbolBlocks& blocks, int n_cells);

// Smallest pencil eigenvalue over the phase grid; the operator is positive
// semidefinite on the N-periodic tiling iff this is >= 0 (up to roundoff).
Real psd_min_eig(const SymbolBlocks& blocks, int n_cells);

// Writes "z_0,...,z_{dim-1},lambda_min,lambda_max" rows (with header) in
// deterministic row-major z order.
void write_phase_scan_csv(const std::vector<PhasePoint>& scan, int dim, const std::string& path);

}  // namespace sipdg

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sipdg/assembly.hpp"
#include "sipdg/common.hpp"
#include "sipdg/decomposition.hpp"
#include "sipdg/mesh.hpp"

namespace sipdg {

// ---------------------------------------------------------------------------
// Dense symmetric eigenvalue utilities
// ---------------------------------------------------------------------------

struct PowerIterationSettings {
  Real tol = 1e-12;        // relative change threshold per iteration
  int window = 10;         // consecutive iterations that must stay below tol
  int max_iterations = 100000;
  std::uint64_t seed = 20240915;  // start vector RNG seed (deterministic)
};

struct PowerIterationResult {
  Real value = 0.0;   // dominant-magnitude eigenvalue (signed Rayleigh quotient)
  Vector vector;      // unit eigenvector estimate
  int iterations = 0;
};

// Power iteration on a dense symmetric matrix.  Converges to the eigenvalue
// of largest magnitude; ties between +lambda and -lambda are broken by the
// random start.  Throws NumericalError (reporting the last bracket) if the
// Rayleigh quotient has not stabilized within max_iterations.
PowerIterationResult power_iteration(const Matrix& symmetric,
                                     const PowerIterationSettings& settings = {});

// Congruence reduction of a symmetric positive semidefinite matrix
// K = V * diag(D) * V^T with orthonormal V and D sorted by descending
// magnitude; `rank` counts entries of D above tol_rank * max(D).
// Throws NumericalError if K has an eigenvalue below -tol_rank * max|D|.
struct CongruenceDecomposition {
  Matrix v;       // orthonormal congruence basis (columns)
  Vector d;       // eigenvalues, descending magnitude
  Index rank = 0;
};

CongruenceDecomposition congruence(const Matrix& k, Real tol_rank = 1e-10);

// ---------------------------------------------------------------------------
// Penalty parameters
// ---------------------------------------------------------------------------

// star:   sharp parameter from the gradient trace form (kappa*)
// star2:  sharp parameter from the flux trace form (kappa**)
// mulder: closed-form reference penalty p(p+1) (triangles) / p(p+2)
//         (tetrahedra) paired with inscribed-diameter face scaling
enum class PenaltyVariant { star, star2, mulder };

PenaltyVariant parse_variant(const std::string& name);
std::string variant_name(PenaltyVariant variant);

// Assembly options matching a penalty variant (mulder switches the
// interior-penalty scaling to inscribed diameters).
AssemblyOptions variant_assembly_options(PenaltyVariant variant);

struct KappaResult {
  Real value = 0.0;   // kappa* or kappa**
  Index rank = 0;     // rank of the reduced stiffness block
  int iterations = 0; // power iterations spent
};

// Sharp penalty parameter of one element: the largest generalized eigenvalue
// of the boundary trace form against the stiffness form, computed on the
// congruence-reduced range of the stiffness block.  Returns 0 when the
// stiffness block vanishes (p = 0).  `variant` selects between the gradient
// (star) and flux (star2) trace forms; mulder is rejected here.
KappaResult kappa_from_blocks(const ElementBlocks& blocks, PenaltyVariant variant,
                              Real tol_rank = 1e-10);
KappaResult kappa(const Mesh& mesh, int element, PenaltyVariant variant, Real tol_rank = 1e-10);

// Closed-form penalty p(p+1) for triangles and p(p+2) for tetrahedra;
// rejects other shapes and p < 1.
Real mulder_eta(Shape shape, int degree);

// Guaranteed coercivity constant 1 - 1/sqrt(c_kappa) of the bilinear form
// when every element penalty is c_kappa * kappa with c_kappa >= 1.
Real coercivity_constant(Real c_kappa);

// Per-element penalties for a mesh: eta = c_kappa * kappa for star/star2
// (kappa/rank filled in), eta = mulder_eta for mulder (kappa/rank zero,
// c_kappa ignored).
struct PenaltyReport {
  PenaltyVariant variant = PenaltyVariant::star;
  Real c_kappa = 1.0;
  Vector kappa;
  Vector eta;
  IVector rank;
};

PenaltyReport penalty_report(const Mesh& mesh, PenaltyVariant variant, Real c_kappa = 1.0,
                             Real tol_rank = 1e-10);

// ---------------------------------------------------------------------------
// Time-step bounds
// ---------------------------------------------------------------------------

// Localized eigenvalue bound over a weighted decomposition: for each
// submesh the largest-magnitude eigenvalue of the reduced weighted pencil
// (A'_w, M'_w), combined as lambda_bar = max_w |lambda_w|.  The time step
// bound is dt = c_method / sqrt(lambda_bar) (infinity when lambda_bar <= 0).
struct TimeStepBound {
  Real lambda_bar = 0.0;
  Real dt = 0.0;
  Vector submesh_lambda;  // signed per-submesh eigenvalues
  IVector iterations;     // power iterations per submesh
};

TimeStepBound lambda_bound(const GlobalSystem& system, const MeshDecomposition& decomposition,
                           Real ip_scale = 1.0, Real c_method = 2.0);

// Exact largest eigenvalue of M^{-1}A via dense Cholesky reduction.
// Guarded against accidental huge meshes: throws InvalidInputError when
// the system exceeds max_dofs.
Real lambda_exact_dense(const GlobalSystem& system, Real ip_scale = 1.0, Index max_dofs = 5000);

// ---------------------------------------------------------------------------
// Sharpness studies on periodic mesh families
// ---------------------------------------------------------------------------

struct SharpnessOptions {
  int fourier_cells = 2;  // N: phase-grid resolution and tiling of the exact spectra
  Real c_method = 2.0;    // leapfrog stability constant in dt = c / sqrt(lambda)
  Real tol_rank = 1e-10;  // congruence rank threshold
  Real tol_psd = 1e-9;    // relative slack in the positive-semidefiniteness test
};

// Smallest penalty fraction c in [0,1] (two decimals) for which the
// operator assembled with penalties c * eta stays positive semidefinite on
// the periodic tiling; found by bisection on the Fourier symbol and snapped
// to the coarsest passing grid value.  Throws NumericalError if even c = 1
// fails the test.  `spec.cells` is ignored (the scan fixes the tiling);
// boundaries must be periodic.
Real cmin_bisection(const GeneratorSpec& spec, PenaltyVariant variant,
                    const SharpnessOptions& options = {});

// Sharpness ratios of one mesh family: exact time steps at the reduced
// penalty c_min * eta and the full penalty eta (both via the Fourier symbol
// on the N-cell tiling), and the localized vertex-decomposition estimate.
struct SharpnessReport {
  PenaltyVariant variant = PenaltyVariant::star;
  Real c_min = 0.0;
  Real dt_eta_min = 0.0;    // exact dt with penalties c_min * eta
  Real dt_eta = 0.0;        // exact dt with penalties eta
  Real dt_est = 0.0;        // localized lower bound with penalties eta
  Real ratio_penalty = 0.0;   // dt_eta_min / dt_eta
  Real ratio_estimate = 0.0;  // dt_eta / dt_est
};

SharpnessReport sharpness_ratios(const GeneratorSpec& spec, PenaltyVariant variant,
                                 const SharpnessOptions& options = {});

}  // namespace sipdg

#include "sipdg/stability.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "sipdg/fourier.hpp"

namespace sipdg {
namespace {

// Cholesky reduction of the pencil (A, M) to the symmetric eigenproblem
// L^{-1} A L^{-T}; M must be positive definite.
Matrix pencil_reduction(const Matrix& m, const Matrix& a, const char* who) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw NumericalError(std::string(who) + ": mass matrix is not positive definite");
  Matrix s = llt.matrixL().solve(a);
  s = llt.matrixL().solve(s.transpose()).transpose();
  return 0.5 * (s + s.transpose());
}

Real safe_dt(Real lambda_bar, Real c_method) {
  return lambda_bar > 0.0 ? c_method / std::sqrt(lambda_bar)
                          : std::numeric_limits<Real>::infinity();
}

SymbolBlocks blend(const SymbolBlocks& zero, const SymbolBlocks& one, Real c) {
  SymbolBlocks out = zero;
  out.center += c * (one.center - zero.center);
  for (int i = 0; i < out.dim; ++i) {
    out.plus[i] += c * (one.plus[i] - zero.plus[i]);
    out.minus[i] += c * (one.minus[i] - zero.minus[i]);
  }
  return out;
}

}  // namespace

PenaltyVariant parse_variant(const std::string& name) {
  if (name == "star") return PenaltyVariant::star;
  if (name == "star2") return PenaltyVariant::star2;
  if (name == "mulder") return PenaltyVariant::mulder;
  throw InvalidInputError("unknown penalty variant '" + name + "' (expected star, star2 or mulder)");
}

std::string variant_name(PenaltyVariant variant) {
  switch (variant) {
    case PenaltyVariant::star: return "star";
    case PenaltyVariant::star2: return "star2";
    case PenaltyVariant::mulder: return "mulder";
  }
  throw InvalidInputError("variant_name: invalid enum value");
}

AssemblyOptions variant_assembly_options(PenaltyVariant variant) {
  AssemblyOptions options;
  if (variant == PenaltyVariant::mulder) options.ip_scaling = IpScaling::inscribed_diameter;
  return options;
}

KappaResult kappa_from_blocks(const ElementBlocks& blocks, PenaltyVariant variant, Real tol_rank) {
  const Matrix* trace = nullptr;
  switch (variant) {
    case PenaltyVariant::star: trace = &blocks.bstar; break;
    case PenaltyVariant::star2: trace = &blocks.bstar2; break;
    case PenaltyVariant::mulder:
      throw InvalidInputError("kappa is defined for the star and star2 variants only");
  }

  CongruenceDecomposition cd = congruence(blocks.stiff, tol_rank);
  KappaResult out;
  out.rank = cd.rank;
  if (cd.rank == 0) return out;

  Matrix vr = cd.v.leftCols(cd.rank);
  Vector inv_sqrt = cd.d.head(cd.rank).cwiseSqrt().cwiseInverse();
  Matrix s = inv_sqrt.asDiagonal() * (vr.transpose() * (*trace) * vr) * inv_sqrt.asDiagonal();
  s = 0.5 * (s + s.transpose());

  PowerIterationResult pr = power_iteration(s);
  out.value = std::max(Real(0), pr.value);
  out.iterations = pr.iterations;
  return out;
}

KappaResult kappa(const Mesh& mesh, int element, PenaltyVariant variant, Real tol_rank) {
  if (element < 0 || element >= static_cast<int>(mesh.elements.size()))
    throw InvalidInputError("kappa: element index out of range");
  return kappa_from_blocks(element_blocks(mesh, element), variant, tol_rank);
}

Real mulder_eta(Shape shape, int degree) {
  if (degree < 1) throw InvalidInputError("mulder_eta: requires degree >= 1");
  if (shape == Shape::triangle) return Real(degree) * (degree + 1);
  if (shape == Shape::tet) return Real(degree) * (degree + 2);
  throw InvalidInputError("mulder_eta: defined for triangles and tetrahedra only");
}

Real coercivity_constant(Real c_kappa) {
  if (c_kappa < 1.0)
    throw InvalidInputError("coercivity_constant: requires c_kappa >= 1");
  return 1.0 - 1.0 / std::sqrt(c_kappa);
}

PenaltyReport penalty_report(const Mesh& mesh, PenaltyVariant variant, Real c_kappa, Real tol_rank) {
  const Index n = static_cast<Index>(mesh.elements.size());
  PenaltyReport report;
  report.variant = variant;
  report.c_kappa = c_kappa;
  report.kappa = Vector::Zero(n);
  report.eta = Vector::Zero(n);
  report.rank = IVector::Zero(n);

  if (variant == PenaltyVariant::mulder) {
    for (Index e = 0; e < n; ++e)
      report.eta[e] = mulder_eta(mesh.elements[e].shape, mesh.elements[e].degree);
    return report;
  }

  parallel_for(n, [&](Index e) {
    KappaResult kr = kappa(mesh, static_cast<int>(e), variant, tol_rank);
    report.kappa[e] = kr.value;
    report.rank[e] = static_cast<int>(kr.rank);
    report.eta[e] = c_kappa * kr.value;
  });
  return report;
}

TimeStepBound lambda_bound(const GlobalSystem& system, const MeshDecomposition& decomposition,
                           Real ip_scale, Real c_method) {
  std::vector<std::string> issues = check_decomposition(system.mesh(), decomposition);
  if (!issues.empty())
    throw InvalidInputError("lambda_bound: invalid decomposition: " + issues.front());

  const Index n = static_cast<Index>(decomposition.submeshes.size());
  TimeStepBound out;
  out.submesh_lambda = Vector::Zero(n);
  out.iterations = IVector::Zero(n);

  parallel_for(n, [&](Index i) {
    auto [mr, ar] = system.weighted_reduced(decomposition.submeshes[i], ip_scale);
    if (mr.rows() == 0) return;
    Matrix s = pencil_reduction(mr, ar, "lambda_bound");
    PowerIterationSettings settings;
    settings.seed += 1013904223ull * static_cast<std::uint64_t>(i + 1);
    PowerIterationResult pr = power_iteration(s, settings);
    out.submesh_lambda[i] = pr.value;
    out.iterations[i] = pr.iterations;
  });

  out.lambda_bar = n > 0 ? out.submesh_lambda.cwiseAbs().maxCoeff() : 0.0;
  out.dt = safe_dt(out.lambda_bar, c_method);
  return out;
}

Real lambda_exact_dense(const GlobalSystem& system, Real ip_scale, Index max_dofs) {
  if (system.total_dofs() > max_dofs)
    throw InvalidInputError("lambda_exact_dense: system exceeds the dense size guard");
  if (system.total_dofs() == 0) return 0.0;

  Matrix m = Matrix(system.mass());
  Matrix a = Matrix(system.stiffness(ip_scale));
  Matrix s = pencil_reduction(m, a, "lambda_exact_dense");
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("lambda_exact_dense: eigenvalue solver failed");
  Real lo = es.eigenvalues().minCoeff();
  Real hi = es.eigenvalues().maxCoeff();
  return std::abs(lo) > std::abs(hi) ? lo : hi;
}

Real cmin_bisection(const GeneratorSpec& spec, PenaltyVariant variant,
                    const SharpnessOptions& options) {
  GeneratorSpec unit = spec;
  unit.cells = 1;
  Mesh mesh = generate_mesh(unit);
  PenaltyReport penalties = penalty_report(mesh, variant, 1.0, options.tol_rank);
  if (penalties.eta.size() == 0 || penalties.eta.minCoeff() <= 0.0)
    throw InvalidInputError("cmin_bisection: penalties must be positive (degree >= 1)");

  GlobalSystem system(mesh, penalties.eta, variant_assembly_options(variant));
  SymbolBlocks base = symbol_blocks(system, 0.0);
  SymbolBlocks full = symbol_blocks(system, 1.0);

  auto passes = [&](Real c) {
    SymbolBlocks blocks = blend(base, full, c);
    Real bottom = psd_min_eig(blocks, options.fourier_cells);
    Real top = spectral_radius(blocks, options.fourier_cells);
    return bottom >= -options.tol_psd * std::max(top, Real(0));
  };

  if (!passes(1.0))
    throw NumericalError("cmin_bisection: operator is indefinite even at the full penalty");
  if (passes(0.0)) return 0.0;

  Real lo = 0.0, hi = 1.0;
  while (hi - lo >= 0.005) {
    Real mid = 0.5 * (lo + hi);
    (passes(mid) ? hi : lo) = mid;
  }

  // Snap to the smallest passing value on the two-decimal grid; the test is
  // monotone in c because the penalty part is positive semidefinite.
  int grid = std::min(100, static_cast<int>(std::ceil(hi * 100.0 - 1e-9)));
  while (grid < 100 && !passes(grid / 100.0)) ++grid;
  while (grid > 0 && passes((grid - 1) / 100.0)) --grid;
  return grid / 100.0;
}

SharpnessReport sharpness_ratios(const GeneratorSpec& spec, PenaltyVariant variant,
                                 const SharpnessOptions& options) {
  SharpnessReport report;
  report.variant = variant;
  report.c_min = cmin_bisection(spec, variant, options);

  GeneratorSpec unit = spec;
  unit.cells = 1;
  Mesh cell = generate_mesh(unit);
  PenaltyReport penalties = penalty_report(cell, variant, 1.0, options.tol_rank);
  GlobalSystem system(cell, penalties.eta, variant_assembly_options(variant));

  Real lambda_eta = spectral_radius(symbol_blocks(system, 1.0), options.fourier_cells);
  Real lambda_min = spectral_radius(symbol_blocks(system, report.c_min), options.fourier_cells);
  report.dt_eta = safe_dt(lambda_eta, options.c_method);
  report.dt_eta_min = safe_dt(lambda_min, options.c_method);

  // The localized estimate needs a tiling with at least two cells per axis;
  // on a single periodic cell every vertex class wraps onto itself and the
  // decomposition degenerates to the global problem.
  GeneratorSpec tiled = spec;
  tiled.cells = std::max(2, options.fourier_cells);
  Mesh mesh = generate_mesh(tiled);
  PenaltyReport tiled_penalties = penalty_report(mesh, variant, 1.0, options.tol_rank);
  GlobalSystem tiled_system(mesh, tiled_penalties.eta, variant_assembly_options(variant));
  TimeStepBound bound = lambda_bound(tiled_system, vertex_decomposition(mesh), 1.0, options.c_method);
  report.dt_est = bound.dt;

  report.ratio_penalty = report.dt_eta > 0.0 ? report.dt_eta_min / report.dt_eta : 0.0;
  report.ratio_estimate = report.dt_est > 0.0 ? report.dt_eta / report.dt_est : 0.0;
  return report;
}

}  // namespace sipdg

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sipdg/stability.hpp"

namespace sipdg {

PowerIterationResult power_iteration(const Matrix& symmetric, const PowerIterationSettings& settings) {
  if (symmetric.rows() != symmetric.cols())
    throw InvalidInputError("power_iteration: matrix must be square");
  const Index n = symmetric.rows();
  PowerIterationResult out;
  if (n == 0) return out;

  Vector v = seeded_unit_vector(n, settings.seed);
  Real lambda = v.dot(symmetric * v);
  Real previous = lambda;
  int stable = 0;

  for (int it = 1; it <= settings.max_iterations; ++it) {
    Vector w = symmetric * v;
    Real norm = w.norm();
    out.iterations = it;
    if (norm == 0.0) {
      // v is annihilated exactly; the Rayleigh quotient 0 is an eigenvalue.
      out.value = 0.0;
      out.vector = v;
      return out;
    }
    v = w / norm;
    previous = lambda;
    lambda = v.dot(symmetric * v);

    Real scale = std::max(std::abs(lambda), std::abs(previous));
    if (std::abs(lambda - previous) <= settings.tol * std::max(scale, Real(1e-30))) {
      if (++stable >= settings.window) {
        out.value = lambda;
        out.vector = v;
        return out;
      }
    } else {
      stable = 0;
    }
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "power_iteration: no convergence after %d iterations; last interval [%.17g, %.17g]",
                settings.max_iterations, std::min(previous, lambda), std::max(previous, lambda));
  throw NumericalError(buf);
}

CongruenceDecomposition congruence(const Matrix& k, Real tol_rank) {
  if (k.rows() != k.cols()) throw InvalidInputError("congruence: matrix must be square");
  const Index n = k.rows();
  CongruenceDecomposition out;
  out.v = Matrix::Zero(n, n);
  out.d = Vector::Zero(n);
  if (n == 0) return out;

  Real scale = k.cwiseAbs().maxCoeff();
  Real asym = (k - k.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-11 * scale + 1e-300)
    throw InvalidInputError("congruence: matrix must be symmetric");

  Matrix ks = 0.5 * (k + k.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(ks);
  if (es.info() != Eigen::Success) throw NumericalError("congruence: eigenvalue solver failed");

  Vector lam = es.eigenvalues();
  Real lmax = lam.cwiseAbs().maxCoeff();
  if (lam.minCoeff() < -tol_rank * lmax) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "congruence: matrix is not positive semidefinite (eigenvalue %.5g)", lam.minCoeff());
    throw NumericalError(buf);
  }

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(lam[a]) > std::abs(lam[b]); });

  for (Index j = 0; j < n; ++j) {
    out.v.col(j) = es.eigenvectors().col(order[j]);
    out.d[j] = lam[order[j]];
  }
  out.rank = 0;
  while (out.rank < n && out.d[out.rank] > tol_rank * lmax) ++out.rank;
  return out;
}

}  // namespace sipdg

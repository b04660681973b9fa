#pragma once

// Shared scalar/matrix aliases, error types and the small runtime
// (thread cap, deterministic RNG) used across the library.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace sipdg {

using Real = double;
using Index = Eigen::Index;
using Complex = std::complex<Real>;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MatrixC = Eigen::MatrixXcd;
using VectorC = Eigen::VectorXcd;
using IVector = Eigen::VectorXi;

// Up to 3 spatial axes; unused trailing entries stay zero.
using Offset = Eigen::Vector3i;

// Invalid user input (bad family name, malformed config, out-of-range p).
class InvalidInputError : public std::invalid_argument {
 public:
  explicit InvalidInputError(const std::string& what) : std::invalid_argument(what) {}
};

// Geometry that cannot be processed (non-positive Jacobian, face mismatch).
class MappingError : public std::runtime_error {
 public:
  explicit MappingError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure (iteration cap hit, indefinite mass, size guard).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Number of worker threads: min(hardware, SIPDG_THREADS if set).
int thread_count();

// Runs fn(i) for i in [0, n). Deterministic: the work item for a given i is
// independent of the thread grain, so callers write into preallocated slots.
void parallel_for(Index n, const std::function<void(Index)>& fn);

// Deterministic pseudo-random start vector with unit norm.
Vector seeded_unit_vector(Index n, std::uint64_t seed);

// Deterministic dense matrix with entries in [-1, 1].
Matrix seeded_matrix(Index rows, Index cols, std::uint64_t seed);

}  // namespace sipdg

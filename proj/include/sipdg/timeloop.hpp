#pragma once

// Leap-frog integration of M u'' + A u = f with per-element mass solves, the
// exactly conserved staggered discrete energy, and an empirical stability
// probe.  Zero modes of A drift linearly in the state norm but leave the
// staggered energy constant, so the probe monitors energy rather than norms
// and flags genuine exponential instability only.

#include "sipdg/assembly.hpp"
#include "sipdg/mesh.hpp"

#include <Eigen/Cholesky>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sipdg {

// Pointwise data: physical point (dim entries) -> the m variable values.
using FieldFunction = std::function<Vector(const Vector&)>;

// Time-dependent load vector, already tested against the basis (dof layout
// of the assembled system).  An empty function means zero.
using ForceFunction = std::function<Vector(Real)>;

struct InitialProjection {
  Vector u;  // coefficients of the rho-weighted L2 projection of u0
  Vector v;  // coefficients of the rho-weighted L2 projection of v0
};

// Projects pointwise initial data onto the broken polynomial space in the
// rho-weighted L2 inner product, one block mass solve per element.  The
// quadrature degree is boosted well beyond the assembly rules so that smooth
// non-polynomial data is integrated to near machine accuracy; load and mass
// use the same rule, which makes the projector exactly idempotent on
// functions that already lie in the discrete space.
InitialProjection project_initial(const Mesh& mesh, const FieldFunction& u0, const FieldFunction& v0);

struct SimulationState {
  Vector u_prev;              // u^{n-1}
  Vector u_curr;              // u^n
  int step = 0;               // n, number of completed steps
  Real dt = 0.0;
  std::vector<Real> energy;   // E^{j+1/2} for j = 0 .. step-1
  int nonfinite_step = -1;    // first step with a non-finite state, -1 if none
};

// u^{n+1} = 2u^n - u^{n-1} - dt^2 M^{-1}(A u^n - f(n dt)), with the Taylor
// start u^1 = u^0 + dt v^0 + dt^2/2 M^{-1}(f(0) - A u^0).  After each step
// the staggered energy E^{n+1/2} = |u^{n+1}-u^n|_M^2 / (2 dt^2)
// + (u^{n+1})^T A u^n / 2 is recorded; the recurrence conserves it exactly
// in exact arithmetic when f = 0.
class LeapfrogIntegrator {
 public:
  explicit LeapfrogIntegrator(const GlobalSystem& system, Real ip_scale = 1.0);

  Index dofs() const { return mass_.rows(); }
  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness() const { return stiffness_; }

  // Block-diagonal mass solve.
  Vector apply_mass_inverse(const Vector& rhs) const;

  SimulationState start(const Vector& u0, const Vector& v0, Real dt, const ForceFunction& f = {}) const;

  // Runs `steps` updates; stops early (recording nonfinite_step) once the
  // state leaves the representable range, which is the instability signal.
  void advance(SimulationState& state, int steps, const ForceFunction& f = {}) const;

 private:
  Real record_energy(SimulationState& state, const Vector& au_prev) const;

  const GlobalSystem* system_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
  std::vector<Eigen::LLT<Matrix>> factors_;
};

// Convenience wrapper: advances a started state and returns it.
SimulationState leapfrog(const GlobalSystem& system, SimulationState state, const ForceFunction& f, int steps);

struct StabilityVerdict {
  bool stable = true;
  int failure_step = -1;  // first step that broke the energy bound, -1 if none
  Real initial_energy = 0.0;
  Real peak_energy = 0.0;
};

// Starts from a seeded random state and runs `steps` leap-frog updates
// (Taylor start included); unstable once the staggered energy leaves ten
// times its initial magnitude or the state stops being finite.  ip_scale
// rescales the penalty part of the operator as in GlobalSystem::stiffness.
StabilityVerdict stability_probe(const GlobalSystem& system, Real dt, int steps,
                                 Real ip_scale = 1.0, std::uint64_t seed = 20240915);

// CSV trace "step,time,energy", one row per completed step.
void write_energy_csv(const SimulationState& state, const std::string& path);

}  // namespace sipdg

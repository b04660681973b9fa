#include "sipdg/timeloop.hpp"

#include "sipdg/basis.hpp"
#include "sipdg/quadrature.hpp"
#include "sipdg/shapes.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>

namespace sipdg {

namespace {

// Boosted rules for projecting analytic data: the extra degree integrates
// smooth non-polynomial integrands to near machine accuracy while staying
// exact (hence idempotent) on the discrete space itself.
QuadratureRule projection_rule(Shape shape, int p, bool affine) {
  if (affine) return quadrature(shape, 2 * p + 18);
  return tensor_gauss(shape, p + 9);
}

void check_state(const LeapfrogIntegrator& integrator, const SimulationState& state) {
  if (state.dt <= 0.0) throw InvalidInputError("leapfrog: time step must be positive");
  if (state.u_prev.size() != integrator.dofs() || state.u_curr.size() != integrator.dofs())
    throw InvalidInputError("leapfrog: state size does not match the system");
}

}  // namespace

InitialProjection project_initial(const Mesh& mesh, const FieldFunction& u0, const FieldFunction& v0) {
  if (!u0 || !v0) throw InvalidInputError("project_initial: initial data callbacks are required");
  const int m = mesh.var_count();
  const Index n_elems = static_cast<Index>(mesh.elements.size());

  std::vector<Index> offsets(n_elems + 1, 0);
  for (Index e = 0; e < n_elems; ++e) {
    const Element& el = mesh.elements[static_cast<std::size_t>(e)];
    offsets[e + 1] = offsets[e] + static_cast<Index>(basis_dimension(el.shape, el.degree)) * m;
  }

  InitialProjection out;
  out.u = Vector::Zero(offsets[n_elems]);
  out.v = Vector::Zero(offsets[n_elems]);

  parallel_for(n_elems, [&](Index e) {
    const Element& el = mesh.elements[static_cast<std::size_t>(e)];
    ElementMapping map = mesh.mapping(static_cast<int>(e));
    BasisSet basis(el.shape, el.degree);
    const Index nb = basis.size();
    const Index nd = nb * m;

    QuadratureRule rule = projection_rule(el.shape, el.degree, map.affine());
    Matrix vals = basis.values(rule.points);

    Matrix mass = Matrix::Zero(nd, nd);
    Vector load_u = Vector::Zero(nd);
    Vector load_v = Vector::Zero(nd);
    Matrix interp(m, nd);
    for (Index q = 0; q < rule.points.cols(); ++q) {
      Vector ref = rule.points.col(q);
      const Real w = rule.weights[q] * map.jacobian_det(ref) *
                     el.material.density(vertex_weights(el.shape, ref));
      Vector x = map.map(ref);
      Vector fu = u0(x);
      Vector fv = v0(x);
      if (fu.size() != m || fv.size() != m)
        throw InvalidInputError("project_initial: initial data must return one value per variable");
      interp.setZero();
      for (Index i = 0; i < nb; ++i)
        for (int c = 0; c < m; ++c) interp(c, i * m + c) = vals(q, i);
      mass.noalias() += w * interp.transpose() * interp;
      load_u.noalias() += w * interp.transpose() * fu;
      load_v.noalias() += w * interp.transpose() * fv;
    }

    Eigen::LLT<Matrix> llt(mass);
    if (llt.info() != Eigen::Success)
      throw NumericalError("project_initial: element mass block is not positive definite");
    out.u.segment(offsets[e], nd) = llt.solve(load_u);
    out.v.segment(offsets[e], nd) = llt.solve(load_v);
  });
  return out;
}

LeapfrogIntegrator::LeapfrogIntegrator(const GlobalSystem& system, Real ip_scale)
    : system_(&system), mass_(system.mass()), stiffness_(system.stiffness(ip_scale)) {
  const std::vector<Matrix>& blocks = system.mass_blocks();
  factors_.resize(blocks.size());
  parallel_for(static_cast<Index>(blocks.size()), [&](Index e) {
    factors_[static_cast<std::size_t>(e)].compute(blocks[static_cast<std::size_t>(e)]);
    if (factors_[static_cast<std::size_t>(e)].info() != Eigen::Success)
      throw NumericalError("leapfrog: element mass block is not positive definite");
  });
}

Vector LeapfrogIntegrator::apply_mass_inverse(const Vector& rhs) const {
  if (rhs.size() != dofs()) throw InvalidInputError("leapfrog: vector size does not match the system");
  Vector out(rhs.size());
  const Index n_elems = static_cast<Index>(factors_.size());
  parallel_for(n_elems, [&](Index e) {
    const Index off = system_->dof_offset(static_cast<int>(e));
    const Index size = system_->element_dofs(static_cast<int>(e));
    out.segment(off, size) = factors_[static_cast<std::size_t>(e)].solve(rhs.segment(off, size));
  });
  return out;
}

Real LeapfrogIntegrator::record_energy(SimulationState& state, const Vector& au_prev) const {
  Vector diff = state.u_curr - state.u_prev;
  const Real kinetic = 0.5 * diff.dot(mass_ * diff) / (state.dt * state.dt);
  const Real cross = 0.5 * state.u_curr.dot(au_prev);
  const Real e = kinetic + cross;
  state.energy.push_back(e);
  if (!std::isfinite(e) || !state.u_curr.allFinite()) state.nonfinite_step = state.step;
  return e;
}

SimulationState LeapfrogIntegrator::start(const Vector& u0, const Vector& v0, Real dt,
                                          const ForceFunction& f) const {
  if (dt <= 0.0) throw InvalidInputError("leapfrog: time step must be positive");
  if (u0.size() != dofs() || v0.size() != dofs())
    throw InvalidInputError("leapfrog: initial vectors do not match the system");
  SimulationState state;
  state.dt = dt;
  Vector au = stiffness_ * u0;
  Vector rhs = au;
  if (f) rhs -= f(0.0);
  Vector accel = apply_mass_inverse(rhs);
  state.u_prev = u0;
  state.u_curr = u0 + dt * v0 - 0.5 * dt * dt * accel;
  state.step = 1;
  record_energy(state, au);
  return state;
}

void LeapfrogIntegrator::advance(SimulationState& state, int steps, const ForceFunction& f) const {
  check_state(*this, state);
  for (int k = 0; k < steps; ++k) {
    if (state.nonfinite_step >= 0) return;
    const Real t = state.step * state.dt;
    Vector au = stiffness_ * state.u_curr;
    Vector rhs = au;
    if (f) rhs -= f(t);
    Vector accel = apply_mass_inverse(rhs);
    Vector next = 2.0 * state.u_curr - state.u_prev - state.dt * state.dt * accel;
    state.u_prev = std::move(state.u_curr);
    state.u_curr = std::move(next);
    ++state.step;
    record_energy(state, au);
  }
}

SimulationState leapfrog(const GlobalSystem& system, SimulationState state, const ForceFunction& f,
                         int steps) {
  LeapfrogIntegrator integrator(system);
  integrator.advance(state, steps, f);
  return state;
}

StabilityVerdict stability_probe(const GlobalSystem& system, Real dt, int steps, Real ip_scale,
                                 std::uint64_t seed) {
  StabilityVerdict verdict;
  if (steps <= 0 || system.total_dofs() == 0) return verdict;
  LeapfrogIntegrator integrator(system, ip_scale);
  Vector u0 = seeded_unit_vector(system.total_dofs(), seed);
  Vector v0 = seeded_unit_vector(system.total_dofs(), seed + 1);
  SimulationState state = integrator.start(u0, v0, dt);
  integrator.advance(state, steps - 1);

  verdict.initial_energy = state.energy.front();
  const Real limit = 10.0 * std::max(std::abs(verdict.initial_energy), Real(1e-300));
  for (std::size_t i = 0; i < state.energy.size(); ++i) {
    const Real e = state.energy[i];
    if (std::isfinite(e)) verdict.peak_energy = std::max(verdict.peak_energy, std::abs(e));
    if (!std::isfinite(e) || std::abs(e) > limit) {
      verdict.stable = false;
      verdict.failure_step = static_cast<int>(i) + 1;
      return verdict;
    }
  }
  if (state.nonfinite_step >= 0) {
    verdict.stable = false;
    verdict.failure_step = state.nonfinite_step;
  }
  return verdict;
}

void write_energy_csv(const SimulationState& state, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("write_energy_csv: cannot open '" + path + "'");
  out << "step,time,energy\n";
  char line[96];
  for (std::size_t i = 0; i < state.energy.size(); ++i) {
    const int step = static_cast<int>(i) + 1;
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g\n", step, step * state.dt, state.energy[i]);
    out << line;
  }
}

}  // namespace sipdg

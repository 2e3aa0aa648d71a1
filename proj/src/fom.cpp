#include "romns/fom.hpp"

#include <algorithm>
#include <cmath>

#include "romns/lifting.hpp"

namespace romns {

double divergence_tolerance(const Vector& y_m) { return 1e-8 * std::max(1.0, y_m.norm()); }

FomRhs fom_rhs(const OperatorSet& ops, const Vector& v, const Vector& y_bc, const Vector& y_bc_rate) {
  if (y_bc_rate.size() != ops.n_bc()) throw DimensionError("fom_rhs: trace rate size mismatch");
  const Vector f = eval_fcd(ops, v, y_bc);
  const Vector inv_omega = ops.omega.cwiseInverse();
  const Vector rhs = ops.m * inv_omega.cwiseProduct(f) - ops.fm * y_bc_rate;
  FomRhs out;
  out.p = ops.poisson->solve(rhs);
  out.dvdt = inv_omega.cwiseProduct(f - ops.apply_gradient(out.p));
  return out;
}

FomRhs fom_rhs(const OperatorSet& ops, const BoundaryModel& bc, const Vector& v, double t,
               Limit limit) {
  return fom_rhs(ops, v, bc.trace(t), bc.rate(t, limit));
}

FomState initial_condition(const OperatorSet& ops, const BoundaryModel& bc, double t0) {
  FomState s;
  s.t = t0;
  s.v = exact_lifting(ops, bc.trace(t0));
  s.p = fom_rhs(ops, bc, s.v, t0).p;
  return s;
}

SnapshotSet fom_integrate(const OperatorSet& ops, const BoundaryModel& bc, double t_end,
                          Index steps, const FomOptions& options) {
  if (steps < 1) throw InvalidArgument("fom_integrate: steps must be positive");
  if (bc.size() != ops.n_bc()) throw DimensionError("fom_integrate: boundary model size mismatch");
  const double t0 = options.t0;
  const double dt = (t_end - t0) / static_cast<double>(steps);
  if (!(dt > 0.0)) throw InvalidArgument("fom_integrate: t_end must exceed the start time");

  SnapshotSet snaps;
  snaps.grid_hash = ops.grid.hash();
  snaps.bc_kind = to_string(bc.kind());
  snaps.nu = ops.grid.bc().nu;
  snaps.dt = dt;
  snaps.times.resize(static_cast<std::size_t>(steps) + 1);
  snaps.velocity.resize(ops.n_vel(), steps + 1);
  if (options.store_pressure) snaps.pressure.resize(ops.n_p(), steps + 1);

  FomState state;
  state.t = t0;
  state.v = options.v0.size() > 0 ? options.v0 : exact_lifting(ops, bc.trace(t0));
  if (state.v.size() != ops.n_vel()) throw DimensionError("fom_integrate: initial velocity size mismatch");

  auto record = [&](Index j) {
    snaps.times[static_cast<std::size_t>(j)] = state.t;
    snaps.velocity.col(j) = state.v;
    if (options.store_pressure) snaps.pressure.col(j) = state.p;
    const Vector y_m = ops.fm * bc.trace(state.t);
    const double defect = (ops.m * state.v - y_m).norm() / divergence_tolerance(y_m);
    snaps.max_divergence_defect = std::max(snaps.max_divergence_defect, defect);
  };

  Vector k[4];
  for (Index n = 0; n < steps; ++n) {
    const double tn = t0 + static_cast<double>(n) * dt;
    for (int i = 0; i < 4; ++i) {
      const double ti = tn + kRk4Nodes[i] * dt;
      const Vector vi = i == 0 ? state.v : Vector(state.v + (kRk4Nodes[i] * dt) * k[i - 1]);
      FomRhs r = fom_rhs(ops, bc, vi, ti, i == 3 ? Limit::kLeft : Limit::kRight);
      k[i] = std::move(r.dvdt);
      if (i == 0) state.p = std::move(r.p);
    }
    record(n);
    if (options.on_step) options.on_step(n, state);
    state.v += (dt / 6.0) * (k[0] + 2.0 * k[1] + 2.0 * k[2] + k[3]);
    state.t = t0 + static_cast<double>(n + 1) * dt;
    if (!state.v.allFinite()) {
      throw NumericalFailure("fom_integrate: non-finite velocity at step " + std::to_string(n + 1), n + 1);
    }
  }
  state.p = fom_rhs(ops, bc, state.v, state.t, Limit::kLeft).p;
  record(steps);
  if (options.on_step) options.on_step(steps, state);
  return snaps;
}

}  // namespace romns

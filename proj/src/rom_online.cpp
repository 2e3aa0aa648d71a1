#include "romns/rom_online.hpp"

#include <chrono>
#include <cmath>

#include "romns/fom.hpp"

namespace romns {

namespace {

void check_table(const StageTable& table, Index dim, double t_end, Index steps) {
  if (steps < 1) throw InvalidArgument("ROM integration: steps must be positive");
  if (table.steps() != steps) throw DimensionError("ROM integration: stage table has a different step count");
  if (table.dim() != dim) throw DimensionError("ROM integration: stage table has a different boundary rank");
  const double t_table = table.t0() + static_cast<double>(steps) * table.dt();
  if (std::abs(t_table - t_end) > 1e-9 * std::max(1.0, std::abs(t_end))) {
    throw InvalidArgument("ROM integration: t_end does not match the stage table");
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

Vector rom_initial_condition(const RomOperators& rom, const Vector& omega, const Vector& v0) {
  if (v0.size() != rom.phi_hom.rows()) throw DimensionError("rom_initial_condition: size mismatch");
  return rom.phi_hom.transpose() * omega.cwiseProduct(v0);
}

RomTrajectory rom_integrate(const RomOperators& rom, const StageTable& a_bc, const Vector& a0,
                            double t_end, Index steps) {
  check_table(a_bc, rom.r_bc(), t_end, steps);
  if (a0.size() != rom.r_hom()) throw DimensionError("rom_integrate: initial coefficient size mismatch");
  RomTrajectory traj;
  traj.times.resize(static_cast<std::size_t>(steps) + 1);
  traj.a.resize(rom.r_hom(), steps + 1);
  traj.a_bc.resize(rom.r_bc(), steps + 1);
  const double dt = a_bc.dt();
  const auto start = std::chrono::steady_clock::now();
  Vector a = a0;
  Vector k[4];
  for (Index n = 0; n < steps; ++n) {
    traj.times[static_cast<std::size_t>(n)] = a_bc.stage_time(n, 0);
    traj.a.col(n) = a;
    traj.a_bc.col(n) = a_bc.value(n, 0);
    for (int i = 0; i < 4; ++i) {
      const Vector ai = i == 0 ? a : Vector(a + (kRk4Nodes[i] * dt) * k[i - 1]);
      k[i] = rom.rhs(ai, a_bc.value(n, i));
    }
    a += (dt / 6.0) * (k[0] + 2.0 * k[1] + 2.0 * k[2] + k[3]);
    if (!a.allFinite()) throw NumericalFailure("rom_integrate: non-finite coefficients at step " + std::to_string(n + 1), n + 1);
  }
  traj.times.back() = a_bc.t0() + static_cast<double>(steps) * dt;
  traj.a.col(steps) = a;
  traj.a_bc.col(steps) = a_bc.value_at(steps);
  traj.seconds = seconds_since(start);
  return traj;
}

Vector vp_initial_condition(const VpRomOperators& vp, const Vector& omega, const Vector& v0,
                            const Vector& a_bc0) {
  if (v0.size() != vp.phi.rows() || a_bc0.size() != vp.r_bc()) {
    throw DimensionError("vp_initial_condition: size mismatch");
  }
  const Vector a_u = vp.phi.transpose() * omega.cwiseProduct(v0);
  if (vp.r_p() == 0) return a_u;
  const Vector defect = vp.d_r * a_u - vp.mass_bc * a_bc0;
  const DenseMatrix ddt = vp.d_r * vp.d_r.transpose();
  return a_u - vp.d_r.transpose() * ddt.ldlt().solve(defect);
}

VpTrajectory vp_rom_integrate(const VpRomOperators& vp, const StageTable& a_bc, const Vector& a0,
                              double t_end, Index steps, VpConstraint constraint) {
  check_table(a_bc, vp.r_bc(), t_end, steps);
  if (a0.size() != vp.r_v()) throw DimensionError("vp_rom_integrate: initial coefficient size mismatch");
  VpTrajectory traj;
  traj.times.resize(static_cast<std::size_t>(steps) + 1);
  traj.a.resize(vp.r_v(), steps + 1);
  traj.b.resize(vp.r_p(), steps + 1);
  traj.a_bc.resize(vp.r_bc(), steps + 1);
  const double dt = a_bc.dt();
  const bool has_p = vp.r_p() > 0;

  // Returns (da/dt, b) for a stage whose projected mass rate must equal `target`.
  auto stage = [&](const Vector& ai, const Vector& ci, const Vector& target, Vector& b) {
    Vector f = vp.model.eval(ai, ci);
    if (!has_p) return f;
    b = vp.l_r_lu.solve(Vector(vp.d_r * f - target));
    f.noalias() -= vp.g_r * b;
    return f;
  };

  const auto start = std::chrono::steady_clock::now();
  Vector a = a0;
  Vector k[4];
  Vector b(vp.r_p());
  for (Index n = 0; n < steps; ++n) {
    traj.times[static_cast<std::size_t>(n)] = a_bc.stage_time(n, 0);
    traj.a.col(n) = a;
    traj.a_bc.col(n) = a_bc.value(n, 0);
    const Vector da = has_p ? Vector(vp.d_r * a) : Vector();
    for (int i = 0; i < 4; ++i) {
      const Vector ai = i == 0 ? a : Vector(a + (kRk4Nodes[i] * dt) * k[i - 1]);
      const Vector ci = a_bc.value(n, i);
      Vector target;
      if (has_p) {
        if (constraint == VpConstraint::kDerivative) {
          target = vp.mass_bc * a_bc.rate(n, i);
        } else if (i < 3) {
          const double c_next = kRk4Nodes[i + 1];
          target = (vp.mass_bc * a_bc.value(n, i + 1) - da) / (c_next * dt);
        } else {
          target = 6.0 * (vp.mass_bc * a_bc.value_at(n + 1) - da) / dt -
                   vp.d_r * (k[0] + 2.0 * k[1] + 2.0 * k[2]);
        }
      }
      k[i] = stage(ai, ci, target, b);
      if (i == 0 && has_p) traj.b.col(n) = b;
    }
    a += (dt / 6.0) * (k[0] + 2.0 * k[1] + 2.0 * k[2] + k[3]);
    if (!a.allFinite()) throw NumericalFailure("vp_rom_integrate: non-finite coefficients at step " + std::to_string(n + 1), n + 1);
  }
  traj.times.back() = a_bc.t0() + static_cast<double>(steps) * dt;
  traj.a.col(steps) = a;
  traj.a_bc.col(steps) = a_bc.value_at(steps);
  if (has_p) {
    const Vector target = vp.mass_bc * a_bc.rate_at(steps);
    stage(a, a_bc.value_at(steps), target, b);
    traj.b.col(steps) = b;
  }
  traj.seconds = seconds_since(start);
  return traj;
}

Vector recover_pressure(const OperatorSet& ops, const Vector& v_r, const Vector& y_bc,
                        const Vector& y_bc_rate) {
  return fom_rhs(ops, v_r, y_bc, y_bc_rate).p;
}

Vector recover_pressure(const OperatorSet& ops, const BcReduction& bc_red, const Vector& v_r, Index j) {
  const StageTable& t = bc_red.coefficients;
  return recover_pressure(ops, v_r, bc_red.phi * t.value_at(j), bc_red.phi * t.rate_at(j));
}

EnergySeries energy_series(const RomOperators& rom, const Vector& omega, const RomTrajectory& traj) {
  EnergySeries e;
  e.times = traj.times;
  const DenseMatrix cross_map = rom.phi_hom.transpose() * omega.asDiagonal() * rom.f_inhom;
  const DenseMatrix gram = rom.f_inhom.transpose() * omega.asDiagonal() * rom.f_inhom;
  for (Index j = 0; j < traj.a.cols(); ++j) {
    const Vector a = traj.a.col(j);
    const Vector c = traj.a_bc.col(j);
    const double hom = 0.5 * a.squaredNorm();
    const double inhom = 0.5 * c.dot(gram * c);
    e.hom.push_back(hom);
    e.inhom.push_back(inhom);
    e.kinetic.push_back(hom + inhom);
    e.cross.push_back(a.dot(cross_map * c));
  }
  return e;
}

}  // namespace romns

#pragma once

#include <vector>

#include "romns/boundary.hpp"
#include "romns/operators.hpp"
#include "romns/rom_offline.hpp"

namespace romns {

struct RomTrajectory {
  std::vector<double> times;
  DenseMatrix a;     // R_hom x (steps+1)
  DenseMatrix a_bc;  // R_bc x (steps+1)
  double seconds = 0.0;  // wall clock of the time loop

  Index steps() const { return a.cols() - 1; }
};

/// a_hom(0) = Phi_hom^T Omega V(0).
Vector rom_initial_condition(const RomOperators& rom, const Vector& omega, const Vector& v0);

/// Classical RK4 on da/dt = rom.rhs(a, a_bc(t)) with a_bc read from the
/// stage table; t_end and steps must match the table.
RomTrajectory rom_integrate(const RomOperators& rom, const StageTable& a_bc, const Vector& a0,
                            double t_end, Index steps);

/// How the velocity-pressure ROM imposes the projected mass equation.
enum class VpConstraint {
  /// Each stage derivative is chosen so the next stage value (and the step
  /// end) satisfies Psi^T M Phi a = Psi^T y~_M at its own time.
  kStageConsistent,
  /// Uses the analytic rate Psi^T dy~_M/dt at every stage.
  kDerivative,
};

struct VpTrajectory {
  std::vector<double> times;
  DenseMatrix a;     // R_V x (steps+1)
  DenseMatrix b;     // R_p x (steps+1), pressure coefficients at stage 1 (last column: final time)
  DenseMatrix a_bc;  // R_bc x (steps+1)
  double seconds = 0.0;
};

/// Minimizes ||Phi a - V0||_Omega subject to Psi^T M Phi a = Psi^T F_M Phi_bc a_bc0.
Vector vp_initial_condition(const VpRomOperators& vp, const Vector& omega, const Vector& v0,
                            const Vector& a_bc0);

VpTrajectory vp_rom_integrate(const VpRomOperators& vp, const StageTable& a_bc, const Vector& a0,
                              double t_end, Index steps,
                              VpConstraint constraint = VpConstraint::kStageConsistent);

/// p solving L p = -dy_M/dt + M Omega^-1 F^CD(V, y).
Vector recover_pressure(const OperatorSet& ops, const Vector& v_r, const Vector& y_bc,
                        const Vector& y_bc_rate);

/// Pressure of a ROM state at t^j with the reduced trace and its tabulated rate.
Vector recover_pressure(const OperatorSet& ops, const BcReduction& bc_red, const Vector& v_r, Index j);

struct EnergySeries {
  std::vector<double> times;
  std::vector<double> kinetic;  // K_r = hom + inhom
  std::vector<double> hom;      // 1/2 ||a_hom||^2
  std::vector<double> inhom;    // 1/2 ||F_inhom a_bc||_Omega^2
  std::vector<double> cross;    // a_hom^T Phi_hom^T Omega F_inhom a_bc
};

EnergySeries energy_series(const RomOperators& rom, const Vector& omega, const RomTrajectory& traj);

}  // namespace romns

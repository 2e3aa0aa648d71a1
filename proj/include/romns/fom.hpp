#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "romns/boundary.hpp"
#include "romns/operators.hpp"

namespace romns {

struct FomState {
  double t = 0.0;
  Vector v;
  Vector p;
};

/// Velocity (and optionally pressure) snapshots at t^0..t^steps.
struct SnapshotSet {
  std::vector<double> times;
  DenseMatrix velocity;  // N_V x (steps+1)
  DenseMatrix pressure;  // N_p x (steps+1), or empty
  std::uint64_t grid_hash = 0;
  std::string bc_kind;
  double nu = 0.0;
  double dt = 0.0;
  double max_divergence_defect = 0.0;  // max_j ||M V^j - y_M(t^j)|| / tol_div(t^j)

  Index count() const { return velocity.cols(); }
  Index steps() const { return velocity.cols() - 1; }
  bool has_pressure() const { return pressure.cols() == velocity.cols() && pressure.size() > 0; }
};

struct FomRhs {
  Vector dvdt;
  Vector p;
};

/// tol_div = 1e-8 max(1, ||y_M||).
double divergence_tolerance(const Vector& y_m);

/// Pressure from L p = -dy_M/dt + M Omega^-1 F and dV/dt = Omega^-1 (F - G p).
FomRhs fom_rhs(const OperatorSet& ops, const Vector& v, const Vector& y_bc, const Vector& y_bc_rate);

FomRhs fom_rhs(const OperatorSet& ops, const BoundaryModel& bc, const Vector& v, double t,
               Limit limit = Limit::kRight);

/// V^0 is the lifting of the exact trace at t0; p^0 follows from one Poisson
/// solve.
FomState initial_condition(const OperatorSet& ops, const BoundaryModel& bc, double t0 = 0.0);

struct FomOptions {
  double t0 = 0.0;
  bool store_pressure = true;
  /// Starting velocity; the lifting of y_bc(t0) when empty.
  Vector v0;
  /// Called after every accepted step with (step, state).
  std::function<void(Index, const FomState&)> on_step;
};

/// Classical RK4 with a pressure Poisson solve at every stage.
SnapshotSet fom_integrate(const OperatorSet& ops, const BoundaryModel& bc, double t_end,
                          Index steps, const FomOptions& options = {});

}  // namespace romns

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "romns/grid.hpp"
#include "romns/linalg.hpp"

namespace romns {

enum class BoundaryKind { kVaryingAngle, kMovingMode, kCustomTable, kConstant, kFunction };

std::string to_string(BoundaryKind kind);

/// Which one-sided limit to take where the trace has a kink in time.
enum class Limit { kLeft, kRight };

/// Time-parameterized boundary trace y_bc(t) with its time derivative.
/// Inflow models fill the normal and tangential slots of the left side and
/// leave every other Dirichlet slot (no-slip walls) at zero.
class BoundaryModel {
 public:
  virtual ~BoundaryModel() = default;

  virtual BoundaryKind kind() const = 0;
  virtual Index size() const = 0;
  virtual Vector trace(double t) const = 0;
  virtual Vector rate(double t, Limit limit = Limit::kRight) const = 0;
};

using BoundaryModelPtr = std::shared_ptr<const BoundaryModel>;

/// alpha(y, t) = (pi/6) sin(y - t/2), u_b = cos(alpha), v_b = sin(alpha).
BoundaryModelPtr make_varying_angle(const StaggeredGrid& grid);

/// Parabolic profile u_par(y + (t - t_end)/(t_end - t_start) (y_max - y_min))
/// for t_start <= t <= t_end, zero outside. The profile starts entering at the
/// bottom at t_start and fills the inflow exactly at t_end.
BoundaryModelPtr make_moving_mode(const StaggeredGrid& grid, double t_start = 0.0,
                                  double t_end = 20.0);

/// Piecewise-linear table; times strictly increasing, one column per time.
/// Values are held constant beyond either end.
BoundaryModelPtr make_custom_table(std::vector<double> times, DenseMatrix values);

/// Reads `t,y0,y1,...` rows (with a header) from a CSV file.
BoundaryModelPtr load_custom_table(const std::string& path, Index n_bc);

BoundaryModelPtr make_constant(Vector value);

BoundaryModelPtr make_function(Index n, std::function<Vector(double)> trace,
                               std::function<Vector(double, Limit)> rate);

/// Samples u_b(y) and v_b(y) on the left-side slots of the grid.
Vector sample_inflow(const StaggeredGrid& grid, const std::function<double(double)>& u_b,
                     const std::function<double(double)>& v_b);

void varying_angle_values(double y, double t, double& u, double& v);
double moving_mode_value(double y, double t, double y_min, double y_max, double t_start,
                         double t_end);

Vector varying_angle_trace(const StaggeredGrid& grid, double t);
Vector moving_mode_trace(const StaggeredGrid& grid, double t, double t_start, double t_end);

/// Classical RK4 nodes.
inline constexpr double kRk4Nodes[4] = {0.0, 0.5, 0.5, 1.0};

/// Values and rates of a coefficient vector at every RK4 stage time of a
/// uniform time grid t^n = t0 + n dt, n = 0..steps. Stages 0 to 2 take the
/// right limit of the rate, stage 3 and the final time the left limit, so
/// traces with kinks on step boundaries are integrated without loss of order.
class StageTable {
 public:
  StageTable() = default;
  StageTable(double t0, double dt, Index steps, DenseMatrix values, DenseMatrix rates);

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  Index steps() const { return steps_; }
  Index dim() const { return values_.rows(); }

  double stage_time(Index step, int stage) const { return t0_ + (step + kRk4Nodes[stage]) * dt_; }

  Vector value(Index step, int stage) const { return values_.col(column(step, stage)); }
  Vector rate(Index step, int stage) const { return rates_.col(column(step, stage)); }

  /// Value at t^j, j = 0..steps.
  Vector value_at(Index j) const;
  /// Rate at t^j: right limit for j < steps, left limit at the final time.
  Vector rate_at(Index j) const;

  const DenseMatrix& values() const { return values_; }
  const DenseMatrix& rates() const { return rates_; }

  /// Tabulates `f(t)` and `df(t, limit)` at all stage times.
  static StageTable tabulate(double t0, double dt, Index steps, Index dim,
                             const std::function<Vector(double)>& f,
                             const std::function<Vector(double, Limit)>& df);

 private:
  Index column(Index step, int stage) const;

  double t0_ = 0.0;
  double dt_ = 0.0;
  Index steps_ = 0;
  // Column 4n + i holds stage i of step n; column 4 steps holds t^steps.
  DenseMatrix values_;
  DenseMatrix rates_;
};

struct BcReduction {
  DenseMatrix phi;          // N_bc x R_bc, orthonormal columns
  Vector singular_values;   // of X_bc, all of them
  Index requested_rank = 0;
  Index numerical_rank = 0;
  std::string warning;      // non-empty when the request was truncated
  StageTable coefficients;  // a_bc and da_bc/dt at stage times

  Index rank() const { return phi.cols(); }
  Vector reconstruct(const Vector& a) const { return phi * a; }
};

/// Leading left singular vectors of X_bc = [y_bc(t^0) ... y_bc(t^steps)] and
/// the coefficient tables a_bc = phi^T y_bc at every RK4 stage time.
/// r_bc < 0 requests the numerical rank.
BcReduction reduce_bc(const BoundaryModel& model, double t0, double dt, Index steps,
                      Index r_bc);

/// Table of the exact trace itself at all stage times.
StageTable exact_trace_table(const BoundaryModel& model, double t0, double dt, Index steps);

}  // namespace romns

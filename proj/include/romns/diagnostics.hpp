#pragma once

#include <functional>
#include <string>
#include <vector>

#include "romns/boundary.hpp"
#include "romns/fom.hpp"
#include "romns/operators.hpp"
#include "romns/rom_online.hpp"

namespace romns {

struct MetricSeries {
  std::string name;
  std::vector<double> times;
  std::vector<double> values;
  double normalization = 1.0;

  double max() const;
  double mean() const;
};

/// Velocity field at time index j.
using VelocityAt = std::function<Vector(Index)>;

VelocityAt fom_velocity(const SnapshotSet& snaps);
VelocityAt rom_velocity(const RomOperators& rom, const RomTrajectory& traj);
VelocityAt vp_velocity(const VpRomOperators& vp, const VpTrajectory& traj);

double omega_norm(const Vector& omega, const Vector& v);

/// ||V_h^j - V_r^j||_Omega / mean_j ||V_h^j||_Omega.
MetricSeries velocity_error(const SnapshotSet& fom, const VelocityAt& rom, const Vector& omega);

/// ||M V_r^j - F_M y_bc(t^j)||_2 against the exact trace.
MetricSeries mass_violation(const OperatorSet& ops, const VelocityAt& rom,
                            const std::vector<double>& times, const BoundaryModel& bc);

/// K = 1/2 ||V||_Omega^2 at every snapshot.
std::vector<double> kinetic_energy(const SnapshotSet& snaps, const Vector& omega);

/// |K_h^j - K_r^j| / mean_j K_h^j.
MetricSeries kinetic_energy_error(const std::vector<double>& times, const std::vector<double>& k_fom,
                                  const std::vector<double>& k_rom);

/// ||V_vo^j - V_vp^j||_Omega.
MetricSeries equivalence_error(const VelocityAt& vo, const VelocityAt& vp,
                               const std::vector<double>& times, const Vector& omega);

/// Worst mismatch, over consecutive step pairs, between K(t^{n+2}) - K(t^n)
/// and Simpson's rule applied to dK/dt = V^T F + y_M^T p.
double energy_balance_residual(const std::vector<double>& times, const std::vector<double>& kinetic,
                               const std::vector<double>& rate);

/// dK/dt = V^T F^CD(V, y) + (F_M y)^T p for each stored state.
std::vector<double> energy_rate(const OperatorSet& ops, const VelocityAt& v,
                                const std::vector<Vector>& y_bc, const std::vector<Vector>& p);

struct TimingRow {
  Index r = 0;
  double t_fom = 0.0;
  double t_offline = 0.0;
  double t_online = 0.0;
  double speedup() const { return t_online > 0.0 ? t_fom / t_online : 0.0; }
};

/// CSV with header `R,t_fom,t_offline,t_online,speedup`.
std::string timing_report(const std::vector<TimingRow>& rows);

/// Shortest round-trip decimal representation, '.' as decimal separator.
std::string format_double(double v);

/// CSV `t,value` of one series.
std::string metric_csv(const MetricSeries& series);

/// CSV `t,<name1>,<name2>,...` of several series on the same time grid.
std::string metrics_csv(const std::vector<MetricSeries>& series);

}  // namespace romns

#include "romns/diagnostics.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace romns {

double MetricSeries::max() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

double MetricSeries::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

VelocityAt fom_velocity(const SnapshotSet& snaps) {
  return [&snaps](Index j) -> Vector { return snaps.velocity.col(j); };
}

VelocityAt rom_velocity(const RomOperators& rom, const RomTrajectory& traj) {
  return [&rom, &traj](Index j) -> Vector { return rom.reconstruct(traj.a.col(j), traj.a_bc.col(j)); };
}

VelocityAt vp_velocity(const VpRomOperators& vp, const VpTrajectory& traj) {
  return [&vp, &traj](Index j) -> Vector { return vp.phi * traj.a.col(j); };
}

double omega_norm(const Vector& omega, const Vector& v) {
  return std::sqrt(v.dot(omega.cwiseProduct(v)));
}

MetricSeries velocity_error(const SnapshotSet& fom, const VelocityAt& rom, const Vector& omega) {
  MetricSeries s;
  s.name = "velocity_error";
  s.times = fom.times;
  double total = 0.0;
  for (Index j = 0; j < fom.count(); ++j) {
    const Vector vh = fom.velocity.col(j);
    total += omega_norm(omega, vh);
    s.values.push_back(omega_norm(omega, vh - rom(j)));
  }
  s.normalization = total / static_cast<double>(fom.count());
  if (!(s.normalization > 0.0)) throw InvalidArgument("velocity_error: FOM velocity vanishes identically");
  for (double& v : s.values) v /= s.normalization;
  return s;
}

MetricSeries mass_violation(const OperatorSet& ops, const VelocityAt& rom,
                            const std::vector<double>& times, const BoundaryModel& bc) {
  MetricSeries s;
  s.name = "mass_violation";
  s.times = times;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const Vector r = ops.m * rom(static_cast<Index>(j)) - ops.fm * bc.trace(times[j]);
    s.values.push_back(r.norm());
  }
  return s;
}

std::vector<double> kinetic_energy(const SnapshotSet& snaps, const Vector& omega) {
  std::vector<double> k;
  k.reserve(static_cast<std::size_t>(snaps.count()));
  for (Index j = 0; j < snaps.count(); ++j) {
    const Vector v = snaps.velocity.col(j);
    k.push_back(0.5 * v.dot(omega.cwiseProduct(v)));
  }
  return k;
}

MetricSeries kinetic_energy_error(const std::vector<double>& times, const std::vector<double>& k_fom,
                                  const std::vector<double>& k_rom) {
  if (k_fom.size() != times.size() || k_rom.size() != times.size()) {
    throw DimensionError("kinetic_energy_error: time-grid mismatch");
  }
  MetricSeries s;
  s.name = "kinetic_energy_error";
  s.times = times;
  s.normalization = std::accumulate(k_fom.begin(), k_fom.end(), 0.0) / static_cast<double>(k_fom.size());
  if (!(s.normalization > 0.0)) throw InvalidArgument("kinetic_energy_error: FOM energy vanishes identically");
  for (std::size_t j = 0; j < times.size(); ++j) s.values.push_back(std::abs(k_fom[j] - k_rom[j]) / s.normalization);
  return s;
}

MetricSeries equivalence_error(const VelocityAt& vo, const VelocityAt& vp,
                               const std::vector<double>& times, const Vector& omega) {
  MetricSeries s;
  s.name = "equivalence_error";
  s.times = times;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const auto idx = static_cast<Index>(j);
    s.values.push_back(omega_norm(omega, vo(idx) - vp(idx)));
  }
  return s;
}

double energy_balance_residual(const std::vector<double>& times, const std::vector<double>& kinetic,
                               const std::vector<double>& rate) {
  if (kinetic.size() != times.size() || rate.size() != times.size() || times.size() < 3) {
    throw DimensionError("energy_balance_residual: need matching series of at least three points");
  }
  double worst = 0.0;
  for (std::size_t n = 0; n + 2 < times.size(); n += 2) {
    const double h = times[n + 2] - times[n];
    const double quad = h / 6.0 * (rate[n] + 4.0 * rate[n + 1] + rate[n + 2]);
    worst = std::max(worst, std::abs(kinetic[n + 2] - kinetic[n] - quad));
  }
  return worst;
}

std::vector<double> energy_rate(const OperatorSet& ops, const VelocityAt& v,
                                const std::vector<Vector>& y_bc, const std::vector<Vector>& p) {
  if (y_bc.size() != p.size()) throw DimensionError("energy_rate: series length mismatch");
  std::vector<double> out;
  out.reserve(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    const Vector vj = v(static_cast<Index>(j));
    out.push_back(vj.dot(eval_fcd(ops, vj, y_bc[j])) + (ops.fm * y_bc[j]).dot(p[j]));
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string timing_report(const std::vector<TimingRow>& rows) {
  std::ostringstream s;
  s << "R,t_fom,t_offline,t_online,speedup\n";
  for (const auto& r : rows) {
    s << r.r << ',' << format_double(r.t_fom) << ',' << format_double(r.t_offline) << ','
      << format_double(r.t_online) << ',' << format_double(r.speedup()) << '\n';
  }
  return s.str();
}

std::string metric_csv(const MetricSeries& series) { return metrics_csv({series}); }

std::string metrics_csv(const std::vector<MetricSeries>& series) {
  if (series.empty()) return "t\n";
  std::string out = "t";
  for (const auto& s : series) {
    if (s.values.size() != series.front().times.size()) throw DimensionError("metrics_csv: series lengths differ");
    out += ',' + s.name;
  }
  out += '\n';
  for (std::size_t j = 0; j < series.front().times.size(); ++j) {
    out += format_double(series.front().times[j]);
    for (const auto& s : series) out += ',' + format_double(s.values[j]);
    out += '\n';
  }
  return out;
}

}  // namespace romns

#include <clocale>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "rom_fixture.hpp"
#include "romns/diagnostics.hpp"
#include "romns/error.hpp"

using namespace romns;

namespace {

const fixture::Channel& channel() {
  static const fixture::Channel ch = fixture::make_channel(30, 12, 40, 2.0, 8, 5);
  return ch;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("velocity error normalization") {
  const auto& ch = channel();
  const MetricSeries same = velocity_error(ch.fom, fom_velocity(ch.fom), ch.ops.omega);
  CHECK(same.max() == 0.0);
  CHECK(same.times == ch.fom.times);

  // Rotating a fixed field keeps its norm constant, so V_r = 0 gives exactly 1.
  SnapshotSet flat = ch.fom;
  for (Index j = 0; j < flat.count(); ++j) flat.velocity.col(j) = ch.fom.velocity.col(0) * (j % 2 ? -1.0 : 1.0);
  const Index n = flat.count();
  const MetricSeries ones = velocity_error(flat, [&](Index) { return Vector(Vector::Zero(ch.ops.n_vel())); }, ch.ops.omega);
  for (double v : ones.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(static_cast<Index>(ones.values.size()) == n);

  SnapshotSet empty = ch.fom;
  empty.velocity.setZero();
  CHECK_THROWS_AS(velocity_error(empty, fom_velocity(empty), ch.ops.omega), InvalidArgument);
}

TEST_CASE("velocity error against an explicit loop") {
  const auto& ch = channel();
  const RomOperators rom = build_rom_operators(ch.ops, ch.pod.phi, ch.lifting);
  const Vector a0 = rom_initial_condition(rom, ch.ops.omega, ch.fom.velocity.col(0));
  const RomTrajectory traj = rom_integrate(rom, ch.red.coefficients, a0, ch.t_end, ch.steps);
  const MetricSeries err = velocity_error(ch.fom, rom_velocity(rom, traj), ch.ops.omega);
  double avg = 0.0;
  for (Index j = 0; j <= ch.steps; ++j) {
    const Vector& w = ch.ops.omega;
    avg += std::sqrt((ch.fom.velocity.col(j).array().square() * w.array()).sum());
  }
  avg /= static_cast<double>(ch.steps + 1);
  CHECK(err.normalization == doctest::Approx(avg).epsilon(1e-13));
  const Index j = 11;
  const Vector d = ch.fom.velocity.col(j) - (rom.phi_hom * traj.a.col(j) + rom.f_inhom * traj.a_bc.col(j));
  const double expected = std::sqrt((d.array().square() * ch.ops.omega.array()).sum()) / avg;
  CHECK(err.values[static_cast<std::size_t>(j)] == doctest::Approx(expected).epsilon(1e-10));

  SUBCASE("recomputation is bit-identical") {
    const MetricSeries again = velocity_error(ch.fom, rom_velocity(rom, traj), ch.ops.omega);
    CHECK(again.values == err.values);
    CHECK(metric_csv(again) == metric_csv(err));
  }
}

TEST_CASE("mass violation is exact when the trace is reproduced exactly") {
  const auto& ch = channel();
  // Sampled trace as a custom table: the boundary reduction at numerical rank
  // then reproduces it at every snapshot time.
  DenseMatrix values(ch.ops.n_bc(), ch.steps + 1);
  for (Index j = 0; j <= ch.steps; ++j) values.col(j) = ch.bc->trace(ch.fom.times[static_cast<std::size_t>(j)]);
  const BoundaryModelPtr table = make_custom_table(ch.fom.times, values);
  const BcReduction red = reduce_bc(*table, 0.0, ch.t_end / static_cast<double>(ch.steps), ch.steps, -1);
  const LiftingOperator lift = build_lifting(ch.ops, red);
  for (Index r : {Index(2), Index(6)}) {
    CAPTURE(r);
    const RomOperators rom = build_rom_operators(ch.ops, ch.pod.phi.leftCols(r), lift);
    const Vector a0 = rom_initial_condition(rom, ch.ops.omega, ch.fom.velocity.col(0));
    const RomTrajectory traj = rom_integrate(rom, red.coefficients, a0, ch.t_end, ch.steps);
    const MetricSeries mv = mass_violation(ch.ops, rom_velocity(rom, traj), traj.times, *table);
    CHECK(mv.max() <= 1e-9);
  }
  // The truncated reduction of the fixture does not reproduce the trace.
  const RomOperators rom = build_rom_operators(ch.ops, ch.pod.phi, ch.lifting);
  const Vector a0 = rom_initial_condition(rom, ch.ops.omega, ch.fom.velocity.col(0));
  const RomTrajectory traj = rom_integrate(rom, ch.red.coefficients, a0, ch.t_end, ch.steps);
  const MetricSeries mv = mass_violation(ch.ops, rom_velocity(rom, traj), traj.times, *ch.bc);
  const Vector y_m = ch.ops.fm * ch.bc->trace(traj.times[5]);
  const Vector v5 = rom.reconstruct(traj.a.col(5), traj.a_bc.col(5));
  CHECK(mv.values[5] == doctest::Approx((ch.ops.m * v5 - y_m).norm()).epsilon(1e-14));
  CHECK(mv.max() > 1e-9);
}

TEST_CASE("kinetic energy error") {
  const std::vector<double> t{0.0, 1.0, 2.0};
  const MetricSeries e = kinetic_energy_error(t, {1.0, 2.0, 3.0}, {1.0, 1.0, 4.0});
  CHECK(e.normalization == 2.0);
  CHECK(e.values == std::vector<double>{0.0, 0.5, 0.5});
  CHECK_THROWS_AS(kinetic_energy_error(t, {1.0, 2.0}, {1.0, 2.0, 3.0}), DimensionError);
  CHECK_THROWS_AS(kinetic_energy_error(t, {0.0, 0.0, 0.0}, {1.0, 2.0, 3.0}), InvalidArgument);

  const auto& ch = channel();
  const std::vector<double> k = kinetic_energy(ch.fom, ch.ops.omega);
  const Vector v = ch.fom.velocity.col(9);
  CHECK(k[9] == doctest::Approx(0.5 * v.dot(ch.ops.omega.asDiagonal() * v)).epsilon(1e-14));
}

TEST_CASE("equivalence error of identical trajectories is zero") {
  const auto& ch = channel();
  const MetricSeries e = equivalence_error(fom_velocity(ch.fom), fom_velocity(ch.fom), ch.fom.times, ch.ops.omega);
  CHECK(e.max() == 0.0);
  CHECK(e.mean() == 0.0);
  MetricSeries s;
  s.values = {1.0, 3.0, 2.0};
  CHECK(s.max() == 3.0);
  CHECK(s.mean() == 2.0);
}

TEST_CASE("energy balance residual") {
  // K = t^3 with exact rate 3 t^2: Simpson is exact for cubics.
  std::vector<double> t, k, r;
  for (int i = 0; i <= 10; ++i) {
    const double ti = 0.1 * i;
    t.push_back(ti);
    k.push_back(ti * ti * ti);
    r.push_back(3.0 * ti * ti);
  }
  CHECK(energy_balance_residual(t, k, r) <= 1e-15);
  r[5] += 1.0;
  CHECK(energy_balance_residual(t, k, r) == doctest::Approx(0.2 * 4.0 / 6.0));
  CHECK_THROWS_AS(energy_balance_residual({0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}), DimensionError);
}

TEST_CASE("number formatting and CSV layout") {
  std::setlocale(LC_ALL, "de_DE.UTF-8");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.5e-12) == "1.5e-12");
  CHECK(format_double(-2.0) == "-2");
  const double third = 1.0 / 3.0;
  CHECK(std::stod(format_double(third)) == third);

  MetricSeries a{"velocity_error", {0.0, 0.5}, {1.25, 0.0}, 1.0};
  MetricSeries b{"mass_violation", {0.0, 0.5}, {1e-13, 2.5}, 1.0};
  const auto rows = lines(metrics_csv({a, b}));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "t,velocity_error,mass_violation");
  CHECK(rows[1] == "0,1.25,1e-13");
  CHECK(rows[2] == "0.5,0,2.5");
  CHECK(lines(metric_csv(a))[0] == "t,velocity_error");
  b.values.pop_back();
  CHECK_THROWS_AS(metrics_csv({a, b}), DimensionError);
  std::setlocale(LC_ALL, "C");
}

TEST_CASE("timing report") {
  const std::string report = timing_report({{10, 100.0, 3.0, 0.5}, {20, 100.0, 9.0, 2.0}, {40, 100.0, 1.0, 0.0}});
  const auto rows = lines(report);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "R,t_fom,t_offline,t_online,speedup");
  CHECK(rows[1] == "10,100,3,0.5,200");
  CHECK(rows[2] == "20,100,9,2,50");
  CHECK(rows[3] == "40,100,1,0,0");
}

#include <random>

#include "doctest.h"
#include "fields.hpp"
#include "oracles.hpp"
#include "romns/diagnostics.hpp"
#include "romns/error.hpp"
#include "romns/fom.hpp"
#include "romns/lifting.hpp"

using namespace romns;

namespace {

ForcingSpec no_forcing() {
  ForcingSpec f;
  f.magnitude = 0.0;
  return f;
}

StaggeredGrid channel(int nx, int ny) {
  return build_grid(nx, ny, {0.0, 10.0}, {-2.0, 2.0}, BcSpec::inflow_outflow(1e-2));
}

// V with M V = F_M y: the lifting of y plus a random divergence-free part.
Vector consistent_state(const OperatorSet& ops, const Vector& y, std::mt19937_64& rng) {
  const DenseMatrix raw = oracle::random_vector(ops.n_vel(), rng);
  return exact_lifting(ops, y) + project_divergence_free(ops, raw).col(0);
}

}  // namespace

TEST_CASE("initial conditions of the built-in cases") {
  const StaggeredGrid g = channel(200, 80);
  const OperatorSet ops = assemble_operators(g, ForcingSpec{});
  SUBCASE("moving mode starts at rest") {
    const FomState s = initial_condition(ops, *make_moving_mode(g));
    CHECK(s.v.lpNorm<Eigen::Infinity>() == 0.0);
  }
  SUBCASE("varying angle starts from its lifting") {
    const BoundaryModelPtr bc = make_varying_angle(g);
    const FomState s = initial_condition(ops, *bc);
    CHECK(s.v.norm() > 0.0);
    const Vector y_m = ops.fm * bc->trace(0.0);
    CHECK((ops.m * s.v - y_m).norm() <= 1e-10);
  }
}

TEST_CASE("initial condition is orthogonal to divergence-free fields") {
  const StaggeredGrid g = build_grid(5, 5, {0.0, 1.0}, {-0.5, 0.5}, BcSpec::inflow_outflow(1e-2));
  const OperatorSet ops = assemble_operators(g, no_forcing());
  const FomState s = initial_condition(ops, *make_varying_angle(g));
  const DenseMatrix kernel = oracle::null_space(DenseMatrix(ops.m));
  REQUIRE(kernel.cols() == ops.n_vel() - ops.n_p());
  const Vector inner = kernel.transpose() * ops.omega.asDiagonal() * s.v;
  CHECK(inner.lpNorm<Eigen::Infinity>() <= 1e-12 * s.v.norm());
}

TEST_CASE("steady inflow keeps a consistent state consistent") {
  const StaggeredGrid g = channel(40, 16);
  const OperatorSet ops = assemble_operators(g, ForcingSpec{});
  Vector y = Vector::Zero(ops.n_bc());
  for (Index s = 0; s < ops.n_bc(); ++s) y[s] = g.slots()[s].normal ? 1.0 : 0.0;
  std::mt19937_64 rng(1);
  const Vector v = consistent_state(ops, y, rng);
  const FomRhs r = fom_rhs(ops, v, y, Vector::Zero(ops.n_bc()));
  CHECK((ops.m * r.dvdt).norm() <= 1e-10);
}

TEST_CASE("pressure agrees with a dense solve of the Poisson equation") {
  const StaggeredGrid g = build_grid(4, 4, {0.0, 1.0}, {0.0, 1.0}, BcSpec::inflow_outflow(1e-2));
  const OperatorSet ops = assemble_operators(g, ForcingSpec{});
  std::mt19937_64 rng(2);
  const Vector v = oracle::random_vector(ops.n_vel(), rng);
  const Vector y = oracle::random_vector(ops.n_bc(), rng);
  const Vector yr = oracle::random_vector(ops.n_bc(), rng);
  const FomRhs r = fom_rhs(ops, v, y, yr);
  const DenseMatrix m = DenseMatrix(ops.m);
  const DenseMatrix winv = ops.omega.cwiseInverse().asDiagonal();
  const Vector f = eval_fcd(ops, v, y);
  const Vector expected = oracle::gauss_solve(-m * winv * m.transpose(), m * winv * f - DenseMatrix(ops.fm) * yr);
  CHECK((r.p - expected).norm() <= 1e-10 * expected.norm());
}

TEST_CASE("kinetic-energy identity of the semi-discrete equations") {
  const StaggeredGrid g = channel(40, 16);
  const OperatorSet ops = assemble_operators(g, ForcingSpec{});
  const BoundaryModelPtr bc = make_varying_angle(g);
  std::mt19937_64 rng(3);
  for (double t : {0.0, 2.0}) {
    const Vector y = bc->trace(t);
    const Vector v = consistent_state(ops, y, rng);
    const FomRhs r = fom_rhs(ops, v, y, bc->rate(t));
    const double lhs = v.dot(ops.omega.cwiseProduct(r.dvdt));
    const double rhs = v.dot(eval_fcd(ops, v, y)) + (ops.fm * y).dot(r.p);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(lhs), 1.0));
  }
}

TEST_CASE("rest state is a fixed point") {
  const StaggeredGrid g = channel(20, 8);
  const OperatorSet ops = assemble_operators(g, no_forcing());
  const SnapshotSet s = fom_integrate(ops, *make_constant(Vector::Zero(ops.n_bc())), 1.0, 50);
  CHECK(s.count() == 51);
  CHECK(s.velocity.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(s.pressure.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("snapshot set layout and divergence defect") {
  const StaggeredGrid g = channel(50, 20);
  const OperatorSet ops = assemble_operators(g, ForcingSpec{});
  const BoundaryModelPtr bc = make_varying_angle(g);
  const SnapshotSet s = fom_integrate(ops, *bc, 2.0, 40);
  CHECK(s.count() == 41);
  CHECK(s.velocity.rows() == ops.n_vel());
  CHECK(s.pressure.rows() == ops.n_p());
  CHECK(s.times.back() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.dt == doctest::Approx(0.05));
  CHECK(s.bc_kind == "varying-angle");
  CHECK(s.grid_hash == g.hash());
  CHECK(s.max_divergence_defect <= 1.0);
  // Stored pressure belongs to the stored velocity at the same time.
  const Vector p5 = fom_rhs(ops, *bc, s.velocity.col(5), s.times[5], Limit::kRight).p;
  CHECK((p5 - s.pressure.col(5)).norm() <= 1e-12 * p5.norm());
}

TEST_CASE("RK4 self-convergence under step halving") {
  const StaggeredGrid g = channel(50, 20);
  const OperatorSet ops = assemble_operators(g, ForcingSpec{});
  const BoundaryModelPtr bc = make_varying_angle(g);
  FomOptions opt;
  opt.store_pressure = false;
  const double t_end = 2.0;
  const Vector v1 = fom_integrate(ops, *bc, t_end, 20, opt).velocity.rightCols(1);
  const Vector v2 = fom_integrate(ops, *bc, t_end, 40, opt).velocity.rightCols(1);
  const Vector v4 = fom_integrate(ops, *bc, t_end, 80, opt).velocity.rightCols(1);
  const double ratio = (v1 - v2).norm() / (v2 - v4).norm();
  MESSAGE("error-reduction ratio " << ratio);
  CHECK(ratio >= 10.0);
  CHECK(ratio <= 22.0);
}

TEST_CASE("energy balance converges at fifth order per step pair") {
  const StaggeredGrid g = channel(50, 20);
  const OperatorSet ops = assemble_operators(g, ForcingSpec{});
  const BoundaryModelPtr bc = make_varying_angle(g);
  auto residual = [&](Index steps) {
    const SnapshotSet s = fom_integrate(ops, *bc, 1.0, steps);
    std::vector<Vector> y, p;
    for (Index j = 0; j < s.count(); ++j) {
      y.push_back(bc->trace(s.times[static_cast<std::size_t>(j)]));
      p.push_back(s.pressure.col(j));
    }
    const std::vector<double> rate = energy_rate(ops, fom_velocity(s), y, p);
    return energy_balance_residual(s.times, kinetic_energy(s, ops.omega), rate);
  };
  const double r1 = residual(20);
  const double r2 = residual(40);
  MESSAGE("energy residual " << r1 << " -> " << r2);
  CHECK(r1 / r2 >= 15.0);
}

TEST_CASE("inviscid closed box conserves kinetic energy") {
  const StaggeredGrid g = build_grid(16, 16, {0.0, 1.0}, {0.0, 1.0}, BcSpec::closed_box(0.0));
  const OperatorSet ops = assemble_operators(g, no_forcing());
  FomOptions opt;
  opt.v0 = fields::box_vortex(g);
  opt.store_pressure = false;
  REQUIRE((ops.m * opt.v0).norm() <= 1e-13);
  const SnapshotSet s = fom_integrate(ops, *make_constant(Vector::Zero(ops.n_bc())), 0.8, 800, opt);
  const std::vector<double> k = kinetic_energy(s, ops.omega);
  double drift = 0.0;
  for (double kj : k) drift = std::max(drift, std::abs(kj - k[0]) / k[0]);
  MESSAGE("relative energy drift " << drift);
  CHECK(drift <= 1e-6);
  // The flow must actually evolve for the check to mean anything.
  CHECK((s.velocity.rightCols(1) - s.velocity.leftCols(1)).norm() >= 0.1 * s.velocity.col(0).norm());
}

TEST_CASE("blow-up is reported with its step") {
  const StaggeredGrid g = channel(20, 8);
  const OperatorSet ops = assemble_operators(g, ForcingSpec{});
  const BoundaryModelPtr bc = make_constant(Vector::Constant(ops.n_bc(), 50.0));
  try {
    fom_integrate(ops, *bc, 1000.0, 10);
    FAIL("expected a numerical failure");
  } catch (const NumericalFailure& e) {
    CHECK(e.step() >= 1);
    CHECK(e.step() <= 10);
  }
}

TEST_CASE("invalid arguments") {
  const StaggeredGrid g = channel(10, 4);
  const OperatorSet ops = assemble_operators(g, ForcingSpec{});
  CHECK_THROWS_AS(fom_integrate(ops, *make_varying_angle(g), 1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(fom_integrate(ops, *make_constant(Vector::Zero(3)), 1.0, 5), DimensionError);
}

#include "romns/lifting.hpp"

namespace romns {

Vector exact_lifting(const OperatorSet& ops, const Vector& y_bc) {
  if (y_bc.size() != ops.n_bc()) throw DimensionError("exact_lifting: trace size mismatch");
  return exact_lifting(ops, DenseMatrix(y_bc)).col(0);
}

DenseMatrix exact_lifting(const OperatorSet& ops, const DenseMatrix& y_bc) {
  if (y_bc.rows() != ops.n_bc()) throw DimensionError("exact_lifting: trace size mismatch");
  if (y_bc.cols() == 0) return DenseMatrix(ops.n_vel(), 0);
  const DenseMatrix p = ops.poisson->solve(DenseMatrix(ops.fm * y_bc));
  const DenseMatrix g = -(SparseMatrix(ops.m.transpose()) * p);
  return ops.omega.cwiseInverse().asDiagonal() * g;
}

LiftingOperator build_lifting(const OperatorSet& ops, const BcReduction& bc_red) {
  LiftingOperator lift;
  lift.phi_bc = bc_red.phi;
  lift.f_inhom = exact_lifting(ops, bc_red.phi);
  return lift;
}

SnapshotSet homogenize_snapshots(const SnapshotSet& snaps, const OperatorSet& ops,
                                 const BoundaryModel& bc) {
  if (snaps.velocity.rows() != ops.n_vel()) throw DimensionError("homogenize_snapshots: size mismatch");
  DenseMatrix traces(ops.n_bc(), snaps.count());
  for (Index j = 0; j < snaps.count(); ++j) traces.col(j) = bc.trace(snaps.times[static_cast<std::size_t>(j)]);
  SnapshotSet out;
  out.times = snaps.times;
  out.grid_hash = snaps.grid_hash;
  out.bc_kind = snaps.bc_kind;
  out.nu = snaps.nu;
  out.dt = snaps.dt;
  out.velocity = snaps.velocity - exact_lifting(ops, traces);
  for (Index j = 0; j < out.count(); ++j) {
    const double defect = (ops.m * out.velocity.col(j)).norm() / divergence_tolerance(ops.fm * traces.col(j));
    out.max_divergence_defect = std::max(out.max_divergence_defect, defect);
  }
  return out;
}

DenseMatrix project_divergence_free(const OperatorSet& ops, const DenseMatrix& v) {
  if (v.rows() != ops.n_vel()) throw DimensionError("project_divergence_free: size mismatch");
  if (v.cols() == 0) return v;
  const DenseMatrix p = ops.poisson->solve(DenseMatrix(ops.m * v));
  const DenseMatrix g = -(SparseMatrix(ops.m.transpose()) * p);
  return v - ops.omega.cwiseInverse().asDiagonal() * g;
}

}  // namespace romns

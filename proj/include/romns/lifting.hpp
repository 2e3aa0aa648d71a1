#pragma once

#include "romns/boundary.hpp"
#include "romns/fom.hpp"
#include "romns/operators.hpp"

namespace romns {

/// Omega^-1 G L^-1 F_M y: the Omega-orthogonal complement of the
/// divergence-free fields that satisfies M V = F_M y.
Vector exact_lifting(const OperatorSet& ops, const Vector& y_bc);

/// Same map applied to the columns of a trace matrix.
DenseMatrix exact_lifting(const OperatorSet& ops, const DenseMatrix& y_bc);

struct LiftingOperator {
  DenseMatrix f_inhom;  // N_V x R_bc
  DenseMatrix phi_bc;   // N_bc x R_bc

  Index rank() const { return f_inhom.cols(); }
  Vector apply(const Vector& a_bc) const { return f_inhom * a_bc; }
};

LiftingOperator build_lifting(const OperatorSet& ops, const BcReduction& bc_red);

/// V_hom^j = V^j - exact_lifting(y_bc(t^j)); pressure is dropped.
SnapshotSet homogenize_snapshots(const SnapshotSet& snaps, const OperatorSet& ops,
                                 const BoundaryModel& bc);

/// Omega-orthogonal projection onto ker M: V - Omega^-1 G L^-1 M V.
DenseMatrix project_divergence_free(const OperatorSet& ops, const DenseMatrix& v);

}  // namespace romns

#pragma once

#include <memory>

#include "romns/grid.hpp"
#include "romns/linalg.hpp"

namespace romns {

/// Actuator-disk momentum sink: a constant force density `magnitude` acting in
/// -x on the u faces within dx/2 of `x_center` and within `half_height` of
/// `y_center`, integrated over each face's control volume.
struct ForcingSpec {
  double magnitude = 0.25;
  double x_center = 2.0;
  double y_center = 0.0;
  double half_height = 0.5;

  static ForcingSpec none() { return ForcingSpec{0.0, 0.0, 0.0, 0.0}; }
};

/// Applies the (possibly regularized) inverse of the pressure Poisson matrix.
/// When L_h is invertible this is a plain sparse LU of L_h; when it has a
/// constant null space the LU is of L_h bordered by a mean-pressure
/// constraint with one Lagrange multiplier.
class PoissonSolver {
 public:
  PoissonSolver(std::shared_ptr<const SparseLu> lu, Index n, bool regularized)
      : lu_(std::move(lu)), n_(n), regularized_(regularized) {}

  bool regularized() const { return regularized_; }
  Index size() const { return n_; }
  FactorizationKind kind() const { return FactorizationKind::kSparseLu; }

  Vector solve(const Vector& rhs) const;
  DenseMatrix solve(const DenseMatrix& rhs) const;

 private:
  std::shared_ptr<const SparseLu> lu_;
  Index n_;
  bool regularized_;
};

PoissonSolver regularize_poisson(const SparseMatrix& l);

/// Convection bilinear form C(x1, x2) on extended states x = [V; y_bc]:
/// C(x1, x2) = scatter * ((convecting * x1) .* (convected * x2)).
/// Rows of `convecting` carry the face length, so each product is a face
/// momentum flux; `scatter` adds it with the outward-normal sign flipped.
struct ConvectionForm {
  SparseMatrix convecting;  // n_faces x n_ext
  SparseMatrix convected;   // n_faces x n_ext
  SparseMatrix scatter;     // n_vel x n_faces

  Index n_faces() const { return convecting.rows(); }
  Vector apply(const Vector& x1, const Vector& x2) const;
};

/// All assembled full-order operators. G_h is never stored: it is -M_h^T by
/// construction, see gradient() and apply_gradient().
struct OperatorSet {
  StaggeredGrid grid;
  Vector omega;               // diagonal of Omega_h
  SparseMatrix m;             // N_p x N_V divergence
  SparseMatrix fm;            // N_p x N_bc
  SparseMatrix l;             // N_p x N_p, M Omega^-1 G
  std::shared_ptr<const PoissonSolver> poisson;
  Vector forcing;             // f
  SparseMatrix diffusion;     // D_h, N_V x N_V
  SparseMatrix diffusion_bc;  // d_bc, N_V x N_bc
  Vector boundary_const;      // d_0
  ConvectionForm convection;

  Index n_vel() const { return grid.n_vel(); }
  Index n_p() const { return grid.n_p(); }
  Index n_bc() const { return grid.n_bc(); }

  SparseMatrix gradient() const;
  Vector apply_gradient(const Vector& p) const;
  /// [V; y]
  Vector extend(const Vector& v, const Vector& y) const;
};

OperatorSet assemble_operators(const StaggeredGrid& grid, const ForcingSpec& forcing);

/// F_h^CD(V, y) = f + D_h V + d_bc y + d_0 + C(V+y, V+y).
Vector eval_fcd(const OperatorSet& ops, const Vector& v, const Vector& y);

/// Linear and constant part only: f + D_h V + d_bc y + d_0.
Vector eval_affine(const OperatorSet& ops, const Vector& v, const Vector& y);

}  // namespace romns

#pragma once

// Linear-algebra vocabulary shared by every module: compressed-column sparse
// matrices, dense column-major matrices, and the factorizations built on them.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <memory>
#include <vector>

#include "romns/error.hpp"

namespace romns {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using Triplet = Eigen::Triplet<double>;

/// Singular values at or below this fraction of the largest are treated as zero.
inline constexpr double kRankTolerance = 1e-10;

enum class FactorizationKind { kSparseLu, kDenseLu, kQr };

/// LU factorization of a square sparse matrix (COLAMD ordering).
class SparseLu {
 public:
  explicit SparseLu(const SparseMatrix& a);

  SparseLu(const SparseLu&) = delete;
  SparseLu& operator=(const SparseLu&) = delete;
  SparseLu(SparseLu&&) noexcept = default;
  SparseLu& operator=(SparseLu&&) noexcept = default;

  FactorizationKind kind() const noexcept { return FactorizationKind::kSparseLu; }
  Index size() const noexcept { return n_; }

  Vector solve(const Vector& b) const;
  DenseMatrix solve(const DenseMatrix& b) const;

 private:
  Index n_ = 0;
  // SparseLU::solve is logically const but not declared so in Eigen.
  std::unique_ptr<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>> lu_;
};

/// Partial-pivoting LU of a small dense matrix with a condition estimate.
class DenseLu {
 public:
  explicit DenseLu(const DenseMatrix& a);

  FactorizationKind kind() const noexcept { return FactorizationKind::kDenseLu; }
  Index size() const noexcept { return lu_.rows(); }
  double reciprocal_condition() const noexcept { return rcond_; }

  Vector solve(const Vector& b) const { return lu_.solve(b); }
  DenseMatrix solve(const DenseMatrix& b) const { return lu_.solve(b); }

 private:
  Eigen::PartialPivLU<DenseMatrix> lu_;
  double rcond_ = 0.0;
};

SparseLu sparse_lu(const SparseMatrix& a);

struct SvdResult {
  DenseMatrix u;   // rows x k, orthonormal columns
  Vector s;        // k values, non-increasing
  DenseMatrix vt;  // k x cols, orthonormal rows
};

/// Thin SVD. Tall inputs go through a Householder QR first so that small
/// singular values keep absolute accuracy eps * s_max.
/// `max_rank` limits the number of returned left vectors (all singular
/// values are always returned).
SvdResult thin_svd(const DenseMatrix& x, Index max_rank = -1);

/// Singular values only.
Vector singular_values(const DenseMatrix& x);

/// W-orthonormal basis of the column space of `a`, with `weight` the diagonal
/// of W. Columns whose pivoted-QR diagonal falls below kRankTolerance relative
/// to the largest are dropped.
DenseMatrix qr_orthonormalize(const DenseMatrix& a, const Vector& weight);

/// Number of singular values strictly above `rel_tol * s[0]`.
Index numerical_rank(const Vector& s, double rel_tol = kRankTolerance);

double max_abs(const SparseMatrix& a);

/// Max-norm of the difference of two sparse matrices of equal shape.
double max_abs_difference(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace romns

#pragma once

#include <cstdint>
#include <string>

#include "romns/linalg.hpp"
#include "romns/operators.hpp"

namespace romns {

/// Omega-orthonormal POD modes of a snapshot matrix.
struct PodBasis {
  DenseMatrix phi;          // N_V x R
  Vector singular_values;   // all singular values of Omega^{1/2} X
  Vector weight;            // diagonal of Omega
  Index numerical_rank = 0;
  std::string warning;

  Index rank() const { return phi.cols(); }
  /// The leading r modes; r may not exceed rank().
  PodBasis truncated(Index r) const;
  /// Omega-norm reconstruction error predicted by the discarded singular values.
  double tail_energy(Index r) const;
};

/// Leading r left singular vectors of Omega^{1/2} X scaled by Omega^{-1/2}.
/// r < 0 selects the numerical rank; larger requests are truncated with a
/// warning.
PodBasis pod(const DenseMatrix& snapshots, const Vector& weight, Index r = -1);

/// POD of homogeneous snapshots followed by an Omega-orthogonal projection of
/// the modes onto ker M and one re-orthonormalization pass, so that
/// M Phi vanishes to round-off.
PodBasis pod_divergence_free(const OperatorSet& ops, const DenseMatrix& snapshots, Index r = -1);

/// Omega-orthonormalizes the columns of `a` in order (Householder QR with
/// positive diagonal), keeping each column as close as possible to its input.
DenseMatrix reorthonormalize(const DenseMatrix& a, const Vector& weight);

std::uint64_t weight_hash(const Vector& weight);

}  // namespace romns

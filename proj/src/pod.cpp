#include "romns/pod.hpp"

#include <cmath>

#include "romns/grid.hpp"
#include "romns/lifting.hpp"

namespace romns {

PodBasis PodBasis::truncated(Index r) const {
  if (r < 0 || r > rank()) {
    throw InvalidArgument("PodBasis::truncated: rank " + std::to_string(r) + " exceeds the " +
                          std::to_string(rank()) + " available modes");
  }
  PodBasis out = *this;
  out.phi = phi.leftCols(r);
  return out;
}

double PodBasis::tail_energy(Index r) const {
  if (r >= singular_values.size()) return 0.0;
  return std::sqrt(singular_values.tail(singular_values.size() - r).squaredNorm());
}

PodBasis pod(const DenseMatrix& snapshots, const Vector& weight, Index r) {
  if (weight.size() != snapshots.rows()) throw DimensionError("pod: weight size mismatch");
  if ((weight.array() <= 0.0).any()) throw InvalidArgument("pod: weight must be positive");
  const Vector sw = weight.array().sqrt();
  const DenseMatrix scaled = sw.asDiagonal() * snapshots;

  PodBasis basis;
  basis.weight = weight;
  SvdResult svd = thin_svd(scaled, r < 0 ? -1 : r);
  basis.singular_values = svd.s;
  basis.numerical_rank = numerical_rank(svd.s);
  Index keep = r < 0 ? basis.numerical_rank : r;
  if (keep > basis.numerical_rank) {
    basis.warning = "pod: requested R = " + std::to_string(keep) + " exceeds the numerical rank " +
                    std::to_string(basis.numerical_rank) + "; truncated";
    keep = basis.numerical_rank;
  }
  basis.phi = sw.cwiseInverse().asDiagonal() * svd.u.leftCols(keep);
  return basis;
}

DenseMatrix reorthonormalize(const DenseMatrix& a, const Vector& weight) {
  if (a.cols() == 0) return a;
  const Vector sw = weight.array().sqrt();
  Eigen::HouseholderQR<DenseMatrix> qr(sw.asDiagonal() * a);
  DenseMatrix q = DenseMatrix::Identity(a.rows(), a.cols());
  q.applyOnTheLeft(qr.householderQ());
  for (Index j = 0; j < a.cols(); ++j) {
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return sw.cwiseInverse().asDiagonal() * q;
}

PodBasis pod_divergence_free(const OperatorSet& ops, const DenseMatrix& snapshots, Index r) {
  PodBasis basis = pod(snapshots, ops.omega, r);
  basis.phi = reorthonormalize(project_divergence_free(ops, basis.phi), ops.omega);
  return basis;
}

std::uint64_t weight_hash(const Vector& weight) {
  return fnv1a(weight.data(), static_cast<std::size_t>(weight.size()) * sizeof(double));
}

}  // namespace romns

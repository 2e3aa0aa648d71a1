#include "romns/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <string>

namespace romns {

SparseLu::SparseLu(const SparseMatrix& a) : n_(a.rows()) {
  if (a.rows() != a.cols()) {
    throw DimensionError("sparse_lu: matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected square");
  }
  lu_ = std::make_unique<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>>();
  SparseMatrix compressed = a;
  compressed.makeCompressed();
  lu_->analyzePattern(compressed);
  lu_->factorize(compressed);
  if (lu_->info() != Eigen::Success) {
    const std::string msg = lu_->lastErrorMessage();
    std::int64_t pivot = -1;
    std::smatch m;
    if (std::regex_search(msg, m, std::regex("AT ([0-9]+)"))) {
      // Eigen reports the 1-based column of the permuted matrix.
      pivot = std::stoll(m[1].str()) - 1;
    }
    throw SingularMatrixError("sparse_lu: singular matrix, zero pivot in column " +
                                  std::to_string(pivot) + " (" + msg + ")",
                              pivot);
  }
}

Vector SparseLu::solve(const Vector& b) const {
  if (b.size() != n_) throw DimensionError("SparseLu::solve: rhs size mismatch");
  Vector x = lu_->solve(b);
  return x;
}

DenseMatrix SparseLu::solve(const DenseMatrix& b) const {
  if (b.rows() != n_) throw DimensionError("SparseLu::solve: rhs rows mismatch");
  DenseMatrix x = lu_->solve(b);
  return x;
}

SparseLu sparse_lu(const SparseMatrix& a) { return SparseLu(a); }

DenseLu::DenseLu(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("DenseLu: matrix must be square");
  lu_.compute(a);
  rcond_ = a.size() == 0 ? 1.0 : lu_.rcond();
  if (!(rcond_ > 0.0) || !std::isfinite(rcond_)) {
    throw SingularMatrixError("DenseLu: matrix is singular", -1);
  }
}

SvdResult thin_svd(const DenseMatrix& x, Index max_rank) {
  if (!x.allFinite()) throw InvalidArgument("thin_svd: non-finite input");
  const Index m = x.rows();
  const Index n = x.cols();
  const Index k = std::min(m, n);
  const Index keep = max_rank < 0 ? k : std::min(max_rank, k);
  SvdResult out;
  if (k == 0) {
    out.u = DenseMatrix(m, 0);
    out.vt = DenseMatrix(0, n);
    return out;
  }
  if (m >= n) {
    Eigen::HouseholderQR<DenseMatrix> qr(x);
    DenseMatrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<DenseMatrix> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.s = svd.singularValues();
    DenseMatrix y = DenseMatrix::Zero(m, keep);
    y.topRows(n) = svd.matrixU().leftCols(keep);
    y.applyOnTheLeft(qr.householderQ());
    out.u = std::move(y);
    out.vt = svd.matrixV().leftCols(keep).transpose();
  } else {
    SvdResult t = thin_svd(x.transpose(), keep);
    out.u = t.vt.transpose();
    out.s = std::move(t.s);
    out.vt = t.u.transpose();
  }
  return out;
}

Vector singular_values(const DenseMatrix& x) {
  if (!x.allFinite()) throw InvalidArgument("singular_values: non-finite input");
  if (x.rows() == 0 || x.cols() == 0) return Vector();
  if (x.rows() >= x.cols()) {
    Eigen::HouseholderQR<DenseMatrix> qr(x);
    DenseMatrix r = qr.matrixQR().topRows(x.cols()).triangularView<Eigen::Upper>();
    return Eigen::JacobiSVD<DenseMatrix>(r).singularValues();
  }
  return singular_values(x.transpose());
}

DenseMatrix qr_orthonormalize(const DenseMatrix& a, const Vector& weight) {
  if (weight.size() != a.rows()) throw DimensionError("qr_orthonormalize: weight size");
  if ((weight.array() <= 0.0).any()) throw InvalidArgument("qr_orthonormalize: weight must be positive");
  const Vector sw = weight.array().sqrt();
  DenseMatrix scaled = sw.asDiagonal() * a;
  Eigen::ColPivHouseholderQR<DenseMatrix> qr(scaled);
  const Index k = std::min(a.rows(), a.cols());
  Index rank = 0;
  if (k > 0) {
    const double r00 = std::abs(qr.matrixQR()(0, 0));
    for (Index i = 0; i < k; ++i) {
      if (std::abs(qr.matrixQR()(i, i)) > kRankTolerance * r00) ++rank;
    }
  }
  DenseMatrix q = DenseMatrix::Identity(a.rows(), rank);
  q.applyOnTheLeft(qr.householderQ());
  return sw.cwiseInverse().asDiagonal() * q;
}

Index numerical_rank(const Vector& s, double rel_tol) {
  if (s.size() == 0 || !(s[0] > 0.0)) return 0;
  const double cut = rel_tol * s[0];
  return static_cast<Index>(std::count_if(s.data(), s.data() + s.size(),
                                          [cut](double v) { return v > cut; }));
}

double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

double max_abs_difference(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_difference: shape mismatch");
  }
  SparseMatrix d = a - b;
  return max_abs(d);
}

}  // namespace romns

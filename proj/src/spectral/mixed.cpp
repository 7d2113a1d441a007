#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "lbblab/error.hpp"
#include "lbblab/spectral.hpp"

namespace lbblab::spectral {

GenEigResult mixed_block_eigs(const SparseMatrix& a, const SparseMatrix& b, const SparseMatrix& mp, int k,
                              const Vector* deflate, int cap) {
  const int nv = static_cast<int>(a.rows());
  const int np = static_cast<int>(b.rows());
  if (a.cols() != nv || b.cols() != nv || mp.rows() != np || mp.cols() != np) {
    throw Error(ErrorCode::DofMismatch, "mixed_block_eigs: inconsistent block sizes");
  }
  if (np == 0) throw Error(ErrorCode::DimensionZero, "empty pressure space");
  if (nv + np > cap) {
    throw Error(ErrorCode::CapExceeded, "mixed pencil of size " + std::to_string(nv + np) + " exceeds cap " +
                                            std::to_string(cap));
  }
  // Zero-mean pressures: orthonormal basis Z of the complement of m.
  DenseMatrix z;
  if (deflate != nullptr) {
    if (deflate->size() != np) throw Error(ErrorCode::DofMismatch, "deflation vector size");
    const DenseMatrix mcol = *deflate;
    Eigen::HouseholderQR<DenseMatrix> qr(mcol);
    z = DenseMatrix(qr.householderQ()).rightCols(np - 1);
  } else {
    z = DenseMatrix::Identity(np, np);
  }
  const int dp = static_cast<int>(z.cols());
  if (k < 1 || k > dp) {
    throw Error(ErrorCode::DimensionExceeded,
                "requested " + std::to_string(k) + " eigenvalues from a space of dimension " + std::to_string(dp));
  }
  const DenseMatrix bz = z.transpose() * DenseMatrix(b);
  const int n = nv + dp;
  DenseMatrix kmat = DenseMatrix::Zero(n, n);
  DenseMatrix mmat = DenseMatrix::Zero(n, n);
  kmat.block(nv, 0, dp, nv) = bz;
  kmat.block(0, nv, nv, dp) = bz.transpose();
  mmat.topLeftCorner(nv, nv) = DenseMatrix(a);
  mmat.bottomRightCorner(dp, dp) = z.transpose() * DenseMatrix(mp) * z;
  mmat = 0.5 * (mmat + mmat.transpose()).eval();

  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> es(kmat, mmat, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "mixed pencil mass block");
  const Vector& mu = es.eigenvalues();

  // The dp largest mu are the square roots of the Schur eigenvalues; the
  // velocity kernel only contributes zeros below them.
  GenEigResult res;
  res.method = "mixed";
  res.vectors = DenseMatrix::Zero(np, k);
  std::vector<int> top;
  for (int i = n - dp; i < n; ++i) top.push_back(i);
  std::sort(top.begin(), top.end(), [&](int x, int y) { return std::abs(mu[x]) < std::abs(mu[y]); });
  for (int j = 0; j < k; ++j) {
    const int i = top[j];
    const double m = std::max(mu[i], 0.0);
    res.values.push_back(m * m);
    const Vector x = es.eigenvectors().col(i);
    const Vector r = kmat * x - mu[i] * (mmat * x);
    res.residuals.push_back(r.norm() / std::sqrt(x.dot(mmat * x)));
    Vector q = z * x.tail(dp);
    const double nq = std::sqrt(std::max(q.dot(mp * q), 0.0));
    if (nq > 0.0) res.vectors.col(j) = q / nq;
  }
  return res;
}

}  // namespace lbblab::spectral

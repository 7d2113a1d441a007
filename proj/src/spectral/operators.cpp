#include <algorithm>
#include <cstdlib>
#include <string>

#include "lbblab/error.hpp"
#include "lbblab/spectral.hpp"

namespace lbblab::spectral {

SymFactorization::SymFactorization(const SparseMatrix& a) : n_(static_cast<int>(a.rows())) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidArgument, "factorize_spd: matrix is not square");
  const SparseMatrix at = a.transpose();
  const double scale = a.norm();
  if ((a - at).norm() > 1e-12 * std::max(scale, 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "factorize_spd: matrix is not symmetric");
  }
  llt_.compute(a);
  if (llt_.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "Cholesky pivot <= 0");
}

Vector SymFactorization::solve(const Vector& b) const { return llt_.solve(b); }

DenseMatrix SymFactorization::solve(const DenseMatrix& b) const { return llt_.solve(b); }

Vector SymFactorization::half_solve(const Vector& b) const {
  Vector pb = llt_.permutationP() * b;
  return llt_.matrixL().solve(pb);
}

std::shared_ptr<const SymFactorization> factorize_spd(const SparseMatrix& a) {
  return std::make_shared<const SymFactorization>(a);
}

SchurOperator::SchurOperator(SparseMatrix a, SparseMatrix b) : a_mat_(std::move(a)), b_(std::move(b)) {
  if (b_.cols() != a_mat_.rows()) throw Error(ErrorCode::DofMismatch, "B columns do not match A");
  a_ = factorize_spd(a_mat_);
  bt_ = b_.transpose();
}

Vector SchurOperator::apply(const Vector& q) const { return b_ * a_->solve(Vector(bt_ * q)); }

Vector SchurOperator::half_apply(const Vector& q) const { return a_->half_solve(Vector(bt_ * q)); }

namespace {

constexpr int kColumnBlock = 32;

void schur_columns(const SchurOperator& s, const SparseMatrix& bt, int first, int last, DenseMatrix& out) {
  const int nv = s.velocity_size();
  DenseMatrix rhs = DenseMatrix::Zero(nv, last - first);
  for (int c = first; c < last; ++c) {
    for (SparseMatrix::InnerIterator it(bt, c); it; ++it) rhs(it.row(), c - first) = it.value();
  }
  const DenseMatrix z = s.factorization().solve(rhs);
  out.middleCols(first, last - first) = s.B() * z;
}

}  // namespace

DenseMatrix dense_schur(const SchurOperator& s, int cap, Exec exec) {
  const int np = s.size();
  if (np > cap) {
    throw Error(ErrorCode::CapExceeded,
                "dense Schur: " + std::to_string(np) + " pressure dofs exceed cap " + std::to_string(cap));
  }
  const SparseMatrix bt = s.B().transpose();
  DenseMatrix out(np, np);
  const int nblocks = (np + kColumnBlock - 1) / kColumnBlock;
  if (exec == Exec::Serial) {
    for (int b = 0; b < nblocks; ++b) schur_columns(s, bt, b * kColumnBlock, std::min(np, (b + 1) * kColumnBlock), out);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (int b = 0; b < nblocks; ++b) schur_columns(s, bt, b * kColumnBlock, std::min(np, (b + 1) * kColumnBlock), out);
  }
  return out;
}

int dense_cap_from_env(int fallback) {
  const char* v = std::getenv("LBBLAB_DENSE_CAP");
  if (v == nullptr || *v == '\0') return fallback;
  try {
    std::size_t used = 0;
    const int cap = std::stoi(v, &used);
    if (used != std::string(v).size() || cap < 0) throw std::invalid_argument(v);
    return cap;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, std::string("LBBLAB_DENSE_CAP is not a non-negative integer: ") + v);
  }
}

}  // namespace lbblab::spectral

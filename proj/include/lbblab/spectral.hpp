#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "lbblab/fem.hpp"

namespace lbblab::spectral {

using fem::Exec;
using fem::SparseMatrix;
using fem::Vector;
using DenseMatrix = Eigen::MatrixXd;

/// Sparse Cholesky (AMD-permuted) of an SPD matrix. Immutable after
/// construction; solves are safe from several threads.
class SymFactorization {
 public:
  explicit SymFactorization(const SparseMatrix& a);

  int size() const { return n_; }
  Vector solve(const Vector& b) const;
  DenseMatrix solve(const DenseMatrix& b) const;
  /// L^{-1} P b, so that |half_solve(b)|^2 = b^T A^{-1} b.
  Vector half_solve(const Vector& b) const;

 private:
  int n_ = 0;
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
};

/// Throws NotPositiveDefinite if a pivot is not positive, InvalidArgument
/// if A is not square or visibly nonsymmetric.
std::shared_ptr<const SymFactorization> factorize_spd(const SparseMatrix& a);

/// q -> B A^{-1} B^T q. Keeps A as well: the iterative eigensolver
/// factors the shifted block matrix built from A, B and Mp.
class SchurOperator {
 public:
  SchurOperator(SparseMatrix a, SparseMatrix b);

  int size() const { return static_cast<int>(b_.rows()); }
  int velocity_size() const { return static_cast<int>(b_.cols()); }
  const SparseMatrix& A() const { return a_mat_; }
  const SparseMatrix& B() const { return b_; }
  const SymFactorization& factorization() const { return *a_; }

  Vector apply(const Vector& q) const;
  /// L^{-1} P B^T q; its squared norm is q^T S q, free of cancellation.
  Vector half_apply(const Vector& q) const;

 private:
  SparseMatrix a_mat_;
  SparseMatrix b_;
  SparseMatrix bt_;
  std::shared_ptr<const SymFactorization> a_;
};

enum class Method { Auto, Dense, Iterative };

struct SolverOptions {
  double tolerance = 1e-10;  ///< residual contract, relative to |q|_Mp
  int dense_cap = 4000;
  Method method = Method::Auto;
  std::uint64_t seed = 0;
  int max_basis = 1200;   ///< Krylov basis size cap for the iterative path
  int block_size = 0;     ///< 0: k + 4
  double shift = -0.05;   ///< relative to an estimate of the largest sigma
  Exec exec = Exec::Parallel;
};

/// Default cap, overridden by LBBLAB_DENSE_CAP when set.
int dense_cap_from_env(int fallback = 4000);

struct GenEigResult {
  std::vector<double> values;  ///< ascending
  DenseMatrix vectors;         ///< columns Mp-orthonormal
  std::vector<double> residuals;
  std::string method;
  int iterations = 0;

  double max_residual() const;
};

/// Dual-norm residual |Mp^{-1}(S q - sigma Mp q)|_Mp for Mp-normalized q.
double eig_residual(const SchurOperator& s, const SparseMatrix& mp, const Vector& q, double sigma);

/// k smallest eigenpairs of S q = sigma Mp q, optionally on the Mp-orthogonal
/// complement of Mp^{-1} m.
GenEigResult smallest_generalized_eigs(const SchurOperator& s, const SparseMatrix& mp, int k,
                                       const Vector* deflate, const SolverOptions& opts = {});

/// Explicit S by one A-solve per pressure dof.
DenseMatrix dense_schur(const SchurOperator& s, int cap = 4000, Exec exec = Exec::Parallel);

/// Same sigma list from the symmetric pencil [0 B^T; B 0] x = mu diag(A, Mp) x
/// (largest mu squared). Dense; CapExceeded when nV + nP > cap.
GenEigResult mixed_block_eigs(const SparseMatrix& a, const SparseMatrix& b, const SparseMatrix& mp, int k,
                              const Vector* deflate, int cap = 4000);

}  // namespace lbblab::spectral

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "lbblab/error.hpp"
#include "lbblab/spectral.hpp"

namespace lbblab::spectral {

namespace {

using MassLLT = Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

struct Deflation {
  bool active = false;
  Vector qbar;  // Mp^{-1} m
  Vector m;
  double mq = 1.0;

  void apply(Vector& v) const {
    if (active) v -= qbar * (m.dot(v) / mq);
  }
};

Deflation make_deflation(const MassLLT& mass, const Vector* m) {
  Deflation d;
  if (m == nullptr) return d;
  d.active = true;
  d.m = *m;
  d.qbar = mass.solve(*m);
  d.mq = d.m.dot(d.qbar);
  if (!(d.mq > 0.0)) throw Error(ErrorCode::InvalidArgument, "deflation vector has zero mass");
  return d;
}

double residual_with(const SchurOperator& s, const SparseMatrix& mp, const MassLLT& mass, const Vector& q, double sigma) {
  const Vector mq = mp * q;
  const double nq = std::sqrt(q.dot(mq));
  const Vector r = s.apply(q) - sigma * mq;
  const double dual = r.dot(mass.solve(r));
  return std::sqrt(std::max(dual, 0.0)) / nq;
}

double rayleigh(const SchurOperator& s, const SparseMatrix& mp, const Vector& q) {
  return s.half_apply(q).squaredNorm() / q.dot(mp * q);
}

void check_dims(const SchurOperator& s, const SparseMatrix& mp, int k, const Vector* deflate) {
  const int n = s.size();
  if (mp.rows() != n || mp.cols() != n) throw Error(ErrorCode::DofMismatch, "Mp does not match the Schur operator");
  if (deflate != nullptr && deflate->size() != n) throw Error(ErrorCode::DofMismatch, "deflation vector size");
  if (n == 0) throw Error(ErrorCode::DimensionZero, "empty pressure space");
  const int dim = n - (deflate != nullptr ? 1 : 0);
  if (dim == 0) throw Error(ErrorCode::DimensionZero, "nothing left after deflation");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  if (k > dim) {
    throw Error(ErrorCode::DimensionExceeded,
                "requested " + std::to_string(k) + " eigenvalues from a space of dimension " + std::to_string(dim));
  }
}

// --- tridiagonal inverse iteration (LU with partial pivoting, as in gttrf)

struct TriLU {
  std::vector<double> dl, d, du, du2;
  std::vector<char> swapped;
};

TriLU tri_factor(const Vector& diag, const Vector& sub, double shift, double tiny) {
  const int n = static_cast<int>(diag.size());
  TriLU f;
  f.d.resize(n);
  f.dl.assign(std::max(n - 1, 0), 0.0);
  f.du.assign(std::max(n - 1, 0), 0.0);
  f.du2.assign(std::max(n - 2, 0), 0.0);
  f.swapped.assign(std::max(n - 1, 0), 0);
  for (int i = 0; i < n; ++i) f.d[i] = diag[i] - shift;
  for (int i = 0; i + 1 < n; ++i) f.dl[i] = f.du[i] = sub[i];
  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(f.d[i]) >= std::abs(f.dl[i])) {
      if (f.d[i] == 0.0) f.d[i] = tiny;
      const double fact = f.dl[i] / f.d[i];
      f.dl[i] = fact;
      f.d[i + 1] -= fact * f.du[i];
    } else {
      const double fact = f.d[i] / f.dl[i];
      f.d[i] = f.dl[i];
      f.dl[i] = fact;
      const double t = f.du[i];
      f.du[i] = f.d[i + 1];
      f.d[i + 1] = t - fact * f.d[i + 1];
      if (i + 2 < n) {
        f.du2[i] = f.du[i + 1];
        f.du[i + 1] = -fact * f.du[i + 1];
      }
      f.swapped[i] = 1;
    }
  }
  if (n > 0 && f.d[n - 1] == 0.0) f.d[n - 1] = tiny;
  return f;
}

void tri_solve(const TriLU& f, Vector& b) {
  const int n = static_cast<int>(b.size());
  for (int i = 0; i + 1 < n; ++i) {
    if (!f.swapped[i]) {
      b[i + 1] -= f.dl[i] * b[i];
    } else {
      const double t = b[i];
      b[i] = b[i + 1];
      b[i + 1] = t - f.dl[i] * b[i];
    }
  }
  b[n - 1] /= f.d[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - f.du[n - 2] * b[n - 1]) / f.d[n - 2];
  for (int i = n - 3; i >= 0; --i) b[i] = (b[i] - f.du[i] * b[i + 1] - f.du2[i] * b[i + 2]) / f.d[i];
}

// k lowest eigenpairs of a dense symmetric matrix: Householder tridiagonal
// form, eigenvalues only, inverse iteration, then Rayleigh-Ritz on the k
// vectors. Falls back to the full solver if that misses the tolerance.
void lowest_dense(const DenseMatrix& a, int k, double tol, std::uint64_t seed, Vector& values, DenseMatrix& vectors) {
  const int n = static_cast<int>(a.rows());
  Eigen::Tridiagonalization<DenseMatrix> tri(a);
  const Vector diag = tri.diagonal();
  const Vector sub = tri.subDiagonal();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Vector all = es.eigenvalues();
  const double norm = std::max(all.cwiseAbs().maxCoeff(), 1e-300);
  const double eps = std::numeric_limits<double>::epsilon();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  DenseMatrix x(n, k);
  for (int j = 0; j < k; ++j) {
    // Nudge the shift off the computed eigenvalue so the factor is regular.
    const double shift = all[j] - 4.0 * eps * norm * (1 + j);
    const TriLU f = tri_factor(diag, sub, shift, eps * norm);
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    for (int it = 0; it < 4; ++it) {
      v.normalize();
      tri_solve(f, v);
      for (int i = 0; i < j; ++i) {
        if (std::abs(all[i] - all[j]) <= 1e-3 * norm) v -= x.col(i) * x.col(i).dot(v);
      }
    }
    x.col(j) = v.normalized();
  }
  // Orthonormalize (clusters), back-transform, Rayleigh-Ritz.
  Eigen::HouseholderQR<DenseMatrix> qr(x);
  DenseMatrix z = tri.matrixQ() * DenseMatrix(qr.householderQ() * DenseMatrix::Identity(n, k));
  DenseMatrix h = z.transpose() * (a * z);
  h = 0.5 * (h + h.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> small(h);
  z = z * small.eigenvectors();
  values = small.eigenvalues();
  const DenseMatrix r = a * z - z * values.asDiagonal();
  if (r.colwise().norm().maxCoeff() <= 0.1 * tol) {
    vectors = z;
    return;
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> full(a);
  values = full.eigenvalues().head(k);
  vectors = full.eigenvectors().leftCols(k);
}

GenEigResult dense_path(const SchurOperator& s, const SparseMatrix& mp, const MassLLT& mass, int k,
                        const Deflation& defl, const SolverOptions& opts) {
  DenseMatrix sd = dense_schur(s, opts.dense_cap, opts.exec);
  sd = 0.5 * (sd + sd.transpose()).eval();
  const DenseMatrix md(mp);
  Eigen::LLT<DenseMatrix> llt(md);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "pressure mass matrix");
  const DenseMatrix x = llt.matrixL().solve(sd);
  DenseMatrix st = llt.matrixL().solve(DenseMatrix(x.transpose()));
  st = 0.5 * (st + st.transpose()).eval();
  if (defl.active) {
    // P St P + c u u^T with u the constant mode in the Cholesky frame; c sits
    // above the spectrum, so the k lowest are the deflated ones.
    Vector u = llt.matrixU() * defl.qbar;
    u.normalize();
    const double c = 2.0 * st.norm() + 1.0;
    const Vector w = st * u;
    const double alpha = u.dot(w);
    st.noalias() -= u * w.transpose();
    st.noalias() -= w * u.transpose();
    st.noalias() += (alpha + c) * (u * u.transpose());
  }
  Vector vals;
  DenseMatrix y;
  lowest_dense(st, k, opts.tolerance, opts.seed, vals, y);

  GenEigResult res;
  res.method = "dense";
  res.vectors = llt.matrixU().solve(y);
  for (int j = 0; j < k; ++j) {
    Vector q = res.vectors.col(j);
    defl.apply(q);
    q /= std::sqrt(q.dot(mp * q));
    res.vectors.col(j) = q;
    res.values.push_back(vals[j]);
    res.residuals.push_back(residual_with(s, mp, mass, q, vals[j]));
  }
  return res;
}

// Shift-invert block Krylov with full Mp-reorthogonalization. T = (S - tau
// Mp)^{-1} Mp is applied through an LDL^T of the quasi-definite block matrix
// [A B^T; B tau Mp], which never forms S.
GenEigResult iterative_path(const SchurOperator& s, const SparseMatrix& mp, const MassLLT& mass, int k,
                            const Deflation& defl, const SolverOptions& opts, const SparseMatrix& a) {
  const int n = s.size();
  const int nv = s.velocity_size();
  const int dim = n - (defl.active ? 1 : 0);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    defl.apply(v);
    return v;
  };

  // Rough largest sigma, to scale the shift.
  double sigma_max = 0.0;
  {
    Vector v = random_vector();
    for (int it = 0; it < 12; ++it) {
      v /= std::sqrt(v.dot(mp * v));
      sigma_max = std::max(sigma_max, rayleigh(s, mp, v));
      v = mass.solve(s.apply(v));
      defl.apply(v);
    }
  }
  if (!(sigma_max > 0.0)) sigma_max = 1.0;
  const double tau = opts.shift * sigma_max;

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a.nonZeros() + 2 * s.B().nonZeros() + mp.nonZeros());
  for (int c = 0; c < a.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  }
  for (int c = 0; c < s.B().outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(s.B(), c); it; ++it) {
      t.emplace_back(nv + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), nv + it.row(), it.value());
    }
  }
  for (int c = 0; c < mp.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(mp, c); it; ++it) t.emplace_back(nv + it.row(), nv + it.col(), tau * it.value());
  }
  SparseMatrix kmat(nv + n, nv + n);
  kmat.setFromTriplets(t.begin(), t.end());
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(kmat);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "shifted saddle-point factorization");

  auto apply_t = [&](const Vector& v) {
    Vector rhs = Vector::Zero(nv + n);
    rhs.tail(n) = mp * v;
    Vector out = -Vector(ldlt.solve(rhs).tail(n));
    defl.apply(out);
    return out;
  };

  const int p = std::min(opts.block_size > 0 ? opts.block_size : k + 4, dim);
  const int maxb = std::min(std::max(opts.max_basis, k + p), dim);
  DenseMatrix V(n, maxb), MV(n, maxb), W(n, maxb);
  int m = 0;
  auto add_vector = [&](Vector x) {
    defl.apply(x);
    const double n0 = std::sqrt(std::max(x.dot(mp * x), 0.0));
    if (!(n0 > 0.0)) return false;
    for (int pass = 0; pass < 2 && m > 0; ++pass) {
      const Vector c = MV.leftCols(m).transpose() * x;
      x.noalias() -= V.leftCols(m) * c;
    }
    const double nrm = std::sqrt(std::max(x.dot(mp * x), 0.0));
    if (!(nrm > 1e-8 * n0)) return false;
    x /= nrm;
    V.col(m) = x;
    MV.col(m) = mp * x;
    ++m;
    return true;
  };
  auto add_or_random = [&](const Vector& x) {
    if (add_vector(x)) return;
    for (int tries = 0; tries < 20 && m < maxb; ++tries) {
      if (add_vector(random_vector())) return;
    }
  };
  while (m < p) add_or_random(random_vector());

  GenEigResult res;
  res.method = "krylov";
  int b0 = 0;
  int next_check = std::max(k, 2 * p);
  int iterations = 0;
  while (true) {
    for (int j = b0; j < m; ++j) W.col(j) = apply_t(V.col(j));
    ++iterations;
    const int b1 = m;
    const bool exhausted = m >= dim;
    if (m >= next_check || m >= maxb || exhausted) {
      DenseMatrix h = MV.leftCols(m).transpose() * W.leftCols(m);
      h = 0.5 * (h + h.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h);
      // Largest theta <-> smallest sigma.
      res.values.clear();
      res.residuals.clear();
      res.vectors.resize(n, k);
      std::vector<std::pair<double, int>> order;
      for (int j = 0; j < k; ++j) {
        Vector q = V.leftCols(m) * es.eigenvectors().col(m - 1 - j);
        defl.apply(q);
        q /= std::sqrt(q.dot(mp * q));
        const double sigma = rayleigh(s, mp, q);
        res.vectors.col(j) = q;
        order.emplace_back(sigma, j);
      }
      std::sort(order.begin(), order.end());
      DenseMatrix sorted(n, k);
      bool converged = true;
      for (int j = 0; j < k; ++j) {
        sorted.col(j) = res.vectors.col(order[j].second);
        res.values.push_back(order[j].first);
        const double r = residual_with(s, mp, mass, sorted.col(j), order[j].first);
        res.residuals.push_back(r);
        converged = converged && r <= opts.tolerance;
      }
      res.vectors = sorted;
      res.iterations = iterations;
      if (converged || exhausted) return res;
      if (m >= maxb) {
        throw Error(ErrorCode::NonConvergence, "Krylov basis cap " + std::to_string(maxb) +
                                                   " reached with residual " + std::to_string(res.max_residual()));
      }
      next_check = std::max(m + p, m + m / 5);
    }
    for (int j = b0; j < b1 && m < maxb; ++j) add_or_random(W.col(j));
    if (m == b1) {
      throw Error(ErrorCode::NonConvergence, "Krylov basis stopped growing at " + std::to_string(m));
    }
    b0 = b1;
  }
}

}  // namespace

double GenEigResult::max_residual() const {
  double r = 0.0;
  for (double x : residuals) r = std::max(r, x);
  return r;
}

double eig_residual(const SchurOperator& s, const SparseMatrix& mp, const Vector& q, double sigma) {
  MassLLT mass(mp);
  if (mass.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "pressure mass matrix");
  return residual_with(s, mp, mass, q, sigma);
}

GenEigResult smallest_generalized_eigs(const SchurOperator& s, const SparseMatrix& mp, int k, const Vector* deflate,
                                       const SolverOptions& opts) {
  check_dims(s, mp, k, deflate);
  MassLLT mass(mp);
  if (mass.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "pressure mass matrix");
  const Deflation defl = make_deflation(mass, deflate);
  bool dense = false;
  switch (opts.method) {
    case Method::Dense: dense = true; break;
    case Method::Iterative: dense = false; break;
    case Method::Auto: dense = s.size() <= opts.dense_cap; break;
  }
  if (dense) return dense_path(s, mp, mass, k, defl, opts);
  return iterative_path(s, mp, mass, k, defl, opts, s.A());
}

}  // namespace lbblab::spectral

#include "oracles.hpp"

#include <cmath>

namespace oracle {

double triangle_monomial(int p, int q) {
  double num = 1.0;
  for (int i = 2; i <= p; ++i) num *= i;
  for (int i = 2; i <= q; ++i) num *= i;
  double den = 1.0;
  for (int i = 2; i <= p + q + 2; ++i) den *= i;
  return num / den;
}

std::vector<double> dense_sigmas(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& mp,
                                 const Eigen::VectorXd& m) {
  const Eigen::MatrixXd s = b * a.ldlt().solve(b.transpose());
  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(s.rows(), s.rows());
  if (m.size() > 0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    const Eigen::MatrixXd q = qr.householderQ();
    z = q.rightCols(s.rows() - 1);
  }
  const Eigen::MatrixXd sz = z.transpose() * s * z;
  const Eigen::MatrixXd mz = z.transpose() * mp * z;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sz + sz.transpose()), 0.5 * (mz + mz.transpose()),
                                                               Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

std::vector<double> dense_sigmas(const Eigen::SparseMatrix<double>& a, const Eigen::SparseMatrix<double>& b,
                                 const Eigen::SparseMatrix<double>& mp, const Eigen::VectorXd& m) {
  return dense_sigmas(Eigen::MatrixXd(a), Eigen::MatrixXd(b), Eigen::MatrixXd(mp), m);
}

namespace {

void golub_welsch(int n, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) j(i, i - 1) = j(i - 1, i) = i / std::sqrt(4.0 * i * i - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = 0.5 * (es.eigenvalues()[i] + 1.0);
    w[i] = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
}

// Shifted Legendre polynomial on [0,1] and its derivative.
double legendre(int i, double s, double& d) {
  const double t = 2.0 * s - 1.0;
  double p0 = 1.0, p1 = t, d0 = 0.0, d1 = 1.0;
  if (i == 0) {
    d = 0.0;
    return 1.0;
  }
  for (int m = 1; m < i; ++m) {
    const double p2 = ((2 * m + 1) * t * p1 - m * p0) / (m + 1);
    const double d2 = ((2 * m + 1) * (p1 + t * d1) - m * d0) / (m + 1);
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  d = 2.0 * d1;
  return p1;
}

double bubble(int i, double s, double& d) {
  double dl;
  const double l = legendre(i, s, dl);
  d = (1.0 - 2.0 * s) * l + s * (1.0 - s) * dl;
  return s * (1.0 - s) * l;
}

}  // namespace

std::vector<double> single_rectangle_sigmas(double w, double h, int n, int k) {
  const int nq = n + k + 4;
  std::vector<double> x, wq;
  golub_welsch(nq, x, wq);
  const int m = n - 1;
  const int nv = m * m, np = (k + 1) * (k + 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nv, nv), bx = Eigen::MatrixXd::Zero(np, nv), by = bx;
  Eigen::MatrixXd mp = Eigen::MatrixXd::Zero(np, np);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(np);
  for (int qa = 0; qa < nq; ++qa) {
    for (int qb = 0; qb < nq; ++qb) {
      const double s = x[qa], t = x[qb], wt = wq[qa] * wq[qb] * w * h;
      Eigen::VectorXd vx(nv), vy(nv), p(np);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          double di, dj;
          const double fi = bubble(i, s, di), fj = bubble(j, t, dj);
          vx[i * m + j] = di * fj / w;
          vy[i * m + j] = fi * dj / h;
        }
      }
      for (int i = 0; i <= k; ++i) {
        for (int j = 0; j <= k; ++j) {
          double d;
          p[i * (k + 1) + j] = legendre(i, s, d) * legendre(j, t, d);
        }
      }
      a += wt * (vx * vx.transpose() + vy * vy.transpose());
      bx += wt * p * vx.transpose();
      by += wt * p * vy.transpose();
      mp += wt * p * p.transpose();
      mean += wt * p;
    }
  }
  Eigen::MatrixXd b(np, 2 * nv);
  b << bx, by;
  Eigen::MatrixXd aa = Eigen::MatrixXd::Zero(2 * nv, 2 * nv);
  aa.topLeftCorner(nv, nv) = a;
  aa.bottomRightCorner(nv, nv) = a;
  return dense_sigmas(aa, b, mp, mean);
}

}  // namespace oracle

#include <cmath>
#include <numbers>

#include "lbblab/error.hpp"
#include "lbblab/fem.hpp"

namespace lbblab::fem {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "gauss_legendre needs n >= 1");
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Map from [-1, 1] to [0, 1]; reverse so points are increasing.
    x[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (t + 1.0);
    w[static_cast<std::size_t>(n - 1 - i)] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
}

std::vector<double> gauss_lobatto_nodes(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "gauss_lobatto_nodes needs n >= 2");
  const int order = n - 1;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * i / order);
    for (int it = 0; it < 200; ++it) {
      double pm1 = 1.0;
      double p = t;
      for (int k = 2; k <= order; ++k) {
        const double pn = ((2.0 * k - 1.0) * t * p - (k - 1.0) * pm1) / k;
        pm1 = p;
        p = pn;
      }
      if (order == 1) pm1 = 1.0;
      const double step = (t * p - pm1) / ((order + 1) * p);
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    out[static_cast<std::size_t>(order - i)] = 0.5 * (t + 1.0);
  }
  out.front() = 0.0;
  out.back() = 1.0;
  return out;
}

QuadratureRule quad_rule(Family family, int required_exactness) {
  if (required_exactness < 0) throw Error(ErrorCode::InvalidArgument, "quadrature exactness must be >= 0");
  QuadratureRule rule;
  rule.exactness = required_exactness;
  std::vector<double> xu, wu, xv, wv;
  if (family == Family::QuadQLagrange) {
    const int n = (required_exactness + 2) / 2;  // ceil((p + 1) / 2)
    gauss_legendre(n, xu, wu);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        rule.points.push_back({xu[i], xu[j]});
        rule.weights.push_back(wu[i] * wu[j]);
      }
    }
    return rule;
  }
  // x = u, y = v (1 - u), dx dy = (1 - u) du dv.
  const int nu = (required_exactness + 3) / 2;  // ceil((p + 2) / 2)
  const int nv = (required_exactness + 2) / 2;
  gauss_legendre(nu, xu, wu);
  gauss_legendre(nv, xv, wv);
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      rule.points.push_back({xu[i], xv[j] * (1.0 - xu[i])});
      rule.weights.push_back(wu[i] * wv[j] * (1.0 - xu[i]));
    }
  }
  return rule;
}

}  // namespace lbblab::fem

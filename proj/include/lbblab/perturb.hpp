#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "lbblab/fem.hpp"
#include "lbblab/geometry.hpp"

namespace lbblab::perturb {

using fem::Exec;
using Mat2 = std::array<double, 4>;  // row-major

/// Largest singular value of a 2x2 matrix, closed form.
double spectral_norm(const Mat2& m);

/// Boundary piece x2 = phi(x1), a <= x1 <= b, of a domain lying below it
/// (0 < x2 <= phi). phi must be C2 with phi >= eta0 > 0.
struct GraphBoundaryPatch {
  double a = 0.0;
  double b = 1.0;
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  std::function<double(double)> d2phi;
  double eta0 = 0.0;
  std::vector<double> nodes;  ///< a = x_0 < ... < x_m = b

  /// Checks node ordering/endpoints and phi >= eta0 on a 1025-point sample.
  void validate() const;
};

/// Continuous piecewise affine function on a node list.
class PiecewiseAffine {
 public:
  PiecewiseAffine(std::vector<double> nodes, std::vector<double> values);

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }
  double operator()(double x) const;
  /// Slope of the piece left (side < 0) or right (side >= 0) of x; away from
  /// nodes both agree.
  double slope(double x, int side = 1) const;

 private:
  std::size_t piece(double x, int side) const;
  std::vector<double> nodes_;
  std::vector<double> values_;
};

PiecewiseAffine interpolate_boundary(const GraphBoundaryPatch& patch);

/// F_h(x1, x2) = (x1, r(x1) x2) with r = phi_h / phi on the strip, identity
/// elsewhere.
class GraphMap {
 public:
  GraphMap(GraphBoundaryPatch patch, PiecewiseAffine phi_h);

  const GraphBoundaryPatch& patch() const { return patch_; }
  const PiecewiseAffine& phi_h() const { return phi_h_; }

  bool in_strip(geometry::Point2 x) const;
  geometry::Point2 apply(geometry::Point2 x) const;
  /// Inverse of apply; x1 is preserved, so the inverse is explicit.
  geometry::Point2 inverse(geometry::Point2 y) const;
  /// DG_h = DF_h - I at x, one-sided in x1 as selected by side.
  Mat2 dg(geometry::Point2 x, int side = 1) const;
  double ratio(double x1) const;

 private:
  GraphBoundaryPatch patch_;
  PiecewiseAffine phi_h_;
};

/// Throws NotADiffeomorphism if phi_h <= 0 anywhere on [a, b].
GraphMap build_graph_map(const GraphBoundaryPatch& patch, const PiecewiseAffine& phi_h);

struct LipschitzMapEstimate {
  double eps_forward = 0.0;     ///< sup |DF - I|
  double eps_inverse = 0.0;     ///< sup |DF^{-1} - I|, direct 2x2 inversion
  std::optional<double> eps_inverse_neumann;  ///< eps0 / (1 - eps0), absent when eps0 >= 1
  double eps = 0.0;
  double jacobian_deviation = 0.0;  ///< sup |1 - det DF|
  long long sample_count = 0;
  int patches = 1;
};

/// Tensor sampling of the strip: x1 on a uniform grid plus every
/// interpolation node (both one-sided slopes), x2 = t * phi(x1), t uniform
/// in [0, 1]. `density` points per axis (>= 100).
LipschitzMapEstimate estimate_eps(const GraphMap& map, int density = 512, Exec exec = Exec::Parallel);

/// Four quarter-circle patches of the unit circle, each the graph
/// x2 = sqrt(1 - x1^2) over [-sqrt(2)/2, sqrt(2)/2] after rotation, against
/// the chords of the inscribed regular n-gon. n >= 8 and n % 4 == 0.
LipschitzMapEstimate polygon_disk_eps(int n, int density = 512, Exec exec = Exec::Parallel);

/// Patch k (0..3) used by polygon_disk_eps.
GraphBoundaryPatch polygon_disk_patch(int n, int k);

}  // namespace lbblab::perturb

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lbblab/error.hpp"
#include "lbblab/perturb.hpp"

namespace lbblab::perturb {

using geometry::Point2;

double spectral_norm(const Mat2& m) {
  const double f2 = m[0] * m[0] + m[1] * m[1] + m[2] * m[2] + m[3] * m[3];
  const double det = m[0] * m[3] - m[1] * m[2];
  const double disc = std::sqrt(std::max(f2 * f2 - 4.0 * det * det, 0.0));
  return std::sqrt(0.5 * (f2 + disc));
}

void GraphBoundaryPatch::validate() const {
  if (!phi || !dphi || !d2phi) throw Error(ErrorCode::InvalidArgument, "patch needs phi, phi' and phi''");
  if (!(b > a)) throw Error(ErrorCode::InvalidArgument, "patch interval must have b > a");
  if (!(eta0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "patch needs eta0 > 0");
  if (nodes.size() < 2 || nodes.front() != a || nodes.back() != b) {
    throw Error(ErrorCode::InvalidArgument, "interpolation nodes must start at a and end at b");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) throw Error(ErrorCode::InvalidArgument, "interpolation nodes must increase");
  }
  constexpr int kSamples = 1025;
  for (int i = 0; i < kSamples; ++i) {
    const double x = a + (b - a) * i / (kSamples - 1);
    if (!(phi(x) >= eta0)) throw Error(ErrorCode::InvalidArgument, "phi drops below eta0");
  }
}

PiecewiseAffine::PiecewiseAffine(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() < 2 || nodes_.size() != values_.size()) {
    throw Error(ErrorCode::InvalidArgument, "piecewise affine function needs matching node/value lists");
  }
}

std::size_t PiecewiseAffine::piece(double x, int side) const {
  // Index i of the piece [x_i, x_{i+1}].
  const auto it = side < 0 ? std::lower_bound(nodes_.begin(), nodes_.end(), x)
                           : std::upper_bound(nodes_.begin(), nodes_.end(), x);
  const auto i = static_cast<std::ptrdiff_t>(it - nodes_.begin()) - 1;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(nodes_.size()) - 2));
}

double PiecewiseAffine::operator()(double x) const {
  const std::size_t i = piece(x, 1);
  const double t = (x - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
  return (1.0 - t) * values_[i] + t * values_[i + 1];
}

double PiecewiseAffine::slope(double x, int side) const {
  const std::size_t i = piece(x, side);
  return (values_[i + 1] - values_[i]) / (nodes_[i + 1] - nodes_[i]);
}

PiecewiseAffine interpolate_boundary(const GraphBoundaryPatch& patch) {
  patch.validate();
  std::vector<double> v;
  v.reserve(patch.nodes.size());
  for (double x : patch.nodes) v.push_back(patch.phi(x));
  return {patch.nodes, std::move(v)};
}

GraphMap::GraphMap(GraphBoundaryPatch patch, PiecewiseAffine phi_h) : patch_(std::move(patch)), phi_h_(std::move(phi_h)) {}

double GraphMap::ratio(double x1) const { return phi_h_(x1) / patch_.phi(x1); }

bool GraphMap::in_strip(Point2 x) const {
  return x.x >= patch_.a && x.x <= patch_.b && x.y >= 0.0 && x.y <= patch_.phi(x.x);
}

Point2 GraphMap::apply(Point2 x) const {
  if (!in_strip(x)) return x;
  return {x.x, ratio(x.x) * x.y};
}

Point2 GraphMap::inverse(Point2 y) const {
  if (y.x < patch_.a || y.x > patch_.b || y.y < 0.0 || y.y > phi_h_(y.x)) return y;
  return {y.x, y.y / ratio(y.x)};
}

Mat2 GraphMap::dg(Point2 x, int side) const {
  if (!in_strip(x)) return {0.0, 0.0, 0.0, 0.0};
  const double p = patch_.phi(x.x);
  const double dp = patch_.dphi(x.x);
  const double ph = phi_h_(x.x);
  const double dph = phi_h_.slope(x.x, side);
  const double r = ph / p;
  const double dr = (dph * p - ph * dp) / (p * p);
  return {0.0, 0.0, dr * x.y, r - 1.0};
}

GraphMap build_graph_map(const GraphBoundaryPatch& patch, const PiecewiseAffine& phi_h) {
  patch.validate();
  // phi_h is affine between nodes, so its minimum is at a node.
  for (double v : phi_h.values()) {
    if (!(v > 0.0)) throw Error(ErrorCode::NotADiffeomorphism, "interpolant is not positive");
  }
  if (phi_h.nodes().front() != patch.a || phi_h.nodes().back() != patch.b) {
    throw Error(ErrorCode::InvalidArgument, "interpolant does not span the patch interval");
  }
  return {patch, phi_h};
}

namespace {

struct Sup {
  double fwd = 0.0;
  double inv = 0.0;
  double jac = 0.0;
  long long count = 0;

  void merge(const Sup& o) {
    fwd = std::max(fwd, o.fwd);
    inv = std::max(inv, o.inv);
    jac = std::max(jac, o.jac);
    count += o.count;
  }
};

// One x1 column of the tensor grid.
Sup sample_column(const GraphMap& map, double x1, int side, int density) {
  Sup s;
  const double top = map.patch().phi(x1);
  for (int j = 0; j < density; ++j) {
    const Point2 x{x1, top * j / (density - 1)};
    const Mat2 g = map.dg(x, side);
    const Mat2 df{1.0 + g[0], g[1], g[2], 1.0 + g[3]};
    const double det = df[0] * df[3] - df[1] * df[2];
    const Mat2 inv_minus_i{df[3] / det - 1.0, -df[1] / det, -df[2] / det, df[0] / det - 1.0};
    s.fwd = std::max(s.fwd, spectral_norm(g));
    s.inv = std::max(s.inv, spectral_norm(inv_minus_i));
    s.jac = std::max(s.jac, std::abs(1.0 - det));
    ++s.count;
  }
  return s;
}

}  // namespace

LipschitzMapEstimate estimate_eps(const GraphMap& map, int density, Exec exec) {
  if (density < 100) throw Error(ErrorCode::InvalidArgument, "grid density must be >= 100");
  const auto& patch = map.patch();
  struct Column {
    double x1;
    int side;
  };
  std::vector<Column> cols;
  for (int i = 0; i < density; ++i) cols.push_back({patch.a + (patch.b - patch.a) * i / (density - 1), 1});
  for (double x : patch.nodes) {
    cols.push_back({x, -1});
    cols.push_back({x, 1});
  }
  const auto n = static_cast<long long>(cols.size());
  Sup total;
  if (exec == Exec::Serial) {
    for (long long c = 0; c < n; ++c) total.merge(sample_column(map, cols[c].x1, cols[c].side, density));
  } else {
    std::vector<Sup> per(cols.size());
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < n; ++c) per[c] = sample_column(map, cols[c].x1, cols[c].side, density);
    for (const auto& s : per) total.merge(s);
  }
  LipschitzMapEstimate e;
  e.eps_forward = total.fwd;
  e.eps_inverse = total.inv;
  if (total.fwd < 1.0) e.eps_inverse_neumann = total.fwd / (1.0 - total.fwd);
  e.eps = std::max(total.fwd, total.inv);
  e.jacobian_deviation = total.jac;
  e.sample_count = total.count;
  return e;
}

GraphBoundaryPatch polygon_disk_patch(int n, int k) {
  if (n < 8 || n % 4 != 0) throw Error(ErrorCode::InvalidArgument, "polygon_disk_eps needs n >= 8 and n % 4 == 0");
  if (k < 0 || k > 3) throw Error(ErrorCode::InvalidArgument, "patch index must be 0..3");
  // Quarter arc between polygon vertices at angles k pi/2 and (k+1) pi/2,
  // rotated by pi/4 - k pi/2 so that it runs from angle pi/4 to 3 pi/4.
  const double pi = std::numbers::pi;
  const double rot = pi / 4.0 - k * pi / 2.0;
  GraphBoundaryPatch p;
  p.a = -std::sqrt(0.5);
  p.b = std::sqrt(0.5);
  p.phi = [](double x) { return std::sqrt(1.0 - x * x); };
  p.dphi = [](double x) { return -x / std::sqrt(1.0 - x * x); };
  p.d2phi = [](double x) { return -1.0 / std::pow(1.0 - x * x, 1.5); };
  p.eta0 = std::min(p.phi(p.a), p.phi(p.b));  // phi is smallest at the ends
  const int per = n / 4;
  for (int j = per; j >= 0; --j) {
    const double theta = k * pi / 2.0 + j * 2.0 * pi / n + rot;
    p.nodes.push_back(std::cos(theta));
  }
  p.nodes.front() = p.a;
  p.nodes.back() = p.b;
  return p;
}

LipschitzMapEstimate polygon_disk_eps(int n, int density, Exec exec) {
  LipschitzMapEstimate worst;
  worst.patches = 4;
  bool neumann_ok = true;
  for (int k = 0; k < 4; ++k) {
    const auto patch = polygon_disk_patch(n, k);
    const auto e = estimate_eps(build_graph_map(patch, interpolate_boundary(patch)), density, exec);
    worst.eps_forward = std::max(worst.eps_forward, e.eps_forward);
    worst.eps_inverse = std::max(worst.eps_inverse, e.eps_inverse);
    worst.eps = std::max(worst.eps, e.eps);
    worst.jacobian_deviation = std::max(worst.jacobian_deviation, e.jacobian_deviation);
    worst.sample_count += e.sample_count;
    neumann_ok = neumann_ok && e.eps_inverse_neumann.has_value();
  }
  if (neumann_ok && worst.eps_forward < 1.0) worst.eps_inverse_neumann = worst.eps_forward / (1.0 - worst.eps_forward);
  return worst;
}

}  // namespace lbblab::perturb

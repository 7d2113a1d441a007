#include <cmath>
#include <sstream>

#include "lbblab/error.hpp"
#include "lbblab/fem.hpp"

namespace lbblab::fem {

void ElementSpace::validate() const {
  if (degree < 0) throw Error(ErrorCode::DofMismatch, "negative degree");
  if (continuity == Continuity::C0 && degree < 1) throw Error(ErrorCode::DofMismatch, "C0 spaces need degree >= 1");
  if (boundary == BoundaryCondition::ZeroTrace && continuity != Continuity::C0) {
    throw Error(ErrorCode::DofMismatch, "ZeroTrace is only available for C0 spaces");
  }
}

int ElementSpace::local_dim() const {
  if (family == Family::TrianglePLagrange) return (degree + 1) * (degree + 2) / 2;
  return (degree + 1) * (degree + 1);
}

std::string ElementSpace::describe() const {
  std::ostringstream s;
  s << (family == Family::TrianglePLagrange ? 'P' : 'Q') << degree;
  if (continuity == Continuity::Discontinuous) s << "dc";
  return s.str();
}

Family family_of(const geometry::Mesh& mesh) {
  return mesh.is_triangular() ? Family::TrianglePLagrange : Family::QuadQLagrange;
}

LagrangeBasis::LagrangeBasis(Family family, int degree) : family_(family), degree_(degree) {
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "negative polynomial degree");
  const int k = degree;
  if (k == 0) {
    LocalNode c;
    c.kind = NodeKind::Interior;
    c.ref = family == Family::TrianglePLagrange ? std::array<double, 2>{1.0 / 3.0, 1.0 / 3.0}
                                                : std::array<double, 2>{0.5, 0.5};
    nodes_.push_back(c);
    if (family == Family::TrianglePLagrange) {
      lattice_.push_back({0, 0, 0});
    } else {
      tensor_.push_back({0, 0});
    }
    return;
  }

  if (family == Family::TrianglePLagrange) {
    // Multi-index (a0, a1, a2) over barycentrics (1 - xi - eta, xi, eta).
    auto add = [&](std::array<int, 3> a, NodeKind kind, int entity, int pos) {
      LocalNode n;
      n.kind = kind;
      n.entity = entity;
      n.position = pos;
      n.ref = {static_cast<double>(a[1]) / k, static_cast<double>(a[2]) / k};
      nodes_.push_back(n);
      lattice_.push_back(a);
    };
    add({k, 0, 0}, NodeKind::Vertex, 0, 0);
    add({0, k, 0}, NodeKind::Vertex, 1, 0);
    add({0, 0, k}, NodeKind::Vertex, 2, 0);
    for (int s = 1; s < k; ++s) add({k - s, s, 0}, NodeKind::Edge, 0, s);  // v0 -> v1
    for (int s = 1; s < k; ++s) add({0, k - s, s}, NodeKind::Edge, 1, s);  // v1 -> v2
    for (int s = 1; s < k; ++s) add({s, 0, k - s}, NodeKind::Edge, 2, s);  // v2 -> v0
    int interior = 0;
    for (int j = 1; j < k; ++j) {
      for (int i = 1; i + j < k; ++i) add({k - i - j, i, j}, NodeKind::Interior, interior++, 0);
    }
    return;
  }

  line_nodes_ = gauss_lobatto_nodes(k + 1);
  auto add = [&](int i, int j, NodeKind kind, int entity, int pos) {
    LocalNode n;
    n.kind = kind;
    n.entity = entity;
    n.position = pos;
    n.ref = {line_nodes_[i], line_nodes_[j]};
    nodes_.push_back(n);
    tensor_.push_back({i, j});
  };
  add(0, 0, NodeKind::Vertex, 0, 0);
  add(k, 0, NodeKind::Vertex, 1, 0);
  add(k, k, NodeKind::Vertex, 2, 0);
  add(0, k, NodeKind::Vertex, 3, 0);
  for (int s = 1; s < k; ++s) add(s, 0, NodeKind::Edge, 0, s);      // bottom, v0 -> v1
  for (int s = 1; s < k; ++s) add(k, s, NodeKind::Edge, 1, s);      // right, v1 -> v2
  for (int s = 1; s < k; ++s) add(k - s, k, NodeKind::Edge, 2, s);  // top, v2 -> v3
  for (int s = 1; s < k; ++s) add(0, k - s, NodeKind::Edge, 3, s);  // left, v3 -> v0
  int interior = 0;
  for (int j = 1; j < k; ++j) {
    for (int i = 1; i < k; ++i) add(i, j, NodeKind::Interior, interior++, 0);
  }
}

double LagrangeBasis::line(int i, double t) const {
  double v = 1.0;
  for (int j = 0; j <= degree_; ++j) {
    if (j != i) v *= (t - line_nodes_[j]) / (line_nodes_[i] - line_nodes_[j]);
  }
  return v;
}

double LagrangeBasis::line_deriv(int i, double t) const {
  double sum = 0.0;
  for (int m = 0; m <= degree_; ++m) {
    if (m == i) continue;
    double term = 1.0 / (line_nodes_[i] - line_nodes_[m]);
    for (int j = 0; j <= degree_; ++j) {
      if (j != i && j != m) term *= (t - line_nodes_[j]) / (line_nodes_[i] - line_nodes_[j]);
    }
    sum += term;
  }
  return sum;
}

namespace {

// prod_{j < a} (k*lambda - j) / (j + 1) and its derivative in lambda.
void lattice_factor(int a, int k, double lambda, double& value, double& deriv) {
  value = 1.0;
  deriv = 0.0;
  for (int j = 0; j < a; ++j) {
    const double f = (k * lambda - j) / (j + 1.0);
    const double df = k / (j + 1.0);
    deriv = deriv * f + value * df;
    value *= f;
  }
}

}  // namespace

void LagrangeBasis::eval(double xi, double eta, std::span<double> values) const {
  if (degree_ == 0) {
    values[0] = 1.0;
    return;
  }
  if (family_ == Family::TrianglePLagrange) {
    const double lam[3] = {1.0 - xi - eta, xi, eta};
    for (std::size_t n = 0; n < lattice_.size(); ++n) {
      double v = 1.0;
      for (int m = 0; m < 3; ++m) {
        double f, df;
        lattice_factor(lattice_[n][m], degree_, lam[m], f, df);
        v *= f;
      }
      values[n] = v;
    }
    return;
  }
  for (std::size_t n = 0; n < tensor_.size(); ++n) values[n] = line(tensor_[n][0], xi) * line(tensor_[n][1], eta);
}

void LagrangeBasis::eval_grad(double xi, double eta, std::span<double> grads) const {
  if (degree_ == 0) {
    grads[0] = grads[1] = 0.0;
    return;
  }
  if (family_ == Family::TrianglePLagrange) {
    const double lam[3] = {1.0 - xi - eta, xi, eta};
    // d(lambda_m)/d(xi, eta)
    static constexpr double dl[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
    for (std::size_t n = 0; n < lattice_.size(); ++n) {
      double f[3], df[3];
      for (int m = 0; m < 3; ++m) lattice_factor(lattice_[n][m], degree_, lam[m], f[m], df[m]);
      double gx = 0.0, gy = 0.0;
      for (int m = 0; m < 3; ++m) {
        const double others = f[(m + 1) % 3] * f[(m + 2) % 3];
        gx += df[m] * others * dl[m][0];
        gy += df[m] * others * dl[m][1];
      }
      grads[2 * n] = gx;
      grads[2 * n + 1] = gy;
    }
    return;
  }
  for (std::size_t n = 0; n < tensor_.size(); ++n) {
    const int i = tensor_[n][0];
    const int j = tensor_[n][1];
    grads[2 * n] = line_deriv(i, xi) * line(j, eta);
    grads[2 * n + 1] = line(i, xi) * line_deriv(j, eta);
  }
}

ElementMap map_point(const geometry::Mesh& mesh, std::size_t element, double xi, double eta) {
  ElementMap m;
  const auto idx = mesh.element(element);
  const auto& p = mesh.points();
  if (mesh.is_triangular()) {
    const auto v0 = p[idx[0]], v1 = p[idx[1]], v2 = p[idx[2]];
    m.x = v0 + xi * (v1 - v0) + eta * (v2 - v0);
    m.jac = {v1.x - v0.x, v2.x - v0.x, v1.y - v0.y, v2.y - v0.y};
  } else {
    const auto v0 = p[idx[0]], v1 = p[idx[1]], v2 = p[idx[2]], v3 = p[idx[3]];
    m.x = (1 - xi) * (1 - eta) * v0 + xi * (1 - eta) * v1 + xi * eta * v2 + (1 - xi) * eta * v3;
    const auto dxi = (1 - eta) * (v1 - v0) + eta * (v2 - v3);
    const auto deta = (1 - xi) * (v3 - v0) + xi * (v2 - v1);
    m.jac = {dxi.x, deta.x, dxi.y, deta.y};
  }
  m.det = m.jac[0] * m.jac[3] - m.jac[1] * m.jac[2];
  if (!(m.det > 0.0)) throw Error(ErrorCode::DegenerateElement, "singular element Jacobian");
  m.inv_jac = {m.jac[3] / m.det, -m.jac[1] / m.det, -m.jac[2] / m.det, m.jac[0] / m.det};
  return m;
}

}  // namespace lbblab::fem

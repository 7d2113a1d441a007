#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "lbblab/error.hpp"
#include "lbblab/geometry.hpp"

namespace lbblab::geometry {

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

namespace {

double max_edge_sq(std::span<const Point2> v) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const Point2 d = v[j] - v[i];
      m = std::max(m, dot(d, d));
    }
  }
  return m;
}

// Corner Jacobians of a bi-affine quad; det J is affine in the reference
// coordinates, so positivity at the corners gives positivity everywhere.
bool quad_positive(std::span<const Point2> v) {
  const double scale = max_edge_sq(v);
  for (int i = 0; i < 4; ++i) {
    const Point2 prev = v[(i + 3) % 4];
    const Point2 cur = v[i];
    const Point2 next = v[(i + 1) % 4];
    if (cross(next - cur, prev - cur) <= 1e-12 * scale) return false;
  }
  return true;
}

}  // namespace

Mesh Mesh::from_triangles(std::vector<Point2> points, std::vector<std::array<int, 3>> triangles) {
  Mesh m;
  m.cell_ = CellType::Triangle;
  m.points_ = std::move(points);
  m.triangles_ = std::move(triangles);
  m.build_topology();
  return m;
}

Mesh Mesh::from_quads(std::vector<Point2> points, std::vector<std::array<int, 4>> quads) {
  Mesh m;
  m.cell_ = CellType::Quad;
  m.points_ = std::move(points);
  m.quads_ = std::move(quads);
  m.build_topology();
  return m;
}

std::span<const int> Mesh::element(std::size_t e) const {
  if (is_triangular()) return {triangles_[e].data(), 3};
  return {quads_[e].data(), 4};
}

std::span<const int> Mesh::element_edges(std::size_t e) const {
  const std::size_t nv = static_cast<std::size_t>(vertices_per_element());
  return {element_edges_.data() + e * nv, nv};
}

double Mesh::element_area(std::size_t e) const {
  const auto idx = element(e);
  double twice = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    twice += cross(points_[idx[i]], points_[idx[(i + 1) % idx.size()]]);
  }
  return 0.5 * twice;
}

double Mesh::area() const {
  double a = 0.0;
  for (std::size_t e = 0; e < num_elements(); ++e) a += element_area(e);
  return a;
}

Mesh Mesh::transformed(const std::function<Point2(Point2)>& f) const {
  std::vector<Point2> pts;
  pts.reserve(points_.size());
  for (const auto& p : points_) pts.push_back(f(p));
  if (is_triangular()) return from_triangles(std::move(pts), triangles_);
  return from_quads(std::move(pts), quads_);
}

void Mesh::build_topology() {
  const int nv = vertices_per_element();
  const std::size_t ne = num_elements();
  const int np = static_cast<int>(points_.size());
  if (ne == 0) throw Error(ErrorCode::InvalidMesh, "mesh has no elements");

  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::InvalidMesh, "non-finite point coordinate");
    }
  }

  std::vector<Point2> corner(static_cast<std::size_t>(nv));
  for (std::size_t e = 0; e < ne; ++e) {
    const auto idx = element(e);
    for (int i = 0; i < nv; ++i) {
      if (idx[i] < 0 || idx[i] >= np) {
        throw Error(ErrorCode::InvalidMesh, "element " + std::to_string(e) + " has an invalid vertex index");
      }
      corner[i] = points_[idx[i]];
    }
    const bool ok = is_triangular()
                        ? cross(corner[1] - corner[0], corner[2] - corner[0]) > 1e-12 * max_edge_sq(corner)
                        : quad_positive(corner);
    if (!ok) {
      throw Error(ErrorCode::DegenerateElement,
                  "element " + std::to_string(e) + " has non-positive area or Jacobian");
    }
  }

  // Edge numbering by first appearance in element order.
  std::unordered_map<long long, int> lookup;
  lookup.reserve(ne * static_cast<std::size_t>(nv));
  std::vector<int> count;
  std::vector<int> owner;       // first element seen on the edge
  std::vector<int> owner_from;  // directed start vertex in that element
  element_edges_.assign(ne * static_cast<std::size_t>(nv), -1);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto idx = element(e);
    for (int i = 0; i < nv; ++i) {
      const int a = idx[i];
      const int b = idx[(i + 1) % nv];
      if (a == b) throw Error(ErrorCode::InvalidMesh, "repeated vertex in element " + std::to_string(e));
      const int lo = std::min(a, b);
      const int hi = std::max(a, b);
      const long long key = static_cast<long long>(lo) * np + hi;
      auto [it, inserted] = lookup.try_emplace(key, static_cast<int>(edges_.size()));
      if (inserted) {
        edges_.push_back({lo, hi});
        count.push_back(0);
        owner.push_back(static_cast<int>(e));
        owner_from.push_back(a);
      } else if (owner_from[it->second] == a) {
        throw Error(ErrorCode::InvalidMesh, "edge traversed twice in the same direction");
      }
      if (++count[it->second] > 2) {
        throw Error(ErrorCode::InvalidMesh, "edge shared by more than two elements");
      }
      element_edges_[e * nv + i] = it->second;
    }
  }

  boundary_vertex_.assign(points_.size(), false);
  boundary_edge_.assign(edges_.size(), false);
  std::vector<int> balance(points_.size(), 0);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (count[k] != 1) continue;
    const int from = owner_from[k];
    const int to = from == edges_[k].lo ? edges_[k].hi : edges_[k].lo;
    boundary_.push_back({from, to, owner[k]});
    boundary_edge_[k] = true;
    boundary_vertex_[from] = true;
    boundary_vertex_[to] = true;
    ++balance[from];
    --balance[to];
  }
  if (boundary_.empty()) throw Error(ErrorCode::InvalidMesh, "mesh has no boundary");
  for (int b : balance) {
    if (b != 0) throw Error(ErrorCode::InvalidMesh, "boundary edges do not form closed loops");
  }
}

ParentMap compose(const ParentMap& fine_to_mid, const ParentMap& mid_to_coarse) {
  ParentMap out;
  out.reserve(fine_to_mid.size());
  for (const auto& c : fine_to_mid) {
    const auto& p = mid_to_coarse.at(static_cast<std::size_t>(c.parent));
    ChildCell r;
    r.parent = p.parent;
    const auto o = p.to_parent(c.origin[0], c.origin[1]);
    r.origin = o;
    r.jac = {p.jac[0] * c.jac[0] + p.jac[1] * c.jac[2], p.jac[0] * c.jac[1] + p.jac[1] * c.jac[3],
             p.jac[2] * c.jac[0] + p.jac[3] * c.jac[2], p.jac[2] * c.jac[1] + p.jac[3] * c.jac[3]};
    out.push_back(r);
  }
  return out;
}

}  // namespace lbblab::geometry

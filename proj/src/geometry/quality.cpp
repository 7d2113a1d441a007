#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lbblab/error.hpp"
#include "lbblab/geometry.hpp"

namespace lbblab::geometry {

namespace {

double angle_at(Point2 apex, Point2 a, Point2 b) {
  const Point2 u = a - apex;
  const Point2 v = b - apex;
  return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

struct Incident {
  int tri;
  int prev;  // vertex before node (counterclockwise)
  int next;  // vertex after node
};

// Incident triangles of `node` in edge-connected order; `closed` is true when
// the fan wraps around (interior node).
std::vector<Incident> ordered_fan(const Mesh& mesh, int node, bool& closed) {
  std::vector<Incident> fan;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto t = mesh.element(e);
    for (int i = 0; i < 3; ++i) {
      if (t[i] == node) fan.push_back({static_cast<int>(e), t[(i + 2) % 3], t[(i + 1) % 3]});
    }
  }
  if (fan.size() < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "node " + std::to_string(node) + " has fewer than two incident triangles");
  }
  // Walk clockwise: the neighbour of k is the triangle whose prev equals k's next.
  auto find_by_prev = [&](int v) {
    for (std::size_t k = 0; k < fan.size(); ++k) {
      if (fan[k].prev == v) return static_cast<int>(k);
    }
    return -1;
  };
  auto find_by_next = [&](int v) {
    for (std::size_t k = 0; k < fan.size(); ++k) {
      if (fan[k].next == v) return static_cast<int>(k);
    }
    return -1;
  };
  // Start at an end of the chain when the node is on the boundary.
  int start = 0;
  closed = true;
  for (std::size_t k = 0; k < fan.size(); ++k) {
    if (find_by_next(fan[k].prev) < 0) {
      start = static_cast<int>(k);
      closed = false;
      break;
    }
  }
  std::vector<Incident> ordered;
  ordered.reserve(fan.size());
  int cur = start;
  while (cur >= 0 && ordered.size() < fan.size()) {
    ordered.push_back(fan[static_cast<std::size_t>(cur)]);
    cur = find_by_prev(fan[static_cast<std::size_t>(cur)].next);
    if (cur == start) break;
  }
  if (ordered.size() != fan.size()) {
    throw Error(ErrorCode::InvalidMesh, "incident triangles of node " + std::to_string(node) +
                                            " do not form a single edge-connected fan");
  }
  return ordered;
}

}  // namespace

std::vector<double> incident_angles(const Mesh& mesh, int node) {
  if (!mesh.is_triangular()) throw Error(ErrorCode::InvalidArgument, "incident_angles needs a triangle mesh");
  if (node < 0 || node >= static_cast<int>(mesh.num_points())) {
    throw Error(ErrorCode::InvalidArgument, "node index out of range");
  }
  bool closed = false;
  const auto fan = ordered_fan(mesh, node, closed);
  std::vector<double> angles;
  angles.reserve(fan.size());
  const auto& p = mesh.points();
  for (const auto& f : fan) angles.push_back(angle_at(p[node], p[f.next], p[f.prev]));
  return angles;
}

double regularity_index(const Mesh& mesh, int node) {
  bool closed = false;
  if (!mesh.is_triangular()) throw Error(ErrorCode::InvalidArgument, "regularity_index needs a triangle mesh");
  ordered_fan(mesh, node, closed);
  const auto theta = incident_angles(mesh, node);
  const std::size_t j = theta.size();
  const std::size_t pairs = closed ? j : j - 1;
  double r = 0.0;
  for (std::size_t k = 0; k < pairs; ++k) {
    r = std::max(r, std::abs(theta[k] + theta[(k + 1) % j] - std::numbers::pi));
  }
  return r;
}

double mesh_regularity_index(const Mesh& mesh) {
  std::vector<int> valence(mesh.num_points(), 0);
  for (const auto& t : mesh.triangles()) {
    for (int v : t) ++valence[v];
  }
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < mesh.num_points(); ++v) {
    if (valence[v] >= 2) r = std::min(r, regularity_index(mesh, static_cast<int>(v)));
  }
  return r;
}

double convex_inradius(std::span<const Point2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "convex_inradius needs at least three vertices");
  // Edge lines as inward unit normal nrm and offset d: nrm.x >= d inside.
  struct Line {
    Point2 nrm;
    double d;
  };
  std::vector<Line> lines;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = polygon[i];
    const Point2 t = polygon[(i + 1) % n] - a;
    const double len = std::hypot(t.x, t.y);
    const Point2 nrm{-t.y / len, t.x / len};
    lines.push_back({nrm, dot(nrm, a)});
  }
  // The largest inscribed circle touches three edge lines: enumerate triples.
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        // Solve nrm_l . c - r = d_l for l in {i,j,k}.
        const Line* L[3] = {&lines[i], &lines[j], &lines[k]};
        double m[3][4];
        for (int r = 0; r < 3; ++r) {
          m[r][0] = L[r]->nrm.x;
          m[r][1] = L[r]->nrm.y;
          m[r][2] = -1.0;
          m[r][3] = L[r]->d;
        }
        const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if (std::abs(det) < 1e-14) continue;
        auto solve_col = [&](int col) {
          double a[3][3];
          for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) a[r][c] = c == col ? m[r][3] : m[r][c];
          }
          return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                  a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                  a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])) /
                 det;
        };
        const Point2 c{solve_col(0), solve_col(1)};
        const double r = solve_col(2);
        if (r <= best) continue;
        bool inside = true;
        for (const auto& l : lines) {
          if (dot(l.nrm, c) - l.d < r * (1 - 1e-12)) {
            inside = false;
            break;
          }
        }
        if (inside) best = r;
      }
    }
  }
  return best;
}

ElementSizes element_sizes(const Mesh& mesh) {
  ElementSizes s;
  s.min_inradius = std::numeric_limits<double>::infinity();
  std::vector<Point2> v;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    v.clear();
    for (int i : mesh.element(e)) v.push_back(mesh.points()[i]);
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) s.max_diameter = std::max(s.max_diameter, distance(v[i], v[j]));
    }
    double r = 0.0;
    if (mesh.is_triangular()) {
      const double perimeter = distance(v[0], v[1]) + distance(v[1], v[2]) + distance(v[2], v[0]);
      r = 2.0 * mesh.element_area(e) / perimeter;
    } else {
      r = convex_inradius(v);
    }
    s.min_inradius = std::min(s.min_inradius, r);
  }
  return s;
}

}  // namespace lbblab::geometry

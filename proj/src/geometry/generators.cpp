#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lbblab/error.hpp"
#include "lbblab/geometry.hpp"

namespace lbblab::geometry {

namespace {

Point2 bilinear(std::span<const Point2> q, double xi, double eta) {
  return (1 - xi) * (1 - eta) * q[0] + xi * (1 - eta) * q[1] + xi * eta * q[2] + (1 - xi) * eta * q[3];
}

Point2 quad_centroid(const Mesh& m, std::size_t e) {
  Point2 c;
  for (int v : m.element(e)) c = c + 0.25 * m.points()[v];
  return c;
}

}  // namespace

Mesh rect_grid(double width, double height, int nx, int ny) {
  if (!(width > 0) || !(height > 0) || nx < 1 || ny < 1) {
    throw Error(ErrorCode::InvalidArgument, "rect_grid needs positive dimensions and counts");
  }
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      pts.push_back({width * i / nx, height * j / ny});
    }
  }
  std::vector<std::array<int, 4>> quads;
  quads.reserve(static_cast<std::size_t>(nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v = i + (nx + 1) * j;
      quads.push_back({v, v + 1, v + nx + 2, v + nx + 1});
    }
  }
  return Mesh::from_quads(std::move(pts), std::move(quads));
}

int central_quad(const Mesh& quad_mesh) {
  Point2 center;
  double area = 0.0;
  for (std::size_t e = 0; e < quad_mesh.num_elements(); ++e) {
    const double a = quad_mesh.element_area(e);
    center = center + a * quad_centroid(quad_mesh, e);
    area += a;
  }
  center = (1.0 / area) * center;
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < quad_mesh.num_elements(); ++e) {
    // Rounded so that symmetric ties resolve to the lowest index.
    const double d = std::round(distance(quad_centroid(quad_mesh, e), center) * 1e12);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(e);
    }
  }
  return best;
}

int sv_split_apex(const Mesh& quad_mesh, int q) { return static_cast<int>(quad_mesh.num_points()) + q; }

Mesh sv_split(const Mesh& quad_mesh, const SvSplitParams& params) {
  if (quad_mesh.is_triangular()) throw Error(ErrorCode::InvalidArgument, "sv_split needs a quad mesh");
  if (!(params.b >= 0.0 && params.b < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "sv_split: b must lie in [0, 1/2)");
  }
  const auto nq = static_cast<int>(quad_mesh.num_elements());
  if (params.special) {
    if (params.special->quad_index < 0 || params.special->quad_index >= nq) {
      throw Error(ErrorCode::InvalidArgument, "sv_split: special quad index out of range");
    }
    if (!(params.special->a > -0.5 && params.special->a < 0.5)) {
      throw Error(ErrorCode::InvalidArgument, "sv_split: a must lie in (-1/2, 1/2)");
    }
  }

  std::vector<Point2> pts = quad_mesh.points();
  std::vector<std::array<int, 3>> tris;
  tris.reserve(4 * static_cast<std::size_t>(nq));
  for (int q = 0; q < nq; ++q) {
    const bool special = params.special && params.special->quad_index == q;
    const double shift = special ? params.special->a : params.b;
    std::array<Point2, 4> corner;
    const auto idx = quad_mesh.element(static_cast<std::size_t>(q));
    for (int i = 0; i < 4; ++i) corner[i] = quad_mesh.points()[idx[i]];
    const int apex = static_cast<int>(pts.size());
    pts.push_back(bilinear(corner, 0.5, 0.5 + shift));
    for (int i = 0; i < 4; ++i) tris.push_back({idx[i], idx[(i + 1) % 4], apex});
  }
  return Mesh::from_triangles(std::move(pts), std::move(tris));
}

Mesh regular_polygon_mesh(int n, int levels) {
  if (n < 3 || levels < 0) throw Error(ErrorCode::InvalidArgument, "regular_polygon_mesh needs n >= 3, levels >= 0");
  std::vector<Point2> pts;
  pts.push_back({0.0, 0.0});
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    pts.push_back({std::cos(t), std::sin(t)});
  }
  std::vector<std::array<int, 3>> tris;
  for (int k = 0; k < n; ++k) tris.push_back({0, 1 + k, 1 + (k + 1) % n});
  Mesh mesh = Mesh::from_triangles(std::move(pts), std::move(tris));
  for (int l = 0; l < levels; ++l) mesh = refine_uniform(mesh).mesh;
  return mesh;
}

RefinedMesh barycentric_split(const Mesh& mesh) {
  if (!mesh.is_triangular()) throw Error(ErrorCode::InvalidMesh, "barycentric_split needs a triangle mesh");
  std::vector<Point2> pts = mesh.points();
  std::vector<std::array<int, 3>> tris;
  ParentMap parents;
  tris.reserve(3 * mesh.num_elements());
  static constexpr double ref[3][2] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  constexpr double third = 1.0 / 3.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto v = mesh.element(e);
    const int c = static_cast<int>(pts.size());
    pts.push_back(third * (pts[v[0]] + pts[v[1]] + pts[v[2]]));
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      tris.push_back({v[i], v[j], c});
      ChildCell cell;
      cell.parent = static_cast<int>(e);
      cell.origin = {ref[i][0], ref[i][1]};
      cell.jac = {ref[j][0] - ref[i][0], third - ref[i][0], ref[j][1] - ref[i][1], third - ref[i][1]};
      parents.push_back(cell);
    }
  }
  return {Mesh::from_triangles(std::move(pts), std::move(tris)), std::move(parents)};
}

RefinedMesh refine_uniform(const Mesh& mesh) {
  const auto np = static_cast<int>(mesh.num_points());
  std::vector<Point2> pts = mesh.points();
  for (const auto& e : mesh.edges()) pts.push_back(0.5 * (pts[e.lo] + pts[e.hi]));
  const int mid0 = np;

  ParentMap parents;
  if (mesh.is_triangular()) {
    std::vector<std::array<int, 3>> tris;
    tris.reserve(4 * mesh.num_elements());
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
      const auto v = mesh.element(e);
      const auto ed = mesh.element_edges(e);
      const int m01 = mid0 + ed[0];
      const int m12 = mid0 + ed[1];
      const int m20 = mid0 + ed[2];
      const int p = static_cast<int>(e);
      tris.push_back({v[0], m01, m20});
      parents.push_back({p, {0.0, 0.0}, {0.5, 0.0, 0.0, 0.5}});
      tris.push_back({m01, v[1], m12});
      parents.push_back({p, {0.5, 0.0}, {0.5, 0.0, 0.0, 0.5}});
      tris.push_back({m20, m12, v[2]});
      parents.push_back({p, {0.0, 0.5}, {0.5, 0.0, 0.0, 0.5}});
      tris.push_back({m12, m20, m01});
      parents.push_back({p, {0.5, 0.5}, {-0.5, 0.0, 0.0, -0.5}});
    }
    return {Mesh::from_triangles(std::move(pts), std::move(tris)), std::move(parents)};
  }

  std::vector<std::array<int, 4>> quads;
  quads.reserve(4 * mesh.num_elements());
  const int center0 = static_cast<int>(pts.size());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) pts.push_back(quad_centroid(mesh, e));
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto v = mesh.element(e);
    const auto ed = mesh.element_edges(e);
    const int mb = mid0 + ed[0];
    const int mr = mid0 + ed[1];
    const int mt = mid0 + ed[2];
    const int ml = mid0 + ed[3];
    const int c = center0 + static_cast<int>(e);
    const int p = static_cast<int>(e);
    quads.push_back({v[0], mb, c, ml});
    parents.push_back({p, {0.0, 0.0}, {0.5, 0.0, 0.0, 0.5}});
    quads.push_back({mb, v[1], mr, c});
    parents.push_back({p, {0.5, 0.0}, {0.5, 0.0, 0.0, 0.5}});
    quads.push_back({c, mr, v[2], mt});
    parents.push_back({p, {0.5, 0.5}, {0.5, 0.0, 0.0, 0.5}});
    quads.push_back({ml, c, mt, v[3]});
    parents.push_back({p, {0.0, 0.5}, {0.5, 0.0, 0.0, 0.5}});
  }
  return {Mesh::from_quads(std::move(pts), std::move(quads)), std::move(parents)};
}

}  // namespace lbblab::geometry

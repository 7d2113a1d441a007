#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "lbblab/error.hpp"
#include "lbblab/geometry.hpp"

namespace lbblab::geometry {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <std::size_t N>
int orient(const std::vector<Point2>& pts, std::array<int, N>& cell) {
  double twice = 0.0;
  for (std::size_t i = 0; i < N; ++i) twice += cross(pts.at(cell[i]), pts.at(cell[(i + 1) % N]));
  if (twice >= 0.0) return 0;
  // Reverse while keeping the first vertex, so a quad stays a bi-affine image.
  std::reverse(cell.begin() + 1, cell.end());
  return 1;
}

}  // namespace

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "mesh2d " << mesh.num_points() << ' ' << mesh.triangles().size() << ' ' << mesh.quads().size() << '\n';
  for (const auto& p : mesh.points()) out << fmt17(p.x) << ' ' << fmt17(p.y) << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& q : mesh.quads()) out << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
}

LoadedMesh read_mesh(std::istream& in) {
  std::string tag;
  long long np = -1, nt = -1, nq = -1;
  if (!(in >> tag >> np >> nt >> nq) || tag != "mesh2d" || np < 0 || nt < 0 || nq < 0) {
    throw Error(ErrorCode::Io, "bad mesh2d header");
  }
  if (nt > 0 && nq > 0) throw Error(ErrorCode::InvalidMesh, "mixed triangle/quad meshes are not supported");
  std::vector<Point2> pts(static_cast<std::size_t>(np));
  for (auto& p : pts) {
    if (!(in >> p.x >> p.y)) throw Error(ErrorCode::Io, "truncated point list");
  }
  int flipped = 0;
  if (nt > 0) {
    std::vector<std::array<int, 3>> tris(static_cast<std::size_t>(nt));
    for (auto& t : tris) {
      if (!(in >> t[0] >> t[1] >> t[2])) throw Error(ErrorCode::Io, "truncated triangle list");
      for (int v : t) {
        if (v < 0 || v >= np) throw Error(ErrorCode::InvalidMesh, "vertex index out of range");
      }
      flipped += orient(pts, t);
    }
    return {Mesh::from_triangles(std::move(pts), std::move(tris)), flipped};
  }
  std::vector<std::array<int, 4>> quads(static_cast<std::size_t>(nq));
  for (auto& q : quads) {
    if (!(in >> q[0] >> q[1] >> q[2] >> q[3])) throw Error(ErrorCode::Io, "truncated quad list");
    for (int v : q) {
      if (v < 0 || v >= np) throw Error(ErrorCode::InvalidMesh, "vertex index out of range");
    }
    flipped += orient(pts, q);
  }
  return {Mesh::from_quads(std::move(pts), std::move(quads)), flipped};
}

}  // namespace lbblab::geometry

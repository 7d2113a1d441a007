#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace lbblab::geometry {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
double distance(Point2 a, Point2 b);

enum class CellType { Triangle, Quad };

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  int element = 0;
};

/// Undirected mesh edge, stored with lo < hi.
struct Edge {
  int lo = 0;
  int hi = 0;
};

/// Conforming, homogeneous 2D mesh (all triangles or all bi-affine quads).
///
/// Elements are stored counterclockwise. For quads the vertex order is the
/// image of (0,0), (1,0), (1,1), (0,1) under the element's bi-affine map, so
/// the stored order fixes the reference orientation of each quad.
///
/// Construction validates the mesh and derives the edge topology; a Mesh is
/// immutable afterwards.
class Mesh {
 public:
  static Mesh from_triangles(std::vector<Point2> points, std::vector<std::array<int, 3>> triangles);
  static Mesh from_quads(std::vector<Point2> points, std::vector<std::array<int, 4>> quads);

  CellType cell_type() const { return cell_; }
  bool is_triangular() const { return cell_ == CellType::Triangle; }
  int vertices_per_element() const { return is_triangular() ? 3 : 4; }

  std::size_t num_points() const { return points_.size(); }
  std::size_t num_elements() const { return is_triangular() ? triangles_.size() : quads_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::vector<Point2>& points() const { return points_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<std::array<int, 4>>& quads() const { return quads_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const int> element(std::size_t e) const;
  /// Global edge ids of element e, local edge i joining local vertices i and i+1.
  std::span<const int> element_edges(std::size_t e) const;
  Point2 vertex(std::size_t e, int local) const { return points_[element(e)[local]]; }

  bool is_boundary_vertex(int v) const { return boundary_vertex_[v]; }
  bool is_boundary_edge(int edge) const { return boundary_edge_[edge]; }

  double element_area(std::size_t e) const;
  double area() const;

  /// New mesh with every point mapped through f (connectivity kept).
  /// Orientation-reversing maps are rejected by validation.
  Mesh transformed(const std::function<Point2(Point2)>& f) const;

 private:
  Mesh() = default;
  void build_topology();

  CellType cell_ = CellType::Triangle;
  std::vector<Point2> points_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 4>> quads_;
  std::vector<Edge> edges_;
  std::vector<int> element_edges_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<bool> boundary_vertex_;
  std::vector<bool> boundary_edge_;
};

/// Affine map from a child's reference cell into its parent's reference cell:
/// xi_parent = origin + jac * xi_child, jac stored row-major.
struct ChildCell {
  int parent = 0;
  std::array<double, 2> origin{0.0, 0.0};
  std::array<double, 4> jac{1.0, 0.0, 0.0, 1.0};

  std::array<double, 2> to_parent(double xi, double eta) const {
    return {origin[0] + jac[0] * xi + jac[1] * eta, origin[1] + jac[2] * xi + jac[3] * eta};
  }
};

using ParentMap = std::vector<ChildCell>;

/// fine->mid followed by mid->coarse.
ParentMap compose(const ParentMap& fine_to_mid, const ParentMap& mid_to_coarse);

struct RefinedMesh {
  Mesh mesh;
  ParentMap parents;
};

struct SvSplitParams {
  struct Special {
    int quad_index = 0;
    double a = 0.0;
  };
  double b = 0.0;
  std::optional<Special> special;
};

struct ElementSizes {
  double max_diameter = 0.0;
  double min_inradius = 0.0;
};

/// Uniform grid of width x height rectangles; vertices stored bottom-left,
/// bottom-right, top-right, top-left. Quad index is i + nx * j.
Mesh rect_grid(double width, double height, int nx, int ny);

/// Splits every quad into four triangles sharing the interior point that is
/// the bi-affine image of (1/2, 1/2 + b) (or 1/2 + a for the special quad).
Mesh sv_split(const Mesh& quad_mesh, const SvSplitParams& params);

/// Quad whose centroid is nearest to the centroid of the mesh (lowest index on ties).
int central_quad(const Mesh& quad_mesh);

/// Vertex index of the interior split point of quad q in sv_split's output.
int sv_split_apex(const Mesh& quad_mesh, int q);

/// Opening angles at `node` of its incident triangles, ordered so that
/// consecutive triangles share an edge.
std::vector<double> incident_angles(const Mesh& mesh, int node);

/// max_j |theta_j + theta_{j+1} - pi| over consecutive incident triangles
/// (cyclic for interior nodes). Zero means the node is singular.
double regularity_index(const Mesh& mesh, int node);

/// Minimum regularity index over all vertices with at least two incident triangles.
double mesh_regularity_index(const Mesh& mesh);

/// Center fan of the regular n-gon inscribed in the unit circle, refined
/// uniformly `levels` times.
Mesh regular_polygon_mesh(int n, int levels);

/// Red refinement for triangles, 2x2 split for quads.
RefinedMesh refine_uniform(const Mesh& mesh);

/// Barycentric (Alfeld) split: each triangle -> 3 around its centroid.
/// Centroids are appended after the existing points in element order.
RefinedMesh barycentric_split(const Mesh& mesh);

ElementSizes element_sizes(const Mesh& mesh);

/// Largest inscribed circle radius of a convex polygon given counterclockwise.
double convex_inradius(std::span<const Point2> polygon);

// Plain-text mesh2d format.
void write_mesh(std::ostream& out, const Mesh& mesh);

struct LoadedMesh {
  Mesh mesh;
  int reoriented = 0;  ///< elements flipped to counterclockwise on load
};
LoadedMesh read_mesh(std::istream& in);

}  // namespace lbblab::geometry

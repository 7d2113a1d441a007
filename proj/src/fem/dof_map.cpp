#include "lbblab/error.hpp"
#include "lbblab/fem.hpp"

namespace lbblab::fem {

DofMap::DofMap(std::shared_ptr<const geometry::Mesh> mesh, const ElementSpace& space)
    : mesh_(std::move(mesh)), space_(space), basis_(space.family, space.degree) {
  space_.validate();
  if (!mesh_) throw Error(ErrorCode::InvalidArgument, "DofMap needs a mesh");
  if (family_of(*mesh_) != space_.family) {
    throw Error(ErrorCode::DofMismatch, "element family does not match the mesh cell type");
  }
  const geometry::Mesh& m = *mesh_;
  const std::size_t ne = m.num_elements();
  const int ld = basis_.size();
  const int k = space_.degree;
  element_dofs_.assign(ne * static_cast<std::size_t>(ld), -1);

  int n_total = 0;
  if (space_.continuity == Continuity::Discontinuous) {
    n_total = static_cast<int>(ne) * ld;
    for (std::size_t i = 0; i < element_dofs_.size(); ++i) element_dofs_[i] = static_cast<int>(i);
    is_boundary_.assign(static_cast<std::size_t>(n_total), false);
  } else {
    const int nv = static_cast<int>(m.num_points());
    const int per_edge = k - 1;
    const int per_cell = ld - m.vertices_per_element() * k;  // interior nodes
    const int edge_base = nv;
    const int cell_base = nv + static_cast<int>(m.num_edges()) * per_edge;
    n_total = cell_base + static_cast<int>(ne) * per_cell;
    is_boundary_.assign(static_cast<std::size_t>(n_total), false);
    for (int v = 0; v < nv; ++v) is_boundary_[v] = m.is_boundary_vertex(v);
    for (std::size_t ed = 0; ed < m.num_edges(); ++ed) {
      if (!m.is_boundary_edge(static_cast<int>(ed))) continue;
      for (int s = 0; s < per_edge; ++s) is_boundary_[edge_base + ed * per_edge + s] = true;
    }
    const int nvpe = m.vertices_per_element();
    for (std::size_t e = 0; e < ne; ++e) {
      const auto verts = m.element(e);
      const auto edges = m.element_edges(e);
      for (int i = 0; i < ld; ++i) {
        const LocalNode& node = basis_.nodes()[i];
        int g = 0;
        switch (node.kind) {
          case NodeKind::Vertex: g = verts[node.entity]; break;
          case NodeKind::Edge: {
            // Edge nodes run from the lower to the higher global vertex.
            const int from = verts[node.entity];
            const int to = verts[(node.entity + 1) % nvpe];
            const int pos = from < to ? node.position : k - node.position;
            g = edge_base + edges[node.entity] * per_edge + (pos - 1);
            break;
          }
          case NodeKind::Interior: g = cell_base + static_cast<int>(e) * per_cell + node.entity; break;
        }
        element_dofs_[e * ld + i] = g;
      }
    }
  }

  std::vector<int> reduced(static_cast<std::size_t>(n_total), -1);
  const bool eliminate = space_.boundary == BoundaryCondition::ZeroTrace;
  for (int g = 0; g < n_total; ++g) {
    if (!(eliminate && is_boundary_[g])) reduced[g] = n_global_++;
  }
  coords_.assign(static_cast<std::size_t>(n_global_), {});
  for (std::size_t e = 0; e < ne; ++e) {
    for (int i = 0; i < ld; ++i) {
      int& d = element_dofs_[e * ld + i];
      d = reduced[d];
      if (d >= 0) {
        const auto& r = basis_.nodes()[i].ref;
        coords_[d] = map_point(m, e, r[0], r[1]).x;
      }
    }
  }
}

DofMap build_dof_map(std::shared_ptr<const geometry::Mesh> mesh, const ElementSpace& space) {
  return DofMap(std::move(mesh), space);
}

}  // namespace lbblab::fem

#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "lbblab/geometry.hpp"

namespace lbblab::fem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

enum class Family { TrianglePLagrange, QuadQLagrange };
enum class Continuity { C0, Discontinuous };
enum class BoundaryCondition { ZeroTrace, None };

/// Execution policy for the element loops. Serial is the reference path;
/// Parallel computes element blocks with OpenMP and scatters them in the
/// same order, so both produce bit-identical matrices.
enum class Exec { Serial, Parallel };

struct ElementSpace {
  Family family = Family::TrianglePLagrange;
  int degree = 1;
  Continuity continuity = Continuity::C0;
  BoundaryCondition boundary = BoundaryCondition::ZeroTrace;

  void validate() const;
  int local_dim() const;
  std::string describe() const;  // e.g. "P4", "P3dc", "Q2"
};

Family family_of(const geometry::Mesh& mesh);

// ---------------------------------------------------------------- quadrature

struct QuadratureRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  int exactness = 0;

  std::size_t size() const { return weights.size(); }
};

/// Gauss-Legendre points and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);
/// Gauss-Lobatto-Legendre nodes on [0, 1] (n >= 2 nodes, endpoints included).
std::vector<double> gauss_lobatto_nodes(int n);

/// Tensor Gauss-Legendre on the unit square, or a collapsed (Duffy) tensor
/// rule on the reference triangle (0,0), (1,0), (0,1).
QuadratureRule quad_rule(Family family, int required_exactness);

// ------------------------------------------------------- reference elements

enum class NodeKind { Vertex, Edge, Interior };

struct LocalNode {
  NodeKind kind = NodeKind::Interior;
  int entity = 0;    ///< local vertex or local edge id
  int position = 0;  ///< 1..degree-1 along the edge from its local start vertex
  std::array<double, 2> ref{0.0, 0.0};
};

/// Lagrange basis on the principal lattice (triangles) or the tensor
/// Gauss-Lobatto lattice (quads). Local nodes are ordered vertices first,
/// then edge-interior nodes per local edge, then interior nodes.
class LagrangeBasis {
 public:
  LagrangeBasis(Family family, int degree);

  Family family() const { return family_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<LocalNode>& nodes() const { return nodes_; }

  void eval(double xi, double eta, std::span<double> values) const;
  /// Reference gradients, interleaved (d/dxi, d/deta) per basis function.
  void eval_grad(double xi, double eta, std::span<double> grads) const;

 private:
  double line(int i, double t) const;
  double line_deriv(int i, double t) const;

  Family family_;
  int degree_;
  std::vector<LocalNode> nodes_;
  std::vector<std::array<int, 3>> lattice_;  // triangle multi-indices
  std::vector<std::array<int, 2>> tensor_;   // quad 1D indices
  std::vector<double> line_nodes_;
};

/// Reference-to-physical map of one element at one reference point.
struct ElementMap {
  geometry::Point2 x;
  std::array<double, 4> jac{};      ///< dx/dxi row-major
  std::array<double, 4> inv_jac{};  ///< dxi/dx row-major
  double det = 0.0;
};

ElementMap map_point(const geometry::Mesh& mesh, std::size_t element, double xi, double eta);

// ------------------------------------------------------------------ dof map

/// Global numbering of scalar basis functions. With ZeroTrace, boundary dofs
/// are eliminated: they appear as -1 in element_dofs and do not count in
/// n_global.
class DofMap {
 public:
  DofMap(std::shared_ptr<const geometry::Mesh> mesh, const ElementSpace& space);

  const geometry::Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const geometry::Mesh> mesh_ptr() const { return mesh_; }
  const ElementSpace& space() const { return space_; }
  const LagrangeBasis& basis() const { return basis_; }

  int n_global() const { return n_global_; }
  int n_total() const { return static_cast<int>(is_boundary_.size()); }
  int local_dim() const { return basis_.size(); }

  std::span<const int> element_dofs(std::size_t e) const {
    return {element_dofs_.data() + e * static_cast<std::size_t>(local_dim()), static_cast<std::size_t>(local_dim())};
  }
  /// Boundary flag per dof before elimination.
  const std::vector<bool>& is_boundary() const { return is_boundary_; }
  /// Physical node location per (kept) global dof.
  const std::vector<geometry::Point2>& coordinates() const { return coords_; }

 private:
  std::shared_ptr<const geometry::Mesh> mesh_;
  ElementSpace space_;
  LagrangeBasis basis_;
  int n_global_ = 0;
  std::vector<int> element_dofs_;
  std::vector<bool> is_boundary_;
  std::vector<geometry::Point2> coords_;
};

DofMap build_dof_map(std::shared_ptr<const geometry::Mesh> mesh, const ElementSpace& space);

// ----------------------------------------------------------------- assembly

/// A: vector Laplacian (two identical scalar blocks, component-major
/// ordering), B: divergence coupling <div v, q>, Mp: pressure mass,
/// mean: m_i = integral of psi_i.
struct AssembledSystem {
  SparseMatrix A;
  SparseMatrix B;
  SparseMatrix Mp;
  Vector mean;
  int n_velocity_scalar = 0;
};

int exactness_for(int velocity_degree, int pressure_degree);

/// Scalar stiffness of a C0 ZeroTrace space.
SparseMatrix assemble_scalar_stiffness(const DofMap& dof_v, int exactness, Exec exec = Exec::Parallel);
/// Block-diagonal vector version of the scalar stiffness.
SparseMatrix assemble_stiffness(const DofMap& dof_v, int exactness, Exec exec = Exec::Parallel);

/// B[p, c*nV + i] = integral of d(phi_i)/dx_c * psi_p, integrated on the
/// velocity mesh. When the pressure space lives on a coarser mesh, `parents`
/// links every velocity element to its pressure element.
SparseMatrix assemble_divergence(const DofMap& dof_v, const DofMap& dof_p, const geometry::ParentMap* parents,
                                 int exactness, Exec exec = Exec::Parallel);

struct PressureMass {
  SparseMatrix Mp;
  Vector mean;
};
PressureMass assemble_pressure_mass(const DofMap& dof_p, int exactness, Exec exec = Exec::Parallel);

AssembledSystem assemble_system(const DofMap& dof_v, const DofMap& dof_p, const geometry::ParentMap* parents,
                                Exec exec = Exec::Parallel);

/// `matrixcoo rows cols nnz` then `i j value` lines (0-based, row-major order).
void write_matrix_coo(std::ostream& out, const SparseMatrix& m);
SparseMatrix read_matrix_coo(std::istream& in);

}  // namespace lbblab::fem

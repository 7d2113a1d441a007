#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lbblab/fem.hpp"
#include "lbblab/geometry.hpp"
#include "lbblab/spectral.hpp"

namespace lbblab::infsup {

using fem::Vector;

/// Velocity/pressure pair on one mesh, or on a velocity mesh nested in the
/// pressure mesh through `parents`.
struct PairConfig {
  std::shared_ptr<const geometry::Mesh> velocity_mesh;
  std::shared_ptr<const geometry::Mesh> pressure_mesh;
  std::optional<geometry::ParentMap> parents;
  fem::ElementSpace velocity;
  fem::ElementSpace pressure;
  bool deflate_constants = true;
  spectral::SolverOptions solver;
  fem::Exec exec = fem::Exec::Parallel;

  static PairConfig same_mesh(std::shared_ptr<const geometry::Mesh> mesh, fem::ElementSpace velocity,
                              fem::ElementSpace pressure);
};

/// P_deg_v continuous (zero trace) / P_deg_p discontinuous on triangles,
/// Q_deg_v / Q_deg_p continuous-or-not on quads.
fem::ElementSpace velocity_space(const geometry::Mesh& mesh, int degree);
fem::ElementSpace pressure_space(const geometry::Mesh& mesh, int degree, fem::Continuity continuity);

struct Discretization {
  std::shared_ptr<const fem::DofMap> dof_v;
  std::shared_ptr<const fem::DofMap> dof_p;
  fem::AssembledSystem system;
};

Discretization discretize(const PairConfig& config);

struct BetaResult {
  double beta = 0.0;
  std::vector<double> sigma;  ///< ascending
  std::vector<double> residuals;
  Vector eigenfunction;       ///< pressure coefficients for sigma_min, |q|_Mp = 1
  int n_velocity = 0;         ///< vector velocity dofs
  int n_pressure = 0;
  double max_diameter_v = 0.0;
  double min_inradius_p = 0.0;
  int multiplicity = 1;       ///< sigma within 1e-9 of sigma_min
  std::string method;
  double tolerance = 0.0;
  std::shared_ptr<const fem::DofMap> dof_p;
  Vector mean;

  double max_residual() const;
  bool residual_ok() const { return max_residual() <= tolerance; }
};

/// beta is measured as |L^{-1} P B^T q| / |q|_Mp for the sigma_min
/// eigenvector q; this equals sqrt(sigma_min) but keeps full absolute
/// accuracy when sigma_min is near zero.
BetaResult compute_beta(const PairConfig& config, int k = 6);
BetaResult compute_beta(const Discretization& disc, const PairConfig& config, int k = 6);

std::vector<double> schur_spectrum(const PairConfig& config, int k);

struct UscReport {
  bool pass = false;
  double beta = 0.0;
  double beta_ref = 0.0;
  double slack = 0.0;
  std::string message;
};

UscReport usc_check(const PairConfig& config, double beta_ref, double slack);
UscReport usc_check(double beta, double beta_ref, double slack);

/// Flip so the first coefficient above 1e-10 * max|q| is positive.
Vector canonical_sign(const Vector& q);

/// CSV: dof,element,local_node,x,y,value (one row per pressure dof; the
/// element and local node are those of its first occurrence).
void eigenfunction_export(const BetaResult& result, std::ostream& out);
void eigenfunction_export(const BetaResult& result, const std::string& path);

std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t v);

/// One CSV row per BetaResult: hash,nV,nP,hV,rhoP,beta,sigma_1..sigma_k,
/// residual_max,residual_ok. Missing sigmas are left empty.
std::string beta_csv_header(int k);
std::string beta_csv_fields(const BetaResult& result, const std::string& hash, int k);

/// %.17g
std::string fmt(double v);

}  // namespace lbblab::infsup

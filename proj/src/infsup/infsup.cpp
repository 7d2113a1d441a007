#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "lbblab/error.hpp"
#include "lbblab/infsup.hpp"

namespace lbblab::infsup {

PairConfig PairConfig::same_mesh(std::shared_ptr<const geometry::Mesh> mesh, fem::ElementSpace velocity,
                                 fem::ElementSpace pressure) {
  PairConfig c;
  c.velocity_mesh = mesh;
  c.pressure_mesh = std::move(mesh);
  c.velocity = velocity;
  c.pressure = pressure;
  return c;
}

fem::ElementSpace velocity_space(const geometry::Mesh& mesh, int degree) {
  return {fem::family_of(mesh), degree, fem::Continuity::C0, fem::BoundaryCondition::ZeroTrace};
}

fem::ElementSpace pressure_space(const geometry::Mesh& mesh, int degree, fem::Continuity continuity) {
  return {fem::family_of(mesh), degree, continuity, fem::BoundaryCondition::None};
}

Discretization discretize(const PairConfig& config) {
  if (!config.velocity_mesh) throw Error(ErrorCode::InvalidArgument, "pair config without a velocity mesh");
  const auto pmesh = config.pressure_mesh ? config.pressure_mesh : config.velocity_mesh;
  if (config.velocity.continuity != fem::Continuity::C0 ||
      config.velocity.boundary != fem::BoundaryCondition::ZeroTrace) {
    throw Error(ErrorCode::DofMismatch, "velocity space must be C0 with ZeroTrace");
  }
  Discretization d;
  d.dof_v = std::make_shared<const fem::DofMap>(config.velocity_mesh, config.velocity);
  d.dof_p = std::make_shared<const fem::DofMap>(pmesh, config.pressure);
  const geometry::ParentMap* parents = config.parents ? &*config.parents : nullptr;
  d.system = fem::assemble_system(*d.dof_v, *d.dof_p, parents, config.exec);
  return d;
}

double BetaResult::max_residual() const {
  double r = 0.0;
  for (double x : residuals) r = std::max(r, x);
  return r;
}

Vector canonical_sign(const Vector& q) {
  if (q.size() == 0) return q;
  const double cut = 1e-10 * q.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (std::abs(q[i]) > cut) return q[i] < 0 ? Vector(-q) : q;
  }
  return q;
}

BetaResult compute_beta(const Discretization& disc, const PairConfig& config, int k) {
  const auto& sys = disc.system;
  const int np = static_cast<int>(sys.B.rows());
  const bool deflate = config.deflate_constants;
  const int dim = np - (deflate ? 1 : 0);
  // Without deflation the constant takes the first slot.
  const int first = deflate ? 0 : 1;
  if (dim <= first) throw Error(ErrorCode::DimensionZero, "pressure space has no nonconstant modes");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  const int want = std::min(k + first, dim);

  const spectral::SchurOperator s(sys.A, sys.B);
  const auto eig = spectral::smallest_generalized_eigs(s, sys.Mp, want, deflate ? &sys.mean : nullptr, config.solver);

  BetaResult r;
  r.sigma = eig.values;
  r.residuals = eig.residuals;
  r.method = eig.method;
  r.tolerance = config.solver.tolerance;
  const Vector q = eig.vectors.col(first);
  r.beta = s.half_apply(q).norm() / std::sqrt(q.dot(sys.Mp * q));
  r.eigenfunction = canonical_sign(q);
  r.n_velocity = static_cast<int>(sys.A.rows());
  r.n_pressure = np;
  r.max_diameter_v = geometry::element_sizes(disc.dof_v->mesh()).max_diameter;
  r.min_inradius_p = geometry::element_sizes(disc.dof_p->mesh()).min_inradius;
  r.multiplicity = 0;
  for (std::size_t i = first; i < r.sigma.size(); ++i) {
    if (r.sigma[i] <= r.sigma[first] + 1e-9) ++r.multiplicity;
  }
  r.dof_p = disc.dof_p;
  r.mean = sys.mean;
  return r;
}

BetaResult compute_beta(const PairConfig& config, int k) { return compute_beta(discretize(config), config, k); }

std::vector<double> schur_spectrum(const PairConfig& config, int k) { return compute_beta(config, k).sigma; }

UscReport usc_check(double beta, double beta_ref, double slack) {
  UscReport u;
  u.beta = beta;
  u.beta_ref = beta_ref;
  u.slack = slack;
  u.pass = beta <= beta_ref + slack;
  std::ostringstream msg;
  msg << "beta_n = " << fmt(beta) << (u.pass ? " <= " : " > ") << fmt(beta_ref) << " + " << fmt(slack);
  u.message = msg.str();
  return u;
}

UscReport usc_check(const PairConfig& config, double beta_ref, double slack) {
  return usc_check(compute_beta(config).beta, beta_ref, slack);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void eigenfunction_export(const BetaResult& result, std::ostream& out) {
  if (!result.dof_p || result.eigenfunction.size() == 0) {
    throw Error(ErrorCode::InvalidArgument, "result carries no eigenfunction");
  }
  const auto& dof = *result.dof_p;
  const int n = dof.n_global();
  std::vector<std::pair<int, int>> first(static_cast<std::size_t>(n), {-1, -1});
  for (std::size_t e = 0; e < dof.mesh().num_elements(); ++e) {
    const auto d = dof.element_dofs(e);
    for (int i = 0; i < dof.local_dim(); ++i) {
      if (d[i] >= 0 && first[d[i]].first < 0) first[d[i]] = {static_cast<int>(e), i};
    }
  }
  out << "dof,element,local_node,x,y,value\n";
  for (int g = 0; g < n; ++g) {
    const auto& p = dof.coordinates()[g];
    out << g << ',' << first[g].first << ',' << first[g].second << ',' << fmt(p.x) << ',' << fmt(p.y) << ','
        << fmt(result.eigenfunction[g]) << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing eigenfunction");
}

void eigenfunction_export(const BetaResult& result, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path);
  eigenfunction_export(result, f);
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string beta_csv_header(int k) {
  std::string h = "config_hash,nV,nP,hV,rhoP,beta";
  for (int i = 1; i <= k; ++i) h += ",sigma_" + std::to_string(i);
  return h + ",residual_max,residual_ok";
}

std::string beta_csv_fields(const BetaResult& r, const std::string& hash, int k) {
  std::string s = hash + ',' + std::to_string(r.n_velocity) + ',' + std::to_string(r.n_pressure) + ',' +
                  fmt(r.max_diameter_v) + ',' + fmt(r.min_inradius_p) + ',' + fmt(r.beta);
  for (int i = 0; i < k; ++i) {
    s += ',';
    if (static_cast<std::size_t>(i) < r.sigma.size()) s += fmt(r.sigma[i]);
  }
  return s + ',' + fmt(r.max_residual()) + ',' + (r.residual_ok() ? "1" : "0");
}

}  // namespace lbblab::infsup

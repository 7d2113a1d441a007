#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "lbblab/error.hpp"
#include "lbblab/fem.hpp"

namespace lbblab::fem {

namespace {

using Triplet = Eigen::Triplet<double>;
using Block = std::vector<Triplet>;

// Basis values and reference gradients tabulated at the rule's points.
struct Tabulation {
  int n = 0;
  std::vector<double> values;  // [q * n + i]
  std::vector<double> grads;   // [(q * n + i) * 2 + d]
};

Tabulation tabulate(const LagrangeBasis& basis, const QuadratureRule& rule) {
  Tabulation t;
  t.n = basis.size();
  t.values.resize(rule.size() * t.n);
  t.grads.resize(rule.size() * t.n * 2);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto& p = rule.points[q];
    basis.eval(p[0], p[1], std::span<double>(t.values).subspan(q * t.n, t.n));
    basis.eval_grad(p[0], p[1], std::span<double>(t.grads).subspan(q * t.n * 2, t.n * 2));
  }
  return t;
}

// Element loop: `kernel(e, block)` fills block e. Parallel and serial paths
// visit the same kernels and concatenate blocks in element order.
template <class Kernel>
std::vector<Block> element_loop(std::size_t ne, Exec exec, Kernel&& kernel) {
  std::vector<Block> blocks(ne);
  if (exec == Exec::Serial) {
    for (std::size_t e = 0; e < ne; ++e) kernel(e, blocks[e]);
    return blocks;
  }
  const auto n = static_cast<long long>(ne);
#pragma omp parallel for schedule(static)
  for (long long e = 0; e < n; ++e) kernel(static_cast<std::size_t>(e), blocks[static_cast<std::size_t>(e)]);
  return blocks;
}

SparseMatrix gather(int rows, int cols, const std::vector<Block>& blocks) {
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.size();
  std::vector<Triplet> all;
  all.reserve(total);
  for (const auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
  SparseMatrix m(rows, cols);
  m.setFromTriplets(all.begin(), all.end());
  m.makeCompressed();
  return m;
}

void physical_grad(const ElementMap& map, const double* gref, double& gx, double& gy) {
  gx = gref[0] * map.inv_jac[0] + gref[1] * map.inv_jac[2];
  gy = gref[0] * map.inv_jac[1] + gref[1] * map.inv_jac[3];
}

void require_c0_zero_trace(const DofMap& dof) {
  const auto& s = dof.space();
  if (s.continuity != Continuity::C0 || s.boundary != BoundaryCondition::ZeroTrace) {
    throw Error(ErrorCode::DofMismatch, "velocity space must be C0 with ZeroTrace");
  }
}

}  // namespace

int exactness_for(int velocity_degree, int pressure_degree) {
  return 2 * std::max(velocity_degree, pressure_degree) + 2;
}

SparseMatrix assemble_scalar_stiffness(const DofMap& dof_v, int exactness, Exec exec) {
  require_c0_zero_trace(dof_v);
  const auto& mesh = dof_v.mesh();
  const auto rule = quad_rule(dof_v.space().family, exactness);
  const auto tab = tabulate(dof_v.basis(), rule);
  const int n = tab.n;
  auto blocks = element_loop(mesh.num_elements(), exec, [&](std::size_t e, Block& out) {
    const auto dofs = dof_v.element_dofs(e);
    std::vector<double> local(static_cast<std::size_t>(n * n), 0.0);
    std::vector<double> g(static_cast<std::size_t>(2 * n));
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto map = map_point(mesh, e, rule.points[q][0], rule.points[q][1]);
      const double w = rule.weights[q] * map.det;
      for (int i = 0; i < n; ++i) physical_grad(map, &tab.grads[(q * n + i) * 2], g[2 * i], g[2 * i + 1]);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) local[i * n + j] += w * (g[2 * i] * g[2 * j] + g[2 * i + 1] * g[2 * j + 1]);
      }
    }
    for (int i = 0; i < n; ++i) {
      if (dofs[i] < 0) continue;
      for (int j = 0; j < n; ++j) {
        if (dofs[j] >= 0) out.emplace_back(dofs[i], dofs[j], local[i * n + j]);
      }
    }
  });
  return gather(dof_v.n_global(), dof_v.n_global(), blocks);
}

SparseMatrix assemble_stiffness(const DofMap& dof_v, int exactness, Exec exec) {
  const SparseMatrix k = assemble_scalar_stiffness(dof_v, exactness, exec);
  const int nv = dof_v.n_global();
  std::vector<Triplet> t;
  t.reserve(2 * static_cast<std::size_t>(k.nonZeros()));
  for (int c = 0; c < 2; ++c) {
    for (int col = 0; col < k.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(k, col); it; ++it) t.emplace_back(c * nv + it.row(), c * nv + it.col(), it.value());
    }
  }
  SparseMatrix a(2 * nv, 2 * nv);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  return a;
}

SparseMatrix assemble_divergence(const DofMap& dof_v, const DofMap& dof_p, const geometry::ParentMap* parents,
                                 int exactness, Exec exec) {
  require_c0_zero_trace(dof_v);
  const auto& mesh_v = dof_v.mesh();
  const bool same_mesh = dof_v.mesh_ptr() == dof_p.mesh_ptr();
  if (!same_mesh) {
    if (parents == nullptr) throw Error(ErrorCode::MissingParentMap, "pressure mesh differs from velocity mesh");
    if (parents->size() != mesh_v.num_elements()) {
      throw Error(ErrorCode::MissingParentMap, "parent map does not cover the velocity mesh");
    }
  }
  const auto rule = quad_rule(dof_v.space().family, exactness);
  const auto tab_v = tabulate(dof_v.basis(), rule);
  const auto tab_p = tabulate(dof_p.basis(), rule);
  const int nvl = tab_v.n;
  const int npl = tab_p.n;
  const int nv = dof_v.n_global();
  auto blocks = element_loop(mesh_v.num_elements(), exec, [&](std::size_t e, Block& out) {
    const auto vd = dof_v.element_dofs(e);
    const std::size_t pe = same_mesh ? e : static_cast<std::size_t>((*parents)[e].parent);
    const auto pd = dof_p.element_dofs(pe);
    std::vector<double> local(static_cast<std::size_t>(npl * 2 * nvl), 0.0);
    std::vector<double> g(static_cast<std::size_t>(2 * nvl));
    std::vector<double> psi(static_cast<std::size_t>(npl));
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto map = map_point(mesh_v, e, rule.points[q][0], rule.points[q][1]);
      const double w = rule.weights[q] * map.det;
      if (same_mesh) {
        std::copy_n(&tab_p.values[q * npl], npl, psi.begin());
      } else {
        const auto r = (*parents)[e].to_parent(rule.points[q][0], rule.points[q][1]);
        dof_p.basis().eval(r[0], r[1], psi);
      }
      for (int i = 0; i < nvl; ++i) physical_grad(map, &tab_v.grads[(q * nvl + i) * 2], g[2 * i], g[2 * i + 1]);
      for (int p = 0; p < npl; ++p) {
        const double wp = w * psi[p];
        for (int i = 0; i < nvl; ++i) {
          local[(p * 2 + 0) * nvl + i] += wp * g[2 * i];
          local[(p * 2 + 1) * nvl + i] += wp * g[2 * i + 1];
        }
      }
    }
    for (int p = 0; p < npl; ++p) {
      if (pd[p] < 0) continue;
      for (int c = 0; c < 2; ++c) {
        for (int i = 0; i < nvl; ++i) {
          if (vd[i] >= 0) out.emplace_back(pd[p], c * nv + vd[i], local[(p * 2 + c) * nvl + i]);
        }
      }
    }
  });
  return gather(dof_p.n_global(), 2 * nv, blocks);
}

PressureMass assemble_pressure_mass(const DofMap& dof_p, int exactness, Exec exec) {
  const auto& mesh = dof_p.mesh();
  const auto rule = quad_rule(dof_p.space().family, exactness);
  const auto tab = tabulate(dof_p.basis(), rule);
  const int n = tab.n;
  const std::size_t ne = mesh.num_elements();
  std::vector<std::vector<double>> local_mean(ne);
  auto blocks = element_loop(ne, exec, [&](std::size_t e, Block& out) {
    const auto dofs = dof_p.element_dofs(e);
    std::vector<double> local(static_cast<std::size_t>(n * n), 0.0);
    auto& lm = local_mean[e];
    lm.assign(static_cast<std::size_t>(n), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto map = map_point(mesh, e, rule.points[q][0], rule.points[q][1]);
      const double w = rule.weights[q] * map.det;
      const double* v = &tab.values[q * n];
      for (int i = 0; i < n; ++i) {
        lm[i] += w * v[i];
        for (int j = 0; j < n; ++j) local[i * n + j] += w * v[i] * v[j];
      }
    }
    for (int i = 0; i < n; ++i) {
      if (dofs[i] < 0) continue;
      for (int j = 0; j < n; ++j) {
        if (dofs[j] >= 0) out.emplace_back(dofs[i], dofs[j], local[i * n + j]);
      }
    }
  });
  PressureMass pm;
  pm.Mp = gather(dof_p.n_global(), dof_p.n_global(), blocks);
  pm.mean = Vector::Zero(dof_p.n_global());
  for (std::size_t e = 0; e < ne; ++e) {
    const auto dofs = dof_p.element_dofs(e);
    for (int i = 0; i < n; ++i) {
      if (dofs[i] >= 0) pm.mean[dofs[i]] += local_mean[e][i];
    }
  }
  return pm;
}

AssembledSystem assemble_system(const DofMap& dof_v, const DofMap& dof_p, const geometry::ParentMap* parents,
                                Exec exec) {
  const int ex = exactness_for(dof_v.space().degree, dof_p.space().degree);
  AssembledSystem s;
  s.A = assemble_stiffness(dof_v, ex, exec);
  s.B = assemble_divergence(dof_v, dof_p, parents, ex, exec);
  auto pm = assemble_pressure_mass(dof_p, ex, exec);
  s.Mp = std::move(pm.Mp);
  s.mean = std::move(pm.mean);
  s.n_velocity_scalar = dof_v.n_global();
  return s;
}

void write_matrix_coo(std::ostream& out, const SparseMatrix& m) {
  const Eigen::SparseMatrix<double, Eigen::RowMajor> r = m;
  out << "matrixcoo " << r.rows() << ' ' << r.cols() << ' ' << r.nonZeros() << '\n';
  char buf[64];
  for (int i = 0; i < r.outerSize(); ++i) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(r, i); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << it.row() << ' ' << it.col() << ' ' << buf << '\n';
    }
  }
}

SparseMatrix read_matrix_coo(std::istream& in) {
  std::string tag;
  long long rows = 0, cols = 0, nnz = 0;
  if (!(in >> tag >> rows >> cols >> nnz) || tag != "matrixcoo") throw Error(ErrorCode::Io, "bad matrixcoo header");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(nnz));
  for (long long k = 0; k < nnz; ++k) {
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) throw Error(ErrorCode::Io, "truncated matrixcoo body");
    t.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace lbblab::fem

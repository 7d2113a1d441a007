#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lbblab/error.hpp"
#include "lbblab/experiments.hpp"
#include "lbblab/fem.hpp"
#include "lbblab/geometry.hpp"
#include "lbblab/infsup.hpp"

namespace ex = lbblab::experiments;
namespace geo = lbblab::geometry;

namespace {

constexpr int kOk = 0, kError = 1, kCheckFailed = 2;

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw lbblab::Error(lbblab::ErrorCode::Io, "cannot open " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void spit(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw lbblab::Error(lbblab::ErrorCode::Io, "cannot write " + path);
}

struct RunFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool check = false;
};

int run_experiment(const RunFlags& flags, const std::vector<ex::Kind>& allowed) {
  auto cfg = ex::load_config(flags.config);
  if (flags.seed) {
    cfg.seed = *flags.seed;
    cfg.solver.seed = *flags.seed;
  }
  if (std::find(allowed.begin(), allowed.end(), cfg.kind) == allowed.end()) {
    throw lbblab::Error(lbblab::ErrorCode::InvalidArgument,
                        std::string("config kind '") + ex::to_string(cfg.kind) + "' does not belong to this subcommand");
  }
  const std::string prefix = flags.out.empty() ? std::string(ex::to_string(cfg.kind)) : flags.out;
  const auto result = ex::run(cfg);
  spit(prefix + ".csv", ex::write_csv(result.table));
  std::cout << "wrote " << prefix << ".csv (" << result.table.rows.size() << " rows, config " << cfg.hash() << ")\n";
  for (const auto& [suffix, svg] : ex::plots_for(cfg.kind, result.table)) {
    spit(prefix + suffix + ".svg", svg);
    std::cout << "wrote " << prefix << suffix << ".svg\n";
  }
  for (const auto& n : result.notes) std::cout << "  " << n << "\n";
  for (const auto& c : result.checks) {
    std::cout << (c.pass ? "  PASS " : "  FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
  }
  if (flags.check && !result.all_pass()) return kCheckFailed;
  return kOk;
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "JSON experiment config")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output prefix (default: the experiment kind)");
  cmd->add_option("--seed", f.seed, "override the config seed");
  cmd->add_flag("--check", f.check, "exit with 2 if any check fails");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lbblab: discrete inf-sup constants of 2D Stokes element pairs"};
  app.require_subcommand(1);

  RunFlags beta, sweep, spectrum, polygon, perturb;
  auto* c_beta = app.add_subcommand("beta", "beta_n for a single configuration");
  add_run_flags(c_beta, beta);
  auto* c_sweep = app.add_subcommand("sweep", "sv-sweep, p-sweep or h-refinement experiment");
  add_run_flags(c_sweep, sweep);
  auto* c_spec = app.add_subcommand("spectrum", "lowest Schur eigenvalues");
  add_run_flags(c_spec, spectrum);
  auto* c_poly = app.add_subcommand("polygon", "regular polygons against the disk");
  add_run_flags(c_poly, polygon);
  auto* c_pert = app.add_subcommand("perturb", "eps-closeness of polygon approximations of the disk");
  add_run_flags(c_pert, perturb);

  // mesh generation
  std::string m_kind = "rect", m_out;
  double m_w = 1.0, m_h = 1.0, m_b = 0.0;
  int m_nx = 1, m_ny = 1, m_n = 8, m_levels = 0;
  std::optional<double> m_a;
  std::optional<int> m_special;
  bool m_sv = false, m_bary = false;
  auto* c_mesh = app.add_subcommand("mesh", "write a mesh2d file");
  c_mesh->add_option("kind", m_kind, "rect | polygon")->check(CLI::IsMember({"rect", "polygon"}));
  c_mesh->add_option("--width", m_w);
  c_mesh->add_option("--height", m_h);
  c_mesh->add_option("--nx", m_nx);
  c_mesh->add_option("--ny", m_ny);
  c_mesh->add_flag("--sv", m_sv, "split quads into four triangles");
  c_mesh->add_option("--b", m_b, "split parameter b");
  c_mesh->add_option("--a", m_a, "split parameter of the special quad");
  c_mesh->add_option("--special-quad", m_special);
  c_mesh->add_option("--n", m_n, "polygon size");
  c_mesh->add_option("--levels", m_levels);
  c_mesh->add_flag("--barycentric", m_bary);
  c_mesh->add_option("--out", m_out)->required();

  // matrix export
  std::string a_mesh, a_out, a_cont = "dc";
  int a_vdeg = 4, a_pdeg = 3;
  auto* c_asm = app.add_subcommand("assemble", "write A, B, Mp and the pressure mean vector as COO text");
  c_asm->add_option("--mesh", a_mesh)->required()->check(CLI::ExistingFile);
  c_asm->add_option("--velocity-degree", a_vdeg);
  c_asm->add_option("--pressure-degree", a_pdeg);
  c_asm->add_option("--pressure-continuity", a_cont)->check(CLI::IsMember({"dc", "c0"}));
  c_asm->add_option("--out", a_out, "output prefix")->required();

  // plots from csv
  std::string p_kind, p_csv, p_out;
  auto* c_plot = app.add_subcommand("plot", "regenerate the SVG plots of a CSV table");
  c_plot->add_option("--kind", p_kind, "experiment kind of the table")->required();
  c_plot->add_option("--csv", p_csv)->required()->check(CLI::ExistingFile);
  c_plot->add_option("--out", p_out, "output prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*c_beta) return run_experiment(beta, {ex::Kind::SingleBeta});
    if (*c_sweep) return run_experiment(sweep, {ex::Kind::SvSweep, ex::Kind::PSweep, ex::Kind::HRefinement});
    if (*c_spec) return run_experiment(spectrum, {ex::Kind::Spectrum});
    if (*c_poly) return run_experiment(polygon, {ex::Kind::PolygonLimit});
    if (*c_pert) return run_experiment(perturb, {ex::Kind::PerturbRate});
    if (*c_mesh) {
      geo::Mesh mesh = m_kind == "polygon" ? ex::polygon_mesh(m_n, m_levels, m_bary) : geo::rect_grid(m_w, m_h, m_nx, m_ny);
      if (m_kind == "rect" && m_sv) {
        geo::SvSplitParams p;
        p.b = m_b;
        if (m_a) p.special = geo::SvSplitParams::Special{m_special.value_or(geo::central_quad(mesh)), *m_a};
        mesh = geo::sv_split(mesh, p);
      }
      std::ostringstream s;
      geo::write_mesh(s, mesh);
      spit(m_out, s.str());
      std::cout << "wrote " << m_out << " (" << mesh.num_elements() << " elements)\n";
      return kOk;
    }
    if (*c_asm) {
      std::istringstream in(slurp(a_mesh));
      auto loaded = geo::read_mesh(in);
      if (loaded.reoriented) std::cout << "reoriented " << loaded.reoriented << " element(s)\n";
      auto mesh = std::make_shared<const geo::Mesh>(std::move(loaded.mesh));
      const auto cont = a_cont == "dc" ? lbblab::fem::Continuity::Discontinuous : lbblab::fem::Continuity::C0;
      auto pc = lbblab::infsup::PairConfig::same_mesh(mesh, lbblab::infsup::velocity_space(*mesh, a_vdeg),
                                                      lbblab::infsup::pressure_space(*mesh, a_pdeg, cont));
      const auto d = lbblab::infsup::discretize(pc);
      const std::pair<const char*, const lbblab::fem::SparseMatrix*> mats[] = {
          {"_A.coo", &d.system.A}, {"_B.coo", &d.system.B}, {"_Mp.coo", &d.system.Mp}};
      for (const auto& [suffix, m] : mats) {
        std::ostringstream s;
        lbblab::fem::write_matrix_coo(s, *m);
        spit(a_out + suffix, s.str());
      }
      std::ostringstream mean;
      for (Eigen::Index i = 0; i < d.system.mean.size(); ++i) mean << lbblab::infsup::fmt(d.system.mean[i]) << '\n';
      spit(a_out + "_mean.txt", mean.str());
      std::cout << "nV " << d.system.A.rows() << ", nP " << d.system.B.rows() << "\n";
      return kOk;
    }
    if (*c_plot) {
      const auto table = ex::parse_csv(slurp(p_csv));
      for (const auto& [suffix, svg] : ex::plots_for(ex::kind_from_string(p_kind), table)) {
        spit(p_out + suffix + ".svg", svg);
        std::cout << "wrote " << p_out << suffix << ".svg\n";
      }
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

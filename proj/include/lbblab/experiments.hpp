#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lbblab/infsup.hpp"
#include "lbblab/spectral.hpp"

namespace lbblab::experiments {

enum class Kind { SingleBeta, SvSweep, HRefinement, PSweep, PolygonLimit, PerturbRate, Spectrum };

const char* to_string(Kind kind);
Kind kind_from_string(const std::string& s);

/// Degree rule for the pressure space of the p-version sweeps.
struct DegreeRule {
  enum class Type { Fixed, Minus, HalfCeil, LambdaSqrt } type = Type::HalfCeil;
  int d = 1;            ///< Fixed: k = d; Minus: k = n - d
  double lambda = 1.0;  ///< LambdaSqrt: k = ceil(lambda sqrt(n))

  int apply(int n) const;
  std::string name() const;  ///< "k=n-1", "k=ceil(n/2)", ...
  static DegreeRule parse(const std::string& s, double lambda);
};

struct ExperimentConfig {
  Kind kind = Kind::SingleBeta;

  // domain
  std::string domain = "rectangle";  ///< rectangle | polygon | mesh
  double width = 1.0;
  double height = 1.0;
  std::string mesh_path;
  std::vector<std::array<int, 2>> grids{{1, 1}};

  // element pair: "sv" = P_v / P_p dc on the split quad grid (or a polygon
  // mesh); "qq" = Q_v / Q_p on the quad grid.
  std::string pair = "sv";
  int velocity_degree = 4;
  int pressure_degree = 3;
  bool pressure_discontinuous = true;

  // split parameters
  double b = 0.4;
  std::optional<double> a;
  std::optional<int> special_quad;  ///< default: quad nearest the domain center
  double a_from = -0.49;
  double a_to = 0.49;
  double a_step = 0.01;
  double slope_from = 0.02;
  double slope_to = 0.10;

  // p-version
  std::vector<int> degrees;
  std::vector<DegreeRule> rules;

  // polygons
  std::vector<int> polygon_ns{8, 16, 32, 64};
  int levels = 0;
  bool barycentric = true;
  double delta_disc = 0.01;

  // nested meshes: velocity mesh = pressure mesh refined r times,
  // r = refine_offset (+ index if refine_growing)
  int refine_offset = 1;
  bool refine_growing = false;

  int density = 512;
  int k = 6;
  bool deflate = true;
  std::optional<double> reference;  ///< overrides the tabulated reference
  spectral::SolverOptions solver;
  std::uint64_t seed = 0;
  std::string eigenfunction_path;

  /// Canonical JSON (sorted keys, outputs excluded) used for the hash.
  std::string canonical() const;
  std::string hash() const;
};

/// Parses JSON text; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// ------------------------------------------------------------ tables, plots

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  ///< -1 if absent
  double number(std::size_t row, const std::string& name) const;
};

/// Comma separated, header row, LF endings. Fields never contain commas.
std::string write_csv(const Table& t);
Table parse_csv(const std::string& text);

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_y = false;  ///< y values are plotted as given, axis labelled log10
  std::vector<Series> series;
  std::vector<std::pair<std::string, double>> hlines;
};

/// Fixed 800x600 viewport, deterministic formatting.
std::string render_svg(const PlotSpec& spec);

/// Plots of one experiment kind, built from its CSV table alone:
/// (file suffix, svg text) pairs.
std::vector<std::pair<std::string, std::string>> plots_for(Kind kind, const Table& table);

// ------------------------------------------------------------------- runs

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunOutput {
  Table table;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  bool all_pass() const;
};

/// Mesh of the config for one grid entry; for polygon domains grid[0] is the
/// polygon size. `a` sets the special split point (sv pair only).
std::shared_ptr<const geometry::Mesh> make_mesh(const ExperimentConfig& cfg, const std::array<int, 2>& grid,
                                                std::optional<double> a);
infsup::PairConfig make_pair(const ExperimentConfig& cfg, std::shared_ptr<const geometry::Mesh> mesh, int velocity_degree,
                             int pressure_degree);

RunOutput run_single_beta(const ExperimentConfig& cfg);
RunOutput run_sv_sweep(const ExperimentConfig& cfg);
RunOutput run_p_sweep(const ExperimentConfig& cfg);
RunOutput run_polygon_limit(const ExperimentConfig& cfg);
RunOutput run_h_refinement(const ExperimentConfig& cfg);
RunOutput run_perturb_rate(const ExperimentConfig& cfg);
RunOutput run_spectrum(const ExperimentConfig& cfg);
RunOutput run(const ExperimentConfig& cfg);

/// Least squares y = s x + c; relative residual |y - fit| / |fit|.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double relative_residual = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Regular n-gon mesh used by the polygon runs (fan + refinement, then an
/// optional barycentric split).
geometry::Mesh polygon_mesh(int n, int levels, bool barycentric);

}  // namespace lbblab::experiments

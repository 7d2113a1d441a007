#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lbblab/error.hpp"
#include "lbblab/experiments.hpp"

namespace lbblab::experiments {

using nlohmann::json;

namespace {

constexpr std::pair<Kind, const char*> kKinds[] = {
    {Kind::SingleBeta, "single-beta"},   {Kind::SvSweep, "sv-sweep"},         {Kind::HRefinement, "h-refinement"},
    {Kind::PSweep, "p-sweep"},           {Kind::PolygonLimit, "polygon-limit"}, {Kind::PerturbRate, "perturb-rate"},
    {Kind::Spectrum, "spectrum"},
};

const char* method_name(spectral::Method m) {
  switch (m) {
    case spectral::Method::Dense: return "dense";
    case spectral::Method::Iterative: return "iterative";
    default: return "auto";
  }
}

spectral::Method method_from(const std::string& s) {
  if (s == "auto") return spectral::Method::Auto;
  if (s == "dense") return spectral::Method::Dense;
  if (s == "iterative") return spectral::Method::Iterative;
  throw Error(ErrorCode::InvalidArgument, "unknown solver method '" + s + "'");
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, "config: " + what); }

template <class T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    bad(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

const char* to_string(Kind kind) {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "?";
}

Kind kind_from_string(const std::string& s) {
  for (const auto& [k, name] : kKinds) {
    if (s == name) return k;
  }
  bad("unknown kind '" + s + "'");
}

int DegreeRule::apply(int n) const {
  switch (type) {
    case Type::Fixed: return d;
    case Type::Minus: return n - d;
    case Type::HalfCeil: return (n + 1) / 2;
    case Type::LambdaSqrt: return static_cast<int>(std::ceil(lambda * std::sqrt(static_cast<double>(n)) - 1e-12));
  }
  return 0;
}

std::string DegreeRule::name() const {
  switch (type) {
    case Type::Fixed: return "k=" + std::to_string(d);
    case Type::Minus: return "k=n-" + std::to_string(d);
    case Type::HalfCeil: return "k=ceil(n/2)";
    case Type::LambdaSqrt: {
      std::ostringstream s;
      s << "k=ceil(" << lambda << "sqrt(n))";
      return s.str();
    }
  }
  return "?";
}

DegreeRule DegreeRule::parse(const std::string& s, double lambda) {
  DegreeRule r;
  if (s == "ceil(n/2)" || s == "n/2") {
    r.type = Type::HalfCeil;
  } else if (s == "lambda*sqrt(n)" || s == "ceil(lambda*sqrt(n))") {
    r.type = Type::LambdaSqrt;
    r.lambda = lambda;
  } else if (s.rfind("n-", 0) == 0 && s.size() > 2) {
    r.type = Type::Minus;
    r.d = std::stoi(s.substr(2));
    if (r.d < 1) bad("rule n-d needs d >= 1");
  } else if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) {
    r.type = Type::Fixed;
    r.d = std::stoi(s);
  } else {
    bad("unknown degree rule '" + s + "'");
  }
  return r;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");

  static const std::set<std::string> known = {
      "kind",         "domain",      "width",          "height",         "mesh",       "grids",      "pair",
      "velocity_degree", "pressure_degree", "pressure_continuity", "b",   "a",          "special_quad",
      "a_range",      "slope_range", "degrees",        "rules",          "lambda",     "polygon_n",  "levels",
      "barycentric",  "delta_disc",  "refine_offset",  "refine_growing", "density",    "k",          "deflate",
      "reference",    "solver",      "seed",           "out",            "eigenfunction"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) bad("unknown key '" + key + "'");
  }

  ExperimentConfig c;
  c.kind = kind_from_string(get<std::string>(j, "kind", "single-beta"));
  c.domain = get<std::string>(j, "domain", c.domain);
  if (c.domain != "rectangle" && c.domain != "polygon" && c.domain != "mesh") bad("domain must be rectangle, polygon or mesh");
  c.width = get(j, "width", c.width);
  c.height = get(j, "height", c.height);
  if (!(c.width > 0.0 && c.height > 0.0)) bad("rectangle sides must be positive");
  c.mesh_path = get<std::string>(j, "mesh", "");
  if (c.domain == "mesh" && c.mesh_path.empty()) bad("mesh domain needs 'mesh'");
  if (j.contains("grids")) {
    c.grids.clear();
    for (const auto& g : j["grids"]) {
      if (!g.is_array() || g.size() != 2) bad("grids entries are [nx, ny]");
      const int nx = g[0].get<int>();
      const int ny = g[1].get<int>();
      if (nx < 1 || ny < 1) bad("grid sizes must be >= 1");
      c.grids.push_back({nx, ny});
    }
    if (c.grids.empty()) bad("grids is empty");
  }

  c.pair = get<std::string>(j, "pair", c.pair);
  if (c.pair != "sv" && c.pair != "qq") bad("pair must be sv or qq");
  c.velocity_degree = get(j, "velocity_degree", c.velocity_degree);
  c.pressure_degree = get(j, "pressure_degree", c.pressure_degree);
  const auto cont = get<std::string>(j, "pressure_continuity", "dc");
  if (cont != "dc" && cont != "c0") bad("pressure_continuity must be dc or c0");
  c.pressure_discontinuous = cont == "dc";

  c.b = get(j, "b", c.b);
  if (j.contains("a") && !j["a"].is_null()) c.a = get(j, "a", 0.0);
  if (j.contains("special_quad") && !j["special_quad"].is_null()) c.special_quad = get(j, "special_quad", 0);
  if (j.contains("a_range")) {
    const auto r = get<std::vector<double>>(j, "a_range", {});
    if (r.size() != 3 || !(r[2] > 0.0) || r[1] < r[0]) bad("a_range is [from, to, step>0]");
    c.a_from = r[0];
    c.a_to = r[1];
    c.a_step = r[2];
  }
  if (j.contains("slope_range")) {
    const auto r = get<std::vector<double>>(j, "slope_range", {});
    if (r.size() != 2 || r[1] <= r[0]) bad("slope_range is [from, to]");
    c.slope_from = r[0];
    c.slope_to = r[1];
  }

  c.degrees = get(j, "degrees", c.degrees);
  const double lambda = get(j, "lambda", 1.0);
  for (const auto& s : get<std::vector<std::string>>(j, "rules", {})) c.rules.push_back(DegreeRule::parse(s, lambda));

  c.polygon_ns = get(j, "polygon_n", c.polygon_ns);
  for (int n : c.polygon_ns) {
    if (n < 3) bad("polygon sizes must be >= 3");
  }
  c.levels = get(j, "levels", c.levels);
  if (c.levels < 0) bad("levels must be >= 0");
  c.barycentric = get(j, "barycentric", c.barycentric);
  c.delta_disc = get(j, "delta_disc", c.delta_disc);
  c.refine_offset = get(j, "refine_offset", c.refine_offset);
  c.refine_growing = get(j, "refine_growing", c.refine_growing);
  if (c.refine_offset < 0) bad("refine_offset must be >= 0");
  c.density = get(j, "density", c.density);
  c.k = get(j, "k", c.k);
  if (c.k < 1) bad("k must be >= 1");
  c.deflate = get(j, "deflate", c.deflate);
  if (j.contains("reference") && !j["reference"].is_null()) c.reference = get(j, "reference", 0.0);

  if (j.contains("solver")) {
    const auto& s = j["solver"];
    if (!s.is_object()) bad("solver must be an object");
    for (const auto& [key, value] : s.items()) {
      static const std::set<std::string> sk = {"tolerance", "dense_cap", "method", "max_basis", "block_size", "shift"};
      if (!sk.count(key)) bad("unknown solver key '" + key + "'");
    }
    c.solver.tolerance = get(s, "tolerance", c.solver.tolerance);
    c.solver.dense_cap = get(s, "dense_cap", c.solver.dense_cap);
    c.solver.method = method_from(get<std::string>(s, "method", "auto"));
    c.solver.max_basis = get(s, "max_basis", c.solver.max_basis);
    c.solver.block_size = get(s, "block_size", c.solver.block_size);
    c.solver.shift = get(s, "shift", c.solver.shift);
  }
  c.solver.dense_cap = spectral::dense_cap_from_env(c.solver.dense_cap);
  c.seed = get<std::uint64_t>(j, "seed", 0);
  c.solver.seed = c.seed;
  c.eigenfunction_path = get<std::string>(j, "eigenfunction", "");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open config " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return parse_config(s.str());
}

std::string ExperimentConfig::canonical() const {
  json j;
  j["kind"] = to_string(kind);
  j["domain"] = domain;
  j["width"] = width;
  j["height"] = height;
  j["mesh"] = mesh_path;
  json g = json::array();
  for (const auto& x : grids) g.push_back({x[0], x[1]});
  j["grids"] = g;
  j["pair"] = pair;
  j["velocity_degree"] = velocity_degree;
  j["pressure_degree"] = pressure_degree;
  j["pressure_continuity"] = pressure_discontinuous ? "dc" : "c0";
  j["b"] = b;
  j["a"] = a ? json(*a) : json(nullptr);
  j["special_quad"] = special_quad ? json(*special_quad) : json(nullptr);
  j["a_range"] = {a_from, a_to, a_step};
  j["slope_range"] = {slope_from, slope_to};
  j["degrees"] = degrees;
  json r = json::array();
  for (const auto& rule : rules) r.push_back(rule.name());
  j["rules"] = r;
  j["polygon_n"] = polygon_ns;
  j["levels"] = levels;
  j["barycentric"] = barycentric;
  j["delta_disc"] = delta_disc;
  j["refine_offset"] = refine_offset;
  j["refine_growing"] = refine_growing;
  j["density"] = density;
  j["k"] = k;
  j["deflate"] = deflate;
  j["reference"] = reference ? json(*reference) : json(nullptr);
  j["solver"] = {{"tolerance", solver.tolerance}, {"dense_cap", solver.dense_cap},
                 {"method", method_name(solver.method)}, {"max_basis", solver.max_basis},
                 {"block_size", solver.block_size}, {"shift", solver.shift}};
  j["seed"] = seed;
  return j.dump();
}

std::string ExperimentConfig::hash() const { return infsup::hex64(infsup::fnv1a64(canonical())); }

}  // namespace lbblab::experiments

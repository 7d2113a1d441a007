#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lbblab/analytic.hpp"
#include "lbblab/error.hpp"
#include "lbblab/infsup.hpp"
#include "oracles.hpp"

using namespace lbblab;
using namespace lbblab::infsup;
using geometry::Mesh;
using geometry::Point2;

namespace {

std::shared_ptr<const Mesh> share(Mesh m) { return std::make_shared<const Mesh>(std::move(m)); }

Mesh sv(double w, double h, int nx, int ny, double b, std::optional<double> a = std::nullopt) {
  const auto q = geometry::rect_grid(w, h, nx, ny);
  geometry::SvSplitParams p;
  p.b = b;
  if (a) p.special = geometry::SvSplitParams::Special{geometry::central_quad(q), *a};
  return geometry::sv_split(q, p);
}

PairConfig pair(std::shared_ptr<const Mesh> m, int vdeg, int pdeg, fem::Continuity c = fem::Continuity::Discontinuous) {
  return PairConfig::same_mesh(m, velocity_space(*m, vdeg), pressure_space(*m, pdeg, c));
}

double beta_of(std::shared_ptr<const Mesh> m, int vdeg, int pdeg, fem::Continuity c = fem::Continuity::Discontinuous) {
  return compute_beta(pair(std::move(m), vdeg, pdeg, c)).beta;
}

// sigma list for a transformed (A, B, Mp, m)
std::vector<double> sigmas(const fem::SparseMatrix& a, const fem::SparseMatrix& b, const fem::SparseMatrix& mp,
                           const fem::Vector& m, int k) {
  const spectral::SchurOperator op(a, b);
  return spectral::smallest_generalized_eigs(op, mp, k, &m).values;
}

}  // namespace

TEST_CASE("SV P4-P3dc on the 4x1 mesh matches the dense oracle") {
  const auto m = share(sv(4, 1, 4, 1, 0.4, 0.4));
  const auto cfg = pair(m, 4, 3);
  const auto d = discretize(cfg);
  const auto o = oracle::dense_sigmas(d.system.A, d.system.B, d.system.Mp, d.system.mean);
  const auto r = compute_beta(d, cfg, 6);
  CHECK(std::abs(r.beta - std::sqrt(o[0])) <= 1e-9);
  CHECK(r.beta == doctest::Approx(0.217855770135437).epsilon(1e-11));
  for (int i = 0; i < 6; ++i) CHECK(std::abs(r.sigma[i] - o[i]) <= 1e-10);
  CHECK(std::abs(r.beta * r.beta - r.sigma[0]) <= 1e-10);
  CHECK(r.residual_ok());
  CHECK(r.n_pressure == 160);
  CHECK(r.max_diameter_v > 0.0);
}

TEST_CASE("singular split point gives beta = 0") {
  const auto r = compute_beta(pair(share(sv(4, 1, 4, 1, 0.4, 0.0)), 4, 3));
  CHECK(r.beta <= 1e-6);
  const auto sq = compute_beta(pair(share(sv(1, 1, 1, 1, 0.0)), 4, 3));
  CHECK(sq.beta <= 1e-6);
}

TEST_CASE("p-version single element") {
  const auto sq = share(geometry::rect_grid(1, 1, 1, 1));
  CHECK(beta_of(sq, 3, 2) <= 1e-8);
  const auto o = oracle::single_rectangle_sigmas(1, 1, 3, 1);
  CHECK(std::abs(beta_of(sq, 3, 1) - std::sqrt(o[0])) <= 1e-9);
  // 2:1 rectangle, frozen from the Legendre oracle
  const auto r21 = share(geometry::rect_grid(2, 1, 1, 1));
  CHECK(beta_of(r21, 4, 2) == doctest::Approx(0.398801649287325).epsilon(1e-11));
  for (int n : {5, 6}) {
    const auto leg = oracle::single_rectangle_sigmas(2, 1, n, (n + 1) / 2);
    CHECK(std::abs(beta_of(r21, n, (n + 1) / 2) - std::sqrt(leg[0])) <= 1e-9);
  }
}

TEST_CASE("zero-dimensional pressure space") {
  const auto sq = share(geometry::rect_grid(1, 1, 1, 1));
  try {
    compute_beta(pair(sq, 2, 0));
    FAIL("expected DimensionZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionZero);
  }
}

TEST_CASE("constants kept: sigma_0 = 0 and the same beta") {
  const auto m = share(sv(1, 1, 2, 2, 0.25));
  auto cfg = pair(m, 3, 2);
  const auto deflated = compute_beta(cfg, 4);
  cfg.deflate_constants = false;
  const auto kept = compute_beta(cfg, 4);
  CHECK(std::abs(kept.sigma[0]) <= 1e-10);
  CHECK(std::abs(kept.beta - deflated.beta) <= 1e-9);
  CHECK(std::abs(kept.sigma[1] - deflated.sigma[0]) <= 1e-10);
}

TEST_CASE("schur spectrum bounds and the square essential interval") {
  const auto m = share(geometry::rect_grid(1, 1, 4, 4));
  const auto s = schur_spectrum(pair(m, 4, 2), 20);
  REQUIRE(s.size() == 20);
  const auto iv = analytic::cosserat_interval(std::numbers::pi / 2);
  int inside = 0;
  for (double v : s) {
    CHECK(v >= -1e-12);
    CHECK(v <= 1.0 + 1e-9);
    if (v >= iv.low && v <= iv.high) ++inside;
  }
  CHECK(inside >= 10);
}

TEST_CASE("usc checks against the reference values") {
  const auto r41 = usc_check(pair(share(sv(4, 1, 4, 1, 0.4, 0.4)), 4, 3), 0.218444, 0.005);
  CHECK(r41.pass);
  const auto q = share(geometry::rect_grid(2, 1, 2, 2));
  CHECK(usc_check(pair(q, 4, 2), 0.387262, 0.005).pass);
  const auto disk = share(geometry::regular_polygon_mesh(8, 1));
  CHECK(usc_check(pair(disk, 4, 3), 1.0 / std::sqrt(2.0), 0.0).pass);
  const auto fail = usc_check(0.5, 0.3, 0.1);
  CHECK_FALSE(fail.pass);
  CHECK(fail.message.find(">") != std::string::npos);
}

TEST_CASE("eigenfunction export") {
  const auto m = share(sv(1, 1, 2, 2, 0.25));
  const auto r = compute_beta(pair(m, 3, 2));
  const auto& q = r.eigenfunction;
  const auto d = discretize(pair(m, 3, 2));
  CHECK(q.dot(d.system.Mp * q) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(r.mean.dot(q)) <= 1e-9);
  const double cut = 1e-10 * q.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (std::abs(q[i]) > cut) {
      CHECK(q[i] > 0.0);
      break;
    }
  }
  std::stringstream out;
  eigenfunction_export(r, out);
  std::string line;
  std::getline(out, line);
  CHECK(line == "dof,element,local_node,x,y,value");
  int rows = 0;
  while (std::getline(out, line)) ++rows;
  CHECK(rows == r.n_pressure);
  BetaResult empty;
  CHECK_THROWS_AS(eigenfunction_export(empty, out), Error);
}

TEST_CASE("csv serialization") {
  CHECK(beta_csv_header(2) == "config_hash,nV,nP,hV,rhoP,beta,sigma_1,sigma_2,residual_max,residual_ok");
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  BetaResult r;
  r.beta = 0.5;
  r.sigma = {0.25};
  r.residuals = {1e-12};
  r.tolerance = 1e-10;
  r.n_velocity = 10;
  r.n_pressure = 4;
  r.max_diameter_v = 1.0;
  r.min_inradius_p = 0.25;
  CHECK(beta_csv_fields(r, "h", 2) == "h,10,4,1,0.25,0.5,0.25,,9.9999999999999998e-13,1");
}

// ---------------------------------------------------------------- invariants

TEST_CASE("basis invariance") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  const auto m = share(sv(1, 1, 2, 2, 0.3));
  const auto d = discretize(pair(m, 3, 2));
  const auto& s = d.system;
  const auto base = sigmas(s.A, s.B, s.Mp, s.mean, 4);
  for (int trial = 0; trial < 3; ++trial) {
    const int np = static_cast<int>(s.B.rows()), nv = static_cast<int>(s.A.rows());
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(np, np), h = Eigen::MatrixXd::Identity(nv, nv);
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j) g(i, j) += u(rng) / np * 4.0;
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j) h(i, j) += u(rng) / nv * 4.0;
    // q = G q', v = H v'
    const Eigen::MatrixXd a2 = h.transpose() * Eigen::MatrixXd(s.A) * h;
    const Eigen::MatrixXd b2 = g.transpose() * Eigen::MatrixXd(s.B) * h;
    const Eigen::MatrixXd m2 = g.transpose() * Eigen::MatrixXd(s.Mp) * g;
    const fem::Vector mean2 = g.transpose() * s.mean;
    const auto t = sigmas(a2.sparseView(), b2.sparseView(), m2.sparseView(), mean2, 4);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(std::sqrt(t[i]) - std::sqrt(base[i])) <= 1e-9);
  }
}

TEST_CASE("rigid motion and scaling invariance") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi), shift(-5, 5), scale(0.2, 5.0);
  const auto base = sv(2, 1, 2, 1, 0.2, 0.3);
  const double b0 = beta_of(share(base), 3, 2);
  const auto q = geometry::rect_grid(2, 1, 2, 1);
  const double bq = beta_of(share(q), 4, 2);
  for (int t = 0; t < 3; ++t) {
    const double th = ang(rng), dx = shift(rng), dy = shift(rng), s = scale(rng);
    auto motion = [&](Point2 p) {
      return Point2{std::cos(th) * p.x - std::sin(th) * p.y + dx, std::sin(th) * p.x + std::cos(th) * p.y + dy};
    };
    CHECK(std::abs(beta_of(share(base.transformed(motion)), 3, 2) - b0) <= 1e-9);
    CHECK(std::abs(beta_of(share(base.transformed([&](Point2 p) { return s * p; })), 3, 2) - b0) <= 1e-9);
    CHECK(std::abs(beta_of(share(q.transformed(motion)), 4, 2) - bq) <= 1e-9);
  }
}

TEST_CASE("monotonicity under space enlargement") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> bd(0.05, 0.45);
  for (int t = 0; t < 3; ++t) {
    const auto m = share(sv(1, 1, 2, 2, bd(rng)));
    // pressure: P1 continuous within P1dc within P2dc
    const double p1c = beta_of(m, 3, 1, fem::Continuity::C0);
    const double p1 = beta_of(m, 3, 1);
    const double p2 = beta_of(m, 3, 2);
    CHECK(p1 <= p1c + 1e-9);
    CHECK(p2 <= p1 + 1e-9);
    // velocity: P2 within P3 within P4, pressure P1dc
    const double v2 = beta_of(m, 2, 1);
    const double v4 = beta_of(m, 4, 1);
    CHECK(p1 >= v2 - 1e-9);
    CHECK(v4 >= p1 - 1e-9);
  }
  // velocity refined once over a fixed pressure mesh
  const auto coarse = share(geometry::rect_grid(1, 1, 2, 2));
  const auto r = geometry::refine_uniform(*coarse);
  auto nested = pair(coarse, 2, 1);
  nested.velocity_mesh = share(r.mesh);
  nested.velocity = velocity_space(*nested.velocity_mesh, 2);
  nested.parents = r.parents;
  CHECK(compute_beta(nested).beta >= beta_of(coarse, 2, 1) - 1e-9);
}

TEST_CASE("Rayleigh quotient consistency and deflation orthogonality") {
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  const auto m = share(sv(1, 1, 3, 3, 0.35));
  const auto cfg = pair(m, 4, 3);
  const auto d = discretize(cfg);
  const auto r = compute_beta(d, cfg, 6);
  const spectral::SchurOperator op(d.system.A, d.system.B);
  const auto& mp = d.system.Mp;
  const auto& mean = d.system.mean;
  const fem::Vector qbar = Eigen::SimplicialLLT<fem::SparseMatrix>(mp).solve(mean);
  for (int t = 0; t < 10; ++t) {
    fem::Vector q(mp.rows());
    for (auto& v : q) v = g(rng);
    q -= qbar * (mean.dot(q) / mean.dot(qbar));
    CHECK(std::abs(mean.dot(q)) <= 1e-12 * q.norm() * mean.norm());
    const double j = op.half_apply(q).norm() / std::sqrt(q.dot(mp * q));
    CHECK(j >= r.beta - 1e-10);
  }
  const auto& q = r.eigenfunction;
  CHECK(std::abs(q.dot(op.apply(q)) / q.dot(mp * q) - r.sigma[0]) <= 1e-9);
  CHECK(std::abs(mean.dot(q)) <= 1e-9);
  CHECK(r.beta >= 0.0);
  CHECK(r.beta <= 1.0);
}

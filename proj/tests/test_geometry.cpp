#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lbblab/error.hpp"
#include "lbblab/geometry.hpp"

using namespace lbblab;
using namespace lbblab::geometry;

namespace {

constexpr double kPi = std::numbers::pi;

Mesh split_square(double b) {
  SvSplitParams p;
  p.b = b;
  return sv_split(rect_grid(1, 1, 1, 1), p);
}

double deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace

TEST_CASE("rect_grid counts and layout") {
  const auto m = rect_grid(4, 1, 4, 1);
  CHECK(m.num_points() == 10);
  CHECK(m.num_elements() == 4);
  CHECK(m.cell_type() == CellType::Quad);
  for (std::size_t e = 0; e < m.num_elements(); ++e) CHECK(m.element_area(e) == doctest::Approx(1.0).epsilon(1e-14));

  const auto fine = rect_grid(4, 1, 24, 6);
  CHECK(fine.num_elements() == 144);
  CHECK(element_sizes(fine).max_diameter == doctest::Approx(std::sqrt(2.0) / 6.0).epsilon(1e-14));

  const auto one = rect_grid(2, 1, 1, 1);
  CHECK(one.num_points() == 4);
  CHECK(one.num_elements() == 1);
  CHECK(one.area() == doctest::Approx(2.0).epsilon(1e-15));
  // bottom-left, bottom-right, top-right, top-left
  CHECK(one.vertex(0, 1).x == 2.0);
  CHECK(one.vertex(0, 2).y == 1.0);
}

TEST_CASE("rect_grid rejects bad input") {
  CHECK_THROWS_AS(rect_grid(0, 1, 1, 1), Error);
  CHECK_THROWS_AS(rect_grid(1, 1, 0, 1), Error);
}

TEST_CASE("sv_split apex and angles") {
  const auto m0 = split_square(0.0);
  CHECK(m0.num_elements() == 4);
  const int apex = sv_split_apex(rect_grid(1, 1, 1, 1), 0);
  CHECK(m0.points()[apex].x == doctest::Approx(0.5));
  CHECK(m0.points()[apex].y == doctest::Approx(0.5));
  CHECK(std::abs(regularity_index(m0, apex)) <= 1e-14);

  const auto m = split_square(0.25);
  CHECK(m.points()[apex].y == doctest::Approx(0.75).epsilon(1e-15));
  auto ang = incident_angles(m, apex);
  REQUIRE(ang.size() == 4);
  double sum = 0.0;
  for (double a : ang) sum += a;
  CHECK(sum == doctest::Approx(2.0 * kPi).epsilon(1e-13));
  // oracle: angles at (1/2, 3/4) seen from the four square corners
  auto angle = [](double ax, double ay, double bx, double by) {
    return std::acos((ax * bx + ay * by) / std::hypot(ax, ay) / std::hypot(bx, by));
  };
  std::vector<double> expect = {angle(-0.5, -0.75, 0.5, -0.75), angle(0.5, -0.75, 0.5, 0.25),
                                angle(0.5, 0.25, -0.5, 0.25), angle(-0.5, 0.25, -0.5, -0.75)};
  auto sorted = ang;
  std::sort(sorted.begin(), sorted.end());
  std::sort(expect.begin(), expect.end());
  for (int i = 0; i < 4; ++i) CHECK(sorted[i] == doctest::Approx(expect[i]).epsilon(1e-12));
  // frozen degrees
  CHECK(deg(sorted[0]) == doctest::Approx(67.38).epsilon(1e-4));
  CHECK(deg(sorted[1]) == doctest::Approx(82.87).epsilon(1e-4));
  CHECK(deg(sorted[3]) == doctest::Approx(126.87).epsilon(1e-4));
  CHECK(regularity_index(m, apex) == doctest::Approx(0.5192).epsilon(1e-4));
}

TEST_CASE("sv_split with a special quad") {
  const auto quads = rect_grid(4, 1, 4, 1);
  SvSplitParams p;
  p.b = 0.4;
  p.special = SvSplitParams::Special{0, -0.1};
  const auto m = sv_split(quads, p);
  CHECK(m.num_elements() == 16);
  CHECK(m.area() == doctest::Approx(quads.area()).epsilon(1e-12));
  int at_special = 0;
  for (std::size_t q = 0; q < quads.num_elements(); ++q) {
    const auto a = m.points()[sv_split_apex(quads, static_cast<int>(q))];
    if (std::abs(a.y - 0.4) < 1e-14) ++at_special;
    if (q == 0) CHECK(a.x == doctest::Approx(0.5));
  }
  CHECK(at_special == 1);

  SvSplitParams z;
  z.b = 0.4;
  z.special = SvSplitParams::Special{central_quad(quads), 0.0};
  const auto mz = sv_split(quads, z);
  CHECK(regularity_index(mz, sv_split_apex(quads, central_quad(quads))) < 1e-14);
}

TEST_CASE("sv_split rejects degenerate parameters") {
  SvSplitParams p;
  p.b = 0.5;
  CHECK_THROWS_AS(sv_split(rect_grid(1, 1, 1, 1), p), Error);
  p.b = 0.1;
  p.special = SvSplitParams::Special{7, 0.0};
  CHECK_THROWS_AS(sv_split(rect_grid(1, 1, 1, 1), p), Error);
}

TEST_CASE("central quad picks the lowest index among ties") {
  CHECK(central_quad(rect_grid(4, 1, 24, 6)) == 59);
  CHECK(central_quad(rect_grid(4, 1, 4, 1)) == 1);
  CHECK(central_quad(rect_grid(3, 3, 3, 3)) == 4);
}

TEST_CASE("regularity index needs two incident triangles") {
  const auto m = Mesh::from_triangles({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  CHECK_THROWS_AS(regularity_index(m, 0), Error);
}

TEST_CASE("regularity index is invariant under rigid motions") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  const auto m = split_square(0.25);
  const int apex = sv_split_apex(rect_grid(1, 1, 1, 1), 0);
  for (int t = 0; t < 5; ++t) {
    const double th = u(rng);
    const auto r = m.transformed([&](Point2 p) {
      return Point2{std::cos(th) * p.x - std::sin(th) * p.y + 3.0, std::sin(th) * p.x + std::cos(th) * p.y - 1.0};
    });
    CHECK(regularity_index(r, apex) == doctest::Approx(regularity_index(m, apex)).epsilon(1e-10));
  }
}

TEST_CASE("regular polygon meshes") {
  const auto m3 = regular_polygon_mesh(3, 0);
  CHECK(m3.num_elements() == 3);
  CHECK(m3.num_points() == 4);
  const auto m8 = regular_polygon_mesh(8, 0);
  CHECK(m8.num_elements() == 8);
  for (std::size_t i = 0; i < m8.num_points(); ++i) {
    const double r = std::hypot(m8.points()[i].x, m8.points()[i].y);
    if (r > 1e-12) CHECK(r == doctest::Approx(1.0).epsilon(1e-15));
  }
  const auto m16 = regular_polygon_mesh(16, 2);
  CHECK(m16.num_elements() == 16 * 16);
  double rmax = 0.0;
  for (const auto& p : m16.points()) rmax = std::max(rmax, std::hypot(p.x, p.y));
  CHECK(rmax == doctest::Approx(1.0).epsilon(1e-15));
  for (int n : {3, 5, 8, 13}) {
    CHECK(regular_polygon_mesh(n, 1).area() == doctest::Approx(n / 2.0 * std::sin(2 * kPi / n)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(regular_polygon_mesh(2, 0), Error);
}

TEST_CASE("uniform refinement") {
  const auto one = refine_uniform(rect_grid(1, 1, 1, 1));
  CHECK(one.mesh.num_elements() == 4);
  for (const auto& c : one.parents) CHECK(c.parent == 0);

  const auto tri = split_square(0.0);
  const auto r = refine_uniform(tri);
  CHECK(r.mesh.num_elements() == 16);
  CHECK(r.mesh.area() == doctest::Approx(tri.area()).epsilon(1e-12));

  const auto twice = refine_uniform(refine_uniform(rect_grid(1, 1, 1, 1)).mesh).mesh;
  CHECK(twice.num_elements() == 16);
  for (std::size_t e = 0; e < 16; ++e) CHECK(twice.element_area(e) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  CHECK(element_sizes(twice).max_diameter == doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-14));

  // parent cells map child reference points into the parent correctly
  const auto pm = regular_polygon_mesh(5, 0);
  const auto rp = refine_uniform(pm);
  for (std::size_t c = 0; c < rp.mesh.num_elements(); ++c) {
    const auto& cell = rp.parents[c];
    for (auto [xi, eta] : {std::pair{0.2, 0.3}, std::pair{0.6, 0.1}}) {
      const auto pr = cell.to_parent(xi, eta);
      const auto a = rp.mesh.vertex(c, 0), b = rp.mesh.vertex(c, 1), d = rp.mesh.vertex(c, 2);
      const Point2 x = a + xi * (b - a) + eta * (d - a);
      const auto pa = pm.vertex(cell.parent, 0), pb = pm.vertex(cell.parent, 1), pd = pm.vertex(cell.parent, 2);
      const Point2 y = pa + pr[0] * (pb - pa) + pr[1] * (pd - pa);
      CHECK(x.x == doctest::Approx(y.x).epsilon(1e-13));
      CHECK(x.y == doctest::Approx(y.y).epsilon(1e-13));
    }
  }
}

TEST_CASE("barycentric split") {
  const auto pm = regular_polygon_mesh(6, 0);
  const auto b = barycentric_split(pm);
  CHECK(b.mesh.num_elements() == 18);
  CHECK(b.mesh.num_points() == pm.num_points() + 6);
  CHECK(b.mesh.area() == doctest::Approx(pm.area()).epsilon(1e-13));
  for (std::size_t c = 0; c < b.mesh.num_elements(); ++c) {
    const auto& cell = b.parents[c];
    const auto pr = cell.to_parent(1.0 / 3.0, 1.0 / 3.0);
    const auto a = b.mesh.vertex(c, 0), v1 = b.mesh.vertex(c, 1), v2 = b.mesh.vertex(c, 2);
    const Point2 x = a + (1.0 / 3.0) * (v1 - a) + (1.0 / 3.0) * (v2 - a);
    const auto pa = pm.vertex(cell.parent, 0), pb = pm.vertex(cell.parent, 1), pd = pm.vertex(cell.parent, 2);
    const Point2 y = pa + pr[0] * (pb - pa) + pr[1] * (pd - pa);
    CHECK(x.x == doctest::Approx(y.x).epsilon(1e-13));
    CHECK(x.y == doctest::Approx(y.y).epsilon(1e-13));
  }
}

TEST_CASE("element sizes") {
  const auto sq = element_sizes(rect_grid(1, 1, 1, 1));
  CHECK(sq.max_diameter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(sq.min_inradius == doctest::Approx(0.5).epsilon(1e-15));
  const auto tri = element_sizes(split_square(0.0));
  // right isosceles triangle with legs sqrt(2)/2: r = (2 leg - hyp) / 2
  const double leg = std::sqrt(0.5);
  CHECK(tri.min_inradius == doctest::Approx((2.0 * leg - 1.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("mesh validation") {
  // clockwise triangle
  CHECK_THROWS_AS(Mesh::from_triangles({{0, 0}, {0, 1}, {1, 0}}, {{0, 1, 2}}), Error);
  // index out of range
  CHECK_THROWS_AS(Mesh::from_triangles({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 5}}), Error);
  // degenerate
  CHECK_THROWS_AS(Mesh::from_triangles({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}), Error);
}

TEST_CASE("mesh2d round trip and orientation repair") {
  const auto m = split_square(0.25);
  std::stringstream s;
  write_mesh(s, m);
  const auto back = read_mesh(s);
  CHECK(back.reoriented == 0);
  REQUIRE(back.mesh.num_points() == m.num_points());
  for (std::size_t i = 0; i < m.num_points(); ++i) {
    CHECK(back.mesh.points()[i].x == m.points()[i].x);
    CHECK(back.mesh.points()[i].y == m.points()[i].y);
  }
  CHECK(back.mesh.triangles() == m.triangles());

  std::stringstream cw("mesh2d 3 1 0\n0 0\n0 1\n1 0\n0 1 2\n");
  const auto fixed = read_mesh(cw);
  CHECK(fixed.reoriented == 1);
  CHECK(fixed.mesh.element_area(0) == doctest::Approx(0.5));

  std::stringstream bad("mesh2d 3 1\n");
  CHECK_THROWS_AS(read_mesh(bad), Error);
}

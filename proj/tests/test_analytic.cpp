#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lbblab/analytic.hpp"
#include "lbblab/error.hpp"

using namespace lbblab;
using namespace lbblab::analytic;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("disk") {
  const auto d = beta_disk();
  CHECK(std::abs(d.value - 0.7071067811865476) <= 1e-15);
  CHECK(std::abs(d.value * d.value - 0.5) <= 1e-15);
  CHECK(d.kind == Kind::Exact);
  CHECK_FALSE(d.provenance.empty());
  for (int n : {2, 3, 7, 10})
    CHECK(std::abs(beta_epitrochoid(n, 1e-12).value - d.value) <= 1e-11);
}

TEST_CASE("epitrochoid") {
  CHECK(std::abs(beta_epitrochoid(3, 1.0).value - std::sqrt(1.0 / 6.0)) <= 1e-14);
  CHECK(std::abs(beta_epitrochoid(2, 1.0).value - std::sqrt(0.5 - 0.25 * std::sqrt(2.0))) <= 1e-14);
  CHECK(std::abs(beta_epitrochoid(2, 1.0).value - std::sin(pi / 8)) <= 1e-14);
  CHECK(std::abs(beta_epitrochoid(1000001, 1.0).value - 0.5) <= 1e-6);
  CHECK(std::abs(beta_epitrochoid(1000000, 1.0).value - 0.5) <= 1e-6);
  for (int n : {2, 3, 4, 9}) {
    double prev = 1.0;
    for (double c = 0.1; c <= 1.0; c += 0.1) {
      const double v = beta_epitrochoid(n, c).value;
      CHECK(v < prev);
      prev = v;
    }
  }
  CHECK_THROWS_AS(beta_epitrochoid(1, 0.5), Error);
  CHECK_THROWS_AS(beta_epitrochoid(3, 0.0), Error);
  CHECK_THROWS_AS(beta_epitrochoid(3, 1.5), Error);
}

TEST_CASE("polygon bounds") {
  const auto b4 = polygon_bounds(4);
  CHECK(std::abs(b4.lower.value - std::sin(pi / 8)) <= 1e-14);
  CHECK(std::abs(b4.lower.value - 0.382683) <= 1e-6);
  CHECK(b4.lower.kind == Kind::LowerBound);
  CHECK(b4.upper.kind == Kind::UpperBound);
  CHECK(std::abs(b4.upper.value - 1.0 / std::sqrt(2.0)) <= 1e-15);
  CHECK(std::abs(polygon_bounds(16).gap - pi / 32) <= 1e-15);
  CHECK(std::abs(polygon_bounds(16).gap - 0.098175) <= 1e-6);
  CHECK(std::abs(polygon_bounds(1 << 24).lower.value - 1.0 / std::sqrt(2.0)) <= 1e-7);
  double prev = 0.0;
  for (int n = 3; n <= 200; ++n) {
    const double l = polygon_bounds(n).lower.value;
    CHECK(l > prev);
    CHECK(l < 1.0 / std::sqrt(2.0));
    prev = l;
  }
  CHECK_THROWS_AS(polygon_bounds(2), Error);
}

TEST_CASE("corner bound and essential interval") {
  CHECK(std::abs(corner_upper_bound(pi / 3).value - std::sqrt(0.5 - 3.0 * std::sqrt(3.0) / (4.0 * pi))) <= 1e-14);
  CHECK(std::abs(corner_upper_bound(pi / 3).value - 0.294113) <= 2e-6);
  CHECK(std::abs(corner_upper_bound(pi).value - std::sqrt(0.5)) <= 1e-14);
  CHECK(std::abs(corner_upper_bound(pi / 2).value - std::sqrt(0.5 - 1.0 / pi)) <= 1e-14);
  CHECK(std::abs(corner_upper_bound(pi / 2).value - 0.426251) <= 1e-6);
  CHECK(corner_upper_bound(1.5 * pi).value > std::sqrt(0.5));
  for (double w = 0.05; w < pi; w += 0.05) CHECK(corner_upper_bound(w).value < 1.0 / std::sqrt(2.0));
  CHECK_THROWS_AS(corner_upper_bound(0.0), Error);
  CHECK_THROWS_AS(corner_upper_bound(2.0 * pi), Error);

  const auto sq = cosserat_interval(pi / 2);
  CHECK(std::abs(sq.low - (0.5 - 1.0 / pi)) <= 1e-15);
  CHECK(std::abs(sq.high - (0.5 + 1.0 / pi)) <= 1e-15);
  CHECK(std::abs(sq.low - 0.18169) <= 1e-5);
  CHECK(std::abs(sq.high - 0.81831) <= 1e-5);
  const auto flat = cosserat_interval(pi);
  CHECK(std::abs(flat.low - 0.5) <= 1e-15);
  CHECK(std::abs(flat.high - 0.5) <= 1e-15);
  const auto tri = cosserat_interval(pi / 3);
  CHECK(std::abs(tri.low - (0.5 - 0.413497)) <= 1e-6);
  CHECK(std::abs(tri.high - (0.5 + 0.413497)) <= 1e-6);
  // bottom of the interval is the squared corner bound for convex corners
  for (double w : {0.3, 1.0, 2.0, 3.0}) CHECK(std::abs(cosserat_interval(w).low - std::pow(corner_upper_bound(w).value, 2)) <= 1e-15);
}

TEST_CASE("rectangle references") {
  CHECK(rectangle_reference(4).value == 0.218444);
  CHECK(rectangle_reference(2).value == 0.387262);
  CHECK(rectangle_reference(4).kind == Kind::NumericalReference);
  try {
    rectangle_reference(3);
    FAIL("expected NoReference");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoReference);
  }
  // both rectangles have right-angle corners
  CHECK(rectangle_reference(4).value < corner_upper_bound(pi / 2).value);
  CHECK(rectangle_reference(2).value < corner_upper_bound(pi / 2).value);
}

TEST_CASE("kind names") {
  CHECK(std::string(to_string(Kind::Exact)) == "exact");
  CHECK(std::string(to_string(Kind::UpperBound)) == "upper_bound");
  CHECK(std::string(to_string(Kind::LowerBound)) == "lower_bound");
  CHECK(std::string(to_string(Kind::NumericalReference)) == "numerical_reference");
}

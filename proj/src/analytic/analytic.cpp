#include <cmath>
#include <numbers>

#include "lbblab/analytic.hpp"
#include "lbblab/error.hpp"

namespace lbblab::analytic {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* to_string(Kind kind) {
  switch (kind) {
    case Kind::Exact: return "exact";
    case Kind::UpperBound: return "upper_bound";
    case Kind::LowerBound: return "lower_bound";
    case Kind::NumericalReference: return "numerical_reference";
  }
  return "unknown";
}

ReferenceValue beta_disk() { return {1.0 / std::numbers::sqrt2, Kind::Exact, "unit disk, closed form"}; }

ReferenceValue beta_epitrochoid(int n, double c) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "epitrochoid needs n >= 2");
  if (!(c > 0.0 && c <= 1.0)) throw Error(ErrorCode::InvalidArgument, "epitrochoid needs 0 < c <= 1");
  const double nn = n;
  const double s = (n % 2 == 1) ? 0.5 - 0.25 * c * (1.0 + 1.0 / nn) : 0.5 - 0.25 * c * std::sqrt(1.0 + 2.0 / nn);
  return {std::sqrt(s), Kind::Exact, "epitrochoid, closed form"};
}

PolygonBounds polygon_bounds(int n) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "polygon_bounds needs n >= 3");
  PolygonBounds b;
  b.lower = {std::sin(kPi / 4.0 - kPi / (2.0 * n)), Kind::LowerBound, "regular n-gon, Horgan-Payne angle bound"};
  b.upper = {1.0 / std::numbers::sqrt2, Kind::UpperBound, "universal bound 1/sqrt(2) in 2D"};
  b.gap = kPi / (2.0 * n);
  return b;
}

ReferenceValue corner_upper_bound(double omega) {
  if (!(omega > 0.0 && omega < 2.0 * kPi)) throw Error(ErrorCode::InvalidArgument, "corner angle must be in (0, 2pi)");
  return {std::sqrt(0.5 - std::sin(omega) / (2.0 * omega)), Kind::UpperBound,
          "corner of opening omega, bottom of the essential spectrum"};
}

Interval cosserat_interval(double omega) {
  if (!(omega > 0.0 && omega < 2.0 * kPi)) throw Error(ErrorCode::InvalidArgument, "corner angle must be in (0, 2pi)");
  const double s = std::abs(std::sin(omega) / (2.0 * omega));
  return {0.5 - s, 0.5 + s};
}

ReferenceValue rectangle_reference(double aspect) {
  if (std::abs(aspect - 4.0) < 1e-12) return {0.218444, Kind::NumericalReference, "rectangle 4:1, tabulated"};
  if (std::abs(aspect - 2.0) < 1e-12) return {0.387262, Kind::NumericalReference, "rectangle 2:1, tabulated"};
  throw Error(ErrorCode::NoReference, "no tabulated value for aspect ratio");
}

}  // namespace lbblab::analytic

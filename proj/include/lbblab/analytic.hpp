#pragma once

#include <string>

namespace lbblab::analytic {

enum class Kind { Exact, UpperBound, LowerBound, NumericalReference };

const char* to_string(Kind kind);

struct ReferenceValue {
  double value = 0.0;
  Kind kind = Kind::Exact;
  std::string provenance;
};

/// 1/sqrt(2).
ReferenceValue beta_disk();

/// Interior of the epitrochoid with n lobes and amplitude c.
ReferenceValue beta_epitrochoid(int n, double c);

struct PolygonBounds {
  ReferenceValue lower;  ///< sin(pi/4 - pi/(2n))
  ReferenceValue upper;  ///< 1/sqrt(2)
  double gap = 0.0;      ///< pi/(2n), bound on the distance to the disk value
};
PolygonBounds polygon_bounds(int n);

/// sqrt(1/2 - sin(omega)/(2 omega)) for a domain with a corner of opening omega.
ReferenceValue corner_upper_bound(double omega);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};
/// Essential-spectrum interval [1/2 - s, 1/2 + s], s = |sin(omega)/(2 omega)|.
Interval cosserat_interval(double omega);

/// Tabulated values for the 4:1 and 2:1 rectangles; NoReference otherwise.
ReferenceValue rectangle_reference(double aspect);

}  // namespace lbblab::analytic

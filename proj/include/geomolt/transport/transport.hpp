#pragma once

#include "geomolt/core/metric_field.hpp"
#include "geomolt/transport/curve.hpp"

#include <optional>
#include <vector>

namespace geomolt {

struct TransportState {
  double t = 0.0;
  Vec position;
  Vec velocity;
  Vec carried;
};

struct TransportResult {
  /// Transported vector at every breakpoint (first entry is v0).
  std::vector<Vec> at_breakpoints;
  /// State after every RK4 step.
  std::vector<TransportState> samples;
  /// max_t | |v(t)|_g - |v0|_g | / |v0|_g (0 for v0 = 0).
  double norm_drift = 0.0;
};

/// RK4 for dv^l/dt = -Gamma^l_ij xdot^i v^j along the curve, steps_per_unit steps per unit parameter.
/// A singular metric on the curve raises SingularMetricError naming the parameter.
TransportResult integrate_transport(const JetSource& metric, const CurveSpec& curve, const Vec& v0,
                                    int steps_per_unit = 2000);

struct GeodesicResult {
  Vec endpoint;
  Vec velocity;
  /// The input frame parallel transported along the geodesic (columns).
  Mat frame;
  /// Arc length actually integrated; less than requested when the run left the domain.
  double length = 0.0;
  bool exited = false;
  /// max relative deviation of g(xdot, xdot) from 1.
  double speed_drift = 0.0;
};

/// Unit-speed geodesic from x in direction v (rescaled to g-length 1) for the given arc length.
/// When `domain` is set the run stops at the first step that leaves it.
GeodesicResult geodesic_shoot(const JetSource& metric, const Vec& x, const Vec& v, double length,
                              int steps_per_unit = 2000, const std::optional<Box>& domain = std::nullopt,
                              const Mat& frame = Mat());

/// Length of the curve under a metric: composite Gauss in the parameter on every segment.
double curve_length(const std::function<Mat(const Vec&)>& metric, const CurveSpec& curve, int panels_per_unit = 64);

}  // namespace geomolt

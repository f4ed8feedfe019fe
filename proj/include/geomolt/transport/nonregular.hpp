#pragma once

#include "geomolt/core/covering.hpp"
#include "geomolt/core/metric_field.hpp"
#include "geomolt/mollifier/smoothing.hpp"
#include "geomolt/transport/curve.hpp"
#include "geomolt/transport/trend.hpp"

#include <vector>

namespace geomolt {

struct TransportLimitOptions {
  /// Agreement required between successive epsilons and between the two coverings.
  double tol = 1e-2;
  int steps_per_unit = 2000;
  /// Curve points closer than this (chart distance) to a vertex are rejected.
  double vertex_clearance = 1e-6;
  std::vector<Vec> vertices;
  SmoothingOptions smoothing;
  int jobs = 1;
};

struct TransportLimit {
  std::vector<double> eps;
  /// Transported vector at the curve end, per epsilon, under each covering.
  std::vector<Vec> first;
  std::vector<Vec> second;
  /// Largest |first - second| over the epsilons, and |first[last] - first[last - 1]|.
  double covering_gap = 0.0;
  double step_gap = 0.0;
  Verdict verdict = Verdict::NotConverged;
  Vec vector;
};

/// Parallel transport of v0 along the curve under g_{eps,P} for both coverings and every eps.
/// CONVERGED when the last two epsilons agree within tol under the first covering and the two coverings
/// agree within tol at the finest eps.
TransportLimit transport_limit(const MetricField& field, const Covering& first, const Covering& second,
                               const CurveSpec& curve, const Vec& v0, const std::vector<double>& eps,
                               const TransportLimitOptions& options = {});

/// A straight chart segment crossing an edge line (2D).
struct EdgeCrossing {
  Vec start, end;
  Vec edge_point, edge_direction;
  Vec v0;
  /// Half-width of the window around the crossing, in units of the widest kernel reach (eps times the
  /// largest background axis).
  double window_factor = 3.0;
};

struct EdgeDrift {
  double epsilon = 0.0;
  double crossing_parameter = 0.0;
  double window = 0.0;
  double angle_before = 0.0;
  double angle_after = 0.0;
  /// |angle_after - angle_before| in radians; angles measured with g_eps between v and the edge direction.
  double drift = 0.0;
};

/// Angle of the transported vector with the edge just before and just after a transversal crossing.
EdgeDrift edge_angle_drift(const MetricField& field, const Covering& covering, const EdgeCrossing& crossing, double eps,
                           int steps_per_unit = 2000, const SmoothingOptions& smoothing = {});

}  // namespace geomolt

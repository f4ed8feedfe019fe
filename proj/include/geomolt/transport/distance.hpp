#pragma once

#include "geomolt/core/covering.hpp"
#include "geomolt/core/metric_field.hpp"
#include "geomolt/mollifier/smoothing.hpp"
#include "geomolt/transport/curve.hpp"
#include "geomolt/transport/trend.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace geomolt {

using MetricFn = std::function<Mat(const Vec&)>;

struct GridDistanceOptions {
  /// Cells per side of the first grid; doubled until two successive values agree within rel_tol.
  int grid_n = 32;
  int max_grid_n = 256;
  double rel_tol = 0.01;
  /// 8 (axis + diagonal moves) or 16 (adds knight moves, smaller direction bias).
  int connectivity = 8;
  int jobs = 1;
};

struct GridDistance {
  double value = 0.0;
  int grid_n = 0;
  /// False when max_grid_n was reached before two grids agreed.
  bool refined = false;
  std::vector<std::pair<int, double>> history;
};

/// Dijkstra on a grid over `region` (2D). Edge weight = metric length of the straight chart segment,
/// metric evaluated at its midpoint. x and y are snapped to the nearest nodes. Midpoints lie on the
/// half-spacing lattice, which is evaluated once per level and reused by the next finer level.
GridDistance distance_smoothed(const MetricFn& metric, const Box& region, const Vec& x, const Vec& y,
                               const GridDistanceOptions& options = {});
GridDistance distance_smoothed(const JetSource& metric, const Box& region, const Vec& x, const Vec& y,
                               const GridDistanceOptions& options = {});

/// eps -> smoothed metric.
using SmoothingFamily = std::function<SmoothedTensor(double)>;
SmoothingFamily family_wrt_P(const MetricField& field, const Covering& covering, const SmoothingOptions& options = {});
SmoothingFamily family_wrt_background(const MetricField& field, const Box& region, const SmoothingOptions& options = {});

struct DistanceEstimate {
  Vec x, y;
  std::vector<double> eps;
  std::vector<double> distances;
  std::vector<int> grid_n;
  Trend trend;
};

/// d_eps = distance_smoothed(g_eps) for every eps (run in parallel over eps), then trend classification.
/// This is the canonical-family lower bound for the sup over all approximating families.
DistanceEstimate nonregular_distance(const SmoothingFamily& family, const Box& region, const Vec& x, const Vec& y,
                                     const std::vector<double>& eps, const GridDistanceOptions& options = {});
DistanceEstimate nonregular_distance(const MetricField& field, const Covering& covering, const Vec& x, const Vec& y,
                                     const std::vector<double>& eps, const GridDistanceOptions& options = {},
                                     const SmoothingOptions& smoothing = {});

/// Length of a fixed curve under g_eps for every eps, with trend classification.
DistanceEstimate curve_length_limit(const SmoothingFamily& family, const CurveSpec& curve, const std::vector<double>& eps,
                                    int jobs = 1, int panels_per_unit = 64);

}  // namespace geomolt

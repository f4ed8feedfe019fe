#pragma once

#include "geomolt/mollifier/smoothing.hpp"
#include "geomolt/surface/surface.hpp"
#include "geomolt/transport/trend.hpp"

#include <string>
#include <vector>

namespace geomolt {

/// A single-chart metric that reproduces a piece of a surface, with a polar region O in the chart
/// (centre, radii [r0, r1], angles [a0, a1]) and the surface curvature measure of that region.
struct ChartModel {
  MetricField field;
  Vec2 center = Vec2::Zero();
  double r0 = 0.0;
  double r1 = 1.0;
  double a0 = 0.0;
  double a1 = 2.0 * kPi;
  /// Radii (from the centre) of the singular set; the quadrature is graded toward them.
  std::vector<double> feature_radii;
  /// The smoothed curvature vanishes farther than epsilon from the feature radii (flat sectors glued
  /// along straight rays stay flat under Euclidean smoothing), so only those bands are integrated.
  bool compact_support = false;
  double target = 0.0;
  std::string description;
};

/// Star of a vertex whose incident faces are flat and whose incident edges are straight near it.
/// The m corners become m chart sectors of angle 2 pi / m, each carrying the constant metric that makes
/// it isometric to a flat sector with the corner's angle. O is the chart disk of radius `radius`, which
/// contains the vertex and pieces of its straight edges, so its measure is K0(v).
ChartModel vertex_star_model(const PiecewiseSurface& s, int vertex, double radius);

/// Flat disk of radius 1 glued to a flat cylinder along its boundary circle, in one chart: the metric
/// is the identity inside the unit circle and dr^2 + dphi^2 outside it. O is the polar sector
/// r in (0.8, 1.2), |phi| < 0.2, whose measure is the crease term 1 x 0.4.
ChartModel cylinder_crease_model();

struct SmoothingConvergenceOptions {
  SmoothingOptions smoothing;
  int radial_nodes = 10;
  int angular_panels = 8;
  int angular_nodes = 6;
  int jobs = 1;
};

struct SmoothingConvergenceRow {
  double epsilon = 0.0;
  double value = 0.0;
  double error = 0.0;
};

struct SmoothingConvergence {
  std::vector<SmoothingConvergenceRow> rows;
  double target = 0.0;
  Trend trend;
};

/// Integral of K dA of a smoothed model metric over the polar region, restricted to the epsilon-bands
/// around the feature radii.
double smoothed_curvature_integral(const JetSource& g, const ChartModel& model, double epsilon,
                                   const SmoothingConvergenceOptions& options = {});

/// For each epsilon, the smoothed total curvature of O against the surface measure of O.
/// The trend is only classified with three or more epsilons.
SmoothingConvergence measure_smoothing_convergence(const ChartModel& model, const std::vector<double>& eps,
                                                   const SmoothingConvergenceOptions& options = {});

}  // namespace geomolt

#pragma once

#include "geomolt/core/covering.hpp"
#include "geomolt/mollifier/smoothing.hpp"

#include <optional>
#include <string>
#include <vector>

namespace geomolt {

enum class ConvergenceMode { AE, C0Loc, LpLoc };

struct ConvergenceOptions {
  double p = 2.0;
  /// Quadrature nodes per axis for C0/Lp norms.
  int nodes = 33;
  /// AE mode: random points in the region (ignored when `points` is set).
  int samples = 32;
  std::vector<Vec> points;
  unsigned seed = 11;
  /// Smooth with respect to this covering instead of the Euclidean background.
  std::optional<Covering> covering;
  SmoothingOptions smoothing;
};

struct ConvergenceTable {
  ConvergenceMode mode = ConvergenceMode::C0Loc;
  std::vector<double> eps;
  std::vector<double> errors;
  std::vector<std::string> warnings;

  /// Each error below its predecessor, or both under `noise_floor`.
  bool decreasing(double noise_floor = 0.0) const;
};

/// Errors of the smoothing against the source for each epsilon. A mode stronger than the field's
/// regularity tag is reported in `warnings` and computed anyway.
ConvergenceTable convergence_report(const MetricField& field, ConvergenceMode mode, const std::vector<double>& eps,
                                    const Box& region, const ConvergenceOptions& options = {});

}  // namespace geomolt

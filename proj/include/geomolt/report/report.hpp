#pragma once

#include "geomolt/core/json_io.hpp"

#include <string>
#include <vector>

namespace geomolt {

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  /// Optional text label per row (written as the first column when present).
  std::vector<std::string> labels;

  std::string to_csv() const;
};

struct Report {
  std::string study;
  std::string example;
  json params = json::object();
  std::vector<double> eps;
  std::vector<double> values;
  std::vector<double> residuals;
  std::string verdict;
  bool passed = true;
  /// One line per violated tolerance, naming the criterion.
  std::vector<std::string> failures;
  double wallclock_ms = 0.0;
  std::vector<Table> tables;
  /// Sub-reports of a suite.
  std::vector<Report> children;

  json to_json() const;
};

/// Runs one study described by a config document:
///   study     smooth | curvature | transport | distance | measure | cantor | suite
///   example   registered example name; params: builder parameters
///   eps       epsilon list (required and non-empty for every study except measure)
///   grid      quadrature nodes (smooth), grid cells (distance); jobs: worker threads
///   tolerance the study's pass threshold (see below); expect: expected trend verdict (distance)
/// Study-specific keys:
///   smooth     mode (c0 | lp | ae), region [lo_x, lo_y, hi_x, hi_y]. Pass: errors decrease, last <= tolerance.
///   curvature  surfaces: vertex (name), radius; cylinder_crease: the crease sector; metrics: region, probes.
///              Surfaces pass when |value - target| <= tolerance |target| at the finest eps; metrics when the
///              probe error of K decreases and ends below tolerance.
///   transport  crossing {start, end, edge_point, edge_direction, v0}, cell, overlap, jitter.
///              Pass: angle drift decreasing and <= tolerance at the finest eps.
///   distance   x, y (or curve [a, b] for the length of a fixed segment), region, covering cell size.
///              Pass: trend verdict equals expect; for CONVERGED runs the last value <= tolerance when given;
///              for OSCILLATING runs limsup - liminf >= amplitude when given.
///   measure    sets: region expressions; expected: values (optional, tolerance absolute).
///   cantor     resolution, delta. Pass: closure, dimension slopes and sphere totals within the fixed bounds.
///   suite      studies: list of configs, each run into its own sub-report.
Report run_report(const json& config, int jobs = 1);

/// Applies command-line overrides (eps, grid, jobs) to a config.
json with_overrides(json config, const std::vector<double>& eps, int grid);

/// Writes report.json and one CSV per table (suites: one sub-directory per study).
void write_report(const Report& report, const std::string& dir);

}  // namespace geomolt

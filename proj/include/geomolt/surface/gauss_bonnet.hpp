#pragma once

#include "geomolt/surface/measure.hpp"

namespace geomolt {

struct BoundaryTraceOptions {
  /// Step along the boundary, as a fraction of each face's chart diameter.
  double step = 2e-3;
  /// Seed grid (per side of each face's unit square) for boundary loops that cross no edge.
  int seed_grid = 64;
  MeasureOptions measure;
};

struct GaussBonnetOpen {
  /// Sum of the exterior angles plus the integral of the geodesic curvature along the boundary.
  double boundary_turning = 0.0;
  double vertex_term = 0.0;
  double edge_term = 0.0;
  double face_term = 0.0;
  int euler = 1;
  /// boundary_turning - (2 pi chi - vertex_term - edge_term - face_term)
  double residual = 0.0;
  double boundary_length = 0.0;
  int loops = 0;
  int edge_crossings = 0;
};

/// Gauss-Bonnet for an admissible open set O with chi(O u dO) = `euler`. The boundary is traced in each
/// face chart as a polygon inscribed in {level = 0}; its turning is the sum of the polygon's exterior
/// angles (including the angles where it crosses edges, measured against the edge from both sides)
/// plus the geodesic curvature of its chart-straight pieces.
GaussBonnetOpen gauss_bonnet_open(const PiecewiseSurface& s, const Region& region, int euler = 1,
                                  const BoundaryTraceOptions& options = {});

}  // namespace geomolt

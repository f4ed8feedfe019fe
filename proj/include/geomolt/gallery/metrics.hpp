#pragma once

#include "geomolt/core/metric_field.hpp"

namespace geomolt {

/// dx^2 + x^2 dy^2 on (-1, 1)^2: defined everywhere, degenerate on x = 0.
MetricField degenerate_metric();

/// dx^2 + dy^2 where 2^-(2n+1) < |x| < 2^-2n, 2(dx^2 + dy^2) where 2^-(2n+2) < |x| < 2^-(2n+1), and the
/// Euclidean metric on x = 0. The band interfaces x = +-2^-j are kept for j <= levels; finer bands are
/// still evaluated exactly but not split by the quadrature.
MetricField oscillating_metric(int levels = 30);

/// (dx^2 + dy^2) / sqrt(x^2 + y^2), Euclidean at the origin; in L^p_loc for p < 2.
MetricField inverse_radius_metric();

/// Two flat half-planes glued along the x-axis: dx^2 + dy^2 (y < 0), dx^2 + 2 dy^2 (y > 0);
/// undefined on the axis, which carries the induced metric dx^2 from both sides.
MetricField dihedral_metric();

/// A continuous test metric with kinks along x = 0.1 and y = 0: (1 + 0.5|x - 0.1| + 0.3|y|)(dx^2 + dy^2).
MetricField kinked_metric();

/// Round unit sphere dtheta^2 + sin^2(theta) dphi^2 on [0.2, pi - 0.2] x [-1.5, 1.5].
MetricField round_sphere_patch();

/// Hyperbolic plane dx^2 + e^(2x) dy^2 on (-1, 1)^2.
MetricField hyperbolic_patch();

}  // namespace geomolt

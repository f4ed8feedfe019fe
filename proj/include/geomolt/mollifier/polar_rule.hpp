#pragma once

#include "geomolt/core/metric_field.hpp"

#include <vector>

namespace geomolt {

/// Quadrature node on the unit disk; the weight includes the polar Jacobian.
struct DiskNode {
  Vec2 z;
  double w;
};

struct PolarRuleOptions {
  /// Gauss nodes on the full radius [0, 1]; sub-intervals get a proportional share (at least 4).
  int radial_nodes = 33;
  /// Trapezoid nodes on the full circle. With interfaces, each angular sub-interval gets twice its
  /// proportional share as Gauss nodes (at least 12) under a smooth-step substitution.
  int angular_nodes = 64;
};

/// Polar product rule on the unit disk: Gauss radial x trapezoid angular, no interfaces.
const std::vector<DiskNode>& plain_disk_rule(const PolarRuleOptions& options);

/// Polar rule split at every ray/interface crossing radius and at the angles where the crossing
/// pattern changes (segment endpoints, ellipse tangents, lines through or near the centre).
/// Integrands that are smooth between the interfaces are then integrated at Gauss accuracy.
std::vector<DiskNode> disk_rule(const std::vector<Interface>& interfaces, const PolarRuleOptions& options);

/// Maps chart-space interfaces into the unit disk z = A (y - x) / eps, dropping those that miss it.
std::vector<Interface> interfaces_in_unit_disk(const std::vector<Interface>& interfaces, const Vec2& x, const Mat2& a,
                                               double epsilon);

}  // namespace geomolt

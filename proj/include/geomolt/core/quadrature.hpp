#pragma once

#include "geomolt/core/types.hpp"

#include <functional>
#include <vector>

namespace geomolt {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes and weights of the n-point Gauss-Legendre rule (cached per n, thread-safe).
const GaussRule& gauss_legendre(int n);

/// n-point rule mapped to [a, b]; calls f(node, weight).
template <class F>
void for_each_gauss_node(double a, double b, int n, F&& f) {
  const GaussRule& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) f(mid + half * rule.nodes[i], half * rule.weights[i]);
}

/// A weighted point set over a region of R^n.
struct QuadratureGrid {
  std::vector<Vec> points;
  std::vector<double> weights;
};

/// Tensor-product Gauss-Legendre grid with `nodes_per_axis` nodes on each side of `box`.
QuadratureGrid tensor_gauss_grid(const Box& box, int nodes_per_axis = 33);

/// Composite tensor-product rule: `panels` panels per axis, `nodes` Gauss nodes per panel.
QuadratureGrid composite_gauss_grid(const Box& box, int panels, int nodes);

/// Integrate a scalar function over [a, b] with `panels` composite Gauss panels of `nodes` points.
double integrate_1d(const std::function<double(double)>& f, double a, double b, int panels = 1,
                    int nodes = 33);

}  // namespace geomolt

#include "geomolt/core/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace geomolt {
namespace {

GaussRule compute_rule(int n) {
  GaussRule rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {2.0};
    return rule;
  }
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

QuadratureGrid composite_gauss_grid(const Box& box, int panels, int nodes) {
  const int dim = box.dim();
  std::vector<std::vector<double>> axis_x(dim);
  std::vector<std::vector<double>> axis_w(dim);
  for (int k = 0; k < dim; ++k) {
    const double h = (box.hi[k] - box.lo[k]) / panels;
    for (int p = 0; p < panels; ++p) {
      for_each_gauss_node(box.lo[k] + p * h, box.lo[k] + (p + 1) * h, nodes, [&](double x, double w) {
        axis_x[k].push_back(x);
        axis_w[k].push_back(w);
      });
    }
  }
  QuadratureGrid grid;
  const int per_axis = panels * nodes;
  std::size_t total = 1;
  for (int k = 0; k < dim; ++k) total *= per_axis;
  grid.points.reserve(total);
  grid.weights.reserve(total);
  std::vector<int> idx(dim, 0);
  for (std::size_t c = 0; c < total; ++c) {
    Vec p(dim);
    double w = 1.0;
    for (int k = 0; k < dim; ++k) {
      p[k] = axis_x[k][idx[k]];
      w *= axis_w[k][idx[k]];
    }
    grid.points.push_back(p);
    grid.weights.push_back(w);
    for (int k = 0; k < dim; ++k) {
      if (++idx[k] < per_axis) break;
      idx[k] = 0;
    }
  }
  return grid;
}

QuadratureGrid tensor_gauss_grid(const Box& box, int nodes_per_axis) {
  return composite_gauss_grid(box, 1, nodes_per_axis);
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, int panels, int nodes) {
  double sum = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    for_each_gauss_node(a + p * h, a + (p + 1) * h, nodes, [&](double x, double w) { sum += w * f(x); });
  }
  return sum;
}

}  // namespace geomolt

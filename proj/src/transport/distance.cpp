#include "geomolt/transport/distance.hpp"

#include "geomolt/core/parallel.hpp"
#include "geomolt/transport/transport.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace geomolt {
namespace {

// Metric samples on the half-spacing lattice of an n x n grid: (2n+1)^2 symmetric 2x2 matrices.
struct HalfLattice {
  int n = 0;
  std::vector<std::array<double, 3>> g;
  const std::array<double, 3>& at(int i, int j) const { return g[static_cast<std::size_t>(i) * (2 * n + 1) + j]; }
};

HalfLattice sample_lattice(const MetricFn& metric, const Box& region, int n, const HalfLattice* coarse, int jobs) {
  HalfLattice lat;
  lat.n = n;
  const int m = 2 * n + 1;
  lat.g.resize(static_cast<std::size_t>(m) * m);
  const double hx = (region.hi[0] - region.lo[0]) / (2 * n), hy = (region.hi[1] - region.lo[1]) / (2 * n);
  parallel_for(static_cast<std::size_t>(m), jobs, [&](std::size_t i) {
    for (int j = 0; j < m; ++j) {
      auto& out = lat.g[i * m + j];
      if (coarse && i % 2 == 0 && j % 2 == 0) {
        out = coarse->at(static_cast<int>(i / 2), j / 2);
        continue;
      }
      const Mat v = metric(make_vec({region.lo[0] + i * hx, region.lo[1] + j * hy}));
      out = {v(0, 0), 0.5 * (v(0, 1) + v(1, 0)), v(1, 1)};
    }
  });
  return lat;
}

double dijkstra(const HalfLattice& lat, const Box& region, int sx, int sy, int tx, int ty, int connectivity) {
  const int n = lat.n;
  const int m = n + 1;
  const double hx = (region.hi[0] - region.lo[0]) / n, hy = (region.hi[1] - region.lo[1]) / n;
  std::vector<std::array<int, 2>> moves = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  if (connectivity == 16) {
    for (int a : {1, -1})
      for (int b : {2, -2}) {
        moves.push_back({a, b});
        moves.push_back({b, a});
      }
  } else if (connectivity != 8) {
    throw DomainError("distance_smoothed: connectivity must be 8 or 16");
  }
  // The midpoint of any move (di, dj) is the half-lattice node (2i + di, 2j + dj).
  auto edge = [&](int i, int j, int di, int dj) {
    const auto& g = lat.at(2 * i + di, 2 * j + dj);
    const double dx = di * hx, dy = dj * hy;
    const double q = g[0] * dx * dx + 2.0 * g[1] * dx * dy + g[2] * dy * dy;
    if (!(q > 0.0)) throw DomainError("distance_smoothed: metric not positive definite on the grid");
    return std::sqrt(q);
  };
  std::vector<double> dist(static_cast<std::size_t>(m) * m, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const int src = sx * m + sy, dst = tx * m + ty;
  dist[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u == dst) return d;
    const int i = u / m, j = u % m;
    for (const auto& mv : moves) {
      const int ni = i + mv[0], nj = j + mv[1];
      if (ni < 0 || nj < 0 || ni >= m || nj >= m) continue;
      const double nd = d + edge(i, j, mv[0], mv[1]);
      const int v = ni * m + nj;
      if (nd < dist[v]) {
        dist[v] = nd;
        pq.push({nd, v});
      }
    }
  }
  throw DomainError("distance_smoothed: endpoints are not connected");
}

}  // namespace

GridDistance distance_smoothed(const MetricFn& metric, const Box& region, const Vec& x, const Vec& y,
                               const GridDistanceOptions& options) {
  if (region.dim() != 2) throw DomainError("distance_smoothed: grids are 2D");
  if (!region.contains(x, 1e-12) || !region.contains(y, 1e-12)) throw DomainError("distance_smoothed: endpoints outside the region");
  if (options.grid_n < 1 || options.max_grid_n < options.grid_n) throw DomainError("distance_smoothed: bad grid sizes");
  GridDistance out;
  std::optional<HalfLattice> lat;
  for (int n = options.grid_n; n <= options.max_grid_n; n *= 2) {
    lat = sample_lattice(metric, region, n, lat ? &*lat : nullptr, options.jobs);
    auto snap = [&](const Vec& p, int k) {
      return static_cast<int>(std::lround((p[k] - region.lo[k]) / (region.hi[k] - region.lo[k]) * n));
    };
    const double d = dijkstra(*lat, region, snap(x, 0), snap(x, 1), snap(y, 0), snap(y, 1), options.connectivity);
    out.history.emplace_back(n, d);
    out.value = d;
    out.grid_n = n;
    if (out.history.size() >= 2) {
      const double prev = out.history[out.history.size() - 2].second;
      if (std::abs(d - prev) <= options.rel_tol * std::max(std::abs(d), 1e-300)) {
        out.refined = true;
        break;
      }
    }
  }
  return out;
}

GridDistance distance_smoothed(const JetSource& metric, const Box& region, const Vec& x, const Vec& y,
                               const GridDistanceOptions& options) {
  return distance_smoothed([&metric](const Vec& p) { return metric.value(p); }, region, x, y, options);
}

SmoothingFamily family_wrt_P(const MetricField& field, const Covering& covering, const SmoothingOptions& options) {
  return [field, covering, options](double eps) { return smooth_wrt_P(field, covering, eps, options); };
}

SmoothingFamily family_wrt_background(const MetricField& field, const Box& region, const SmoothingOptions& options) {
  return [field, region, options](double eps) {
    return smooth_wrt_background(field, region, eps, Background::euclidean(field.dim()), options);
  };
}

DistanceEstimate nonregular_distance(const SmoothingFamily& family, const Box& region, const Vec& x, const Vec& y,
                                     const std::vector<double>& eps, const GridDistanceOptions& options) {
  DistanceEstimate est;
  est.x = x;
  est.y = y;
  est.eps = eps;
  est.distances.assign(eps.size(), 0.0);
  est.grid_n.assign(eps.size(), 0);
  GridDistanceOptions inner = options;
  inner.jobs = 1;
  parallel_for(eps.size(), options.jobs, [&](std::size_t k) {
    const SmoothedTensor g = family(eps[k]);
    const GridDistance d = distance_smoothed(g, region, x, y, inner);
    est.distances[k] = d.value;
    est.grid_n[k] = d.grid_n;
  });
  if (eps.size() >= 3) est.trend = classify_trend(est.distances);
  return est;
}

DistanceEstimate nonregular_distance(const MetricField& field, const Covering& covering, const Vec& x, const Vec& y,
                                     const std::vector<double>& eps, const GridDistanceOptions& options,
                                     const SmoothingOptions& smoothing) {
  return nonregular_distance(family_wrt_P(field, covering, smoothing), covering.domain(), x, y, eps, options);
}

DistanceEstimate curve_length_limit(const SmoothingFamily& family, const CurveSpec& curve, const std::vector<double>& eps,
                                    int jobs, int panels_per_unit) {
  DistanceEstimate est;
  est.x = curve.position(curve.start());
  est.y = curve.position(curve.end());
  est.eps = eps;
  est.distances.assign(eps.size(), 0.0);
  est.grid_n.assign(eps.size(), 0);
  parallel_for(eps.size(), jobs, [&](std::size_t k) {
    const SmoothedTensor g = family(eps[k]);
    est.distances[k] = curve_length([&g](const Vec& p) { return g.value(p); }, curve, panels_per_unit);
  });
  if (eps.size() >= 3) est.trend = classify_trend(est.distances);
  return est;
}

}  // namespace geomolt

#pragma once

#include "geomolt/core/types.hpp"

#include "json.hpp"

#include <vector>

namespace geomolt {

/// One chart of a covering: inner box U (support of the bump), outer box O, and a constant
/// SPD matrix B giving the chart's Euclidean background metric in chart coordinates.
struct CoveringChart {
  Box inner;
  Box outer;
  Mat background;
};

/// Value, gradient and Hessian of a scalar function at a point.
struct ScalarJet {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

struct CoveringOptions {
  /// Distance between U and the boundary of O. Must exceed 1.
  double margin = 1.05;
  /// Relative spread of the per-chart background metrics; 0 keeps every background Euclidean identity.
  double jitter = 0.0;
  unsigned seed = 1;
};

/// Locally finite covering of a box by overlapping cells, with a smooth partition of unity.
class Covering {
 public:
  Covering(Box domain, std::vector<CoveringChart> charts);

  const Box& domain() const { return domain_; }
  const std::vector<CoveringChart>& charts() const { return charts_; }
  int dim() const { return domain_.dim(); }

  /// Unnormalized bump phi_w (product of exp(1/(s^2-1)) profiles scaled to U_w).
  ScalarJet bump(int w, const Vec& x, int order) const;
  /// Indices of charts whose bump is nonzero at x.
  std::vector<int> active(const Vec& x) const;
  /// psi_w for every active chart, with derivatives up to `order`. Throws if x is uncovered.
  std::vector<std::pair<int, ScalarJet>> partition(const Vec& x, int order) const;
  double psi(int w, const Vec& x) const;

  /// Chart indices grouped by identical background matrix (charts in a group share one smoothing).
  std::vector<std::vector<int>> background_groups() const;

  nlohmann::json to_json() const;
  static Covering from_json(const nlohmann::json& j);

 private:
  Box domain_;
  std::vector<CoveringChart> charts_;
};

/// Tiles `domain` with cells of side `cell_size`, each fattened by `overlap` to give U.
Covering build_covering(const Box& domain, double cell_size, double overlap, const CoveringOptions& options = {});

}  // namespace geomolt

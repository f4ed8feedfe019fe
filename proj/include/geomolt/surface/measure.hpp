#pragma once

#include "geomolt/surface/region.hpp"

#include <random>
#include <vector>

namespace geomolt {

struct MeasureOptions {
  /// Base composite grid on each face's unit square, refined near region boundaries.
  int base_panels = 8;
  int max_depth = 8;
  int base_nodes = 6;
  int leaf_nodes = 4;
  int edge_panels = 16;
  int edge_nodes = 8;
  /// Samples per edge when locating region boundary crossings.
  int edge_samples = 720;
  int jobs = 1;
};

/// Curvature measure of a set: K+ and K- parts, their difference, and the vertex/edge/face split.
struct CurvatureMeasure {
  double plus = 0.0;
  double minus = 0.0;
  double value = 0.0;
  double vertex_part = 0.0;
  double edge_part = 0.0;
  double face_part = 0.0;
};

/// Quadrature for curvature measures on one surface. Face cells are refined wherever any of the hint
/// regions may have boundary, and edge panels are split at their crossings, so every region built from
/// the hints by set operations is integrated with the same nodes (valuation identities hold to round-off).
/// The surface must outlive the evaluator.
class MeasureEvaluator {
 public:
  MeasureEvaluator(const PiecewiseSurface& s, const std::vector<Region>& hints, const MeasureOptions& options = {});

  CurvatureMeasure measure(const Region& r) const;
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    SurfacePoint p;
    double k;  // K0, K1 or K2
    double w;  // 1, ds or dA quadrature weight
    int part;  // 0 vertex, 1 edge, 2 face
  };
  const PiecewiseSurface* surface_;
  std::vector<Node> nodes_;
};

/// Rejects sets whose boundary passes through a vertex, runs along or touches an edge, or crosses an
/// edge tangentially. Punctures (subtracted vertices) are allowed.
void check_admissible(const PiecewiseSurface& s, const Region& r, int samples = 720);

/// K+-(O) = sum of K0+- over O n V + integral of K1+- ds over O n E + integral of K2+- dA over O n F.
/// A bare point(v) region is the singleton {v} and gets the vertex rule.
CurvatureMeasure measure_on_open(const PiecewiseSurface& s, const Region& r, const MeasureOptions& options = {});

/// The vertex rule: measure of the singleton {v}.
CurvatureMeasure vertex_measure(const PiecewiseSurface& s, int vertex);

/// Measure of an open edge arc.
CurvatureMeasure edge_measure(const PiecewiseSurface& s, int edge, int panels = 16, int nodes = 8);

/// Random ambient ball or box around a random surface point; resampled until admissible.
Region random_admissible_region(const PiecewiseSurface& s, std::mt19937_64& rng, double min_size = 0.15,
                                double max_size = 0.6);

struct GeneratorAxiomsReport {
  int pairs = 0;
  double valuation_error = 0.0;        // max over pairs and +/- of |K(A u B) + K(A n B) - K(A) - K(B)|
  double additivity_error = 0.0;       // max over disjoint pairs of |K(A u B) - K(A) - K(B)|
  double monotonicity_violation = 0.0; // max of K(A n B) - K(A) and K(A) - K(A u B), for K+ and K-
  double min_part = 0.0;               // smallest K+ or K- seen (must be >= 0)
  double shrinking_final = 0.0;        // largest |K|(ball of radius r_min) over the shrinking sequences
  double decomposition_error = 0.0;    // max |K(O) - K(O n V) - K(O n E) - K(O n F)|
  bool ok(double tol = 1e-6) const;
};

/// Checks the measure-generator properties on `pairs` random admissible pairs.
GeneratorAxiomsReport generator_axioms_check(const PiecewiseSurface& s, int pairs, unsigned seed = 1,
                                             const MeasureOptions& options = {});

/// Same checks on explicitly given pairs.
GeneratorAxiomsReport generator_axioms_check(const PiecewiseSurface& s, const std::vector<std::pair<Region, Region>>& pairs,
                                             const MeasureOptions& options = {});

}  // namespace geomolt

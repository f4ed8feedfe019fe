#pragma once

#include "geomolt/core/connection.hpp"
#include "geomolt/core/covering.hpp"
#include "geomolt/core/metric_field.hpp"

#include <vector>

namespace geomolt {

struct ConnectionAt {
  Vec point;
  Christoffel gamma;
};

/// Christoffel symbols of a smooth(ed) metric at x. Singular metric matrices raise SingularMetricError.
ConnectionAt christoffel(const JetSource& metric, const Vec& x);

/// Curvature tensor R^l_kij with R(d_i, d_j) d_k = R^l_kij d_l and R(u,v) = [nabla_u, nabla_v] - nabla_[u,v].
struct CurvatureAt {
  Vec point;
  int dim = 0;
  Mat metric;
  Christoffel gamma;
  /// Flattened R^l_kij, index ((l*n + k)*n + i)*n + j.
  std::vector<double> r;
  /// Ric(u, v) = sum_i <R(w_i, u) v, w_i>; in coordinates Ric_ab = sum_i R^i_bia.
  Mat ricci;
  double scalar = 0.0;
  /// n = 2 only: g_1l R^l_212 / det g.
  double gaussian = 0.0;

  double operator()(int l, int k, int i, int j) const { return r[((l * dim + k) * dim + i) * dim + j]; }
};

CurvatureAt curvature(const JetSource& metric, const Vec& x);
/// Same computation from an already evaluated second-order jet.
CurvatureAt curvature_from_jet(const TensorJet& jet, const Vec& x);

/// Gram-Schmidt of the columns of `raw` with respect to `metric`; orientation preserved.
Mat orthonormalize(const Mat& metric, const Mat& raw);

/// Coefficient (-1)^(k/2) / ((n-k)! 2^k pi^(k/2) (k/2)!) of the Lipschitz-Killing form.
double lk_coefficient(int n, int kappa);

/// Density of the kappa-th Lipschitz-Killing form with respect to dx_1...dx_n, from curvature forms
/// in the frame obtained by orthonormalizing `frame` (identity if empty). Odd kappa gives exactly 0.
double lk_density(const CurvatureAt& c, int kappa, const Mat& frame = Mat());
double lk_density(const JetSource& metric, int kappa, const Vec& x);
/// Integral of the density over a box by tensor Gauss quadrature.
double lk_measure(const JetSource& metric, const Box& region, int kappa, int nodes = 33);

/// Integral of K dV (n = 2) over a box by tensor Gauss quadrature.
double total_gaussian_curvature(const JetSource& metric, const Box& region, int nodes = 33);

struct C2Row {
  double epsilon = 0.0;
  double christoffel_error = 0.0;  // max component |Gamma_eps - Gamma| over probes
  double curvature_error = 0.0;    // max component |R_eps - R|
  double gaussian_error = 0.0;     // n = 2: max |K_eps - K|
};

/// Connection and curvature of the covering smoothing against those of a C^2 metric at the probe points.
std::vector<C2Row> c2_convergence_check(const MetricField& metric, const Covering& covering,
                                        const std::vector<double>& eps, const std::vector<Vec>& probes);

}  // namespace geomolt

#include "geomolt/riemann/curvature.hpp"

#include "geomolt/core/quadrature.hpp"
#include "geomolt/mollifier/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace geomolt {
namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

int permutation_sign(const std::vector<int>& p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[i] > p[j]) sign = -sign;
    }
  }
  return sign;
}

std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

ConnectionAt christoffel(const JetSource& metric, const Vec& x) { return {x, christoffel_from_jet(metric.jet(x, 1))}; }

CurvatureAt curvature_from_jet(const TensorJet& jet, const Vec& x) {
  if (jet.order < 2) throw DomainError("curvature: jet needs second derivatives");
  const int n = jet.dim();
  CurvatureAt c;
  c.point = x;
  c.dim = n;
  c.metric = jet.value;
  c.gamma = christoffel_from_jet(jet);
  const Mat ginv = checked_inverse(jet.value);
  // dgamma[p][k](i, j) = d_p Gamma^k_ij.
  std::array<std::array<Mat, kMaxDim>, kMaxDim> dgamma;
  for (int p = 0; p < n; ++p) {
    const Mat dginv = -ginv * jet.d1[p] * ginv;
    for (int k = 0; k < n; ++k) dgamma[p][k] = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int m = 0; m < n; ++m) {
          const double lowered = 0.5 * (jet.d1[i](j, m) + jet.d1[j](m, i) - jet.d1[m](i, j));
          const double dlowered = 0.5 * (jet.d2[p][i](j, m) + jet.d2[p][j](m, i) - jet.d2[p][m](i, j));
          for (int k = 0; k < n; ++k) dgamma[p][k](i, j) += dginv(k, m) * lowered + ginv(k, m) * dlowered;
        }
      }
    }
  }
  c.r.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
  const auto& g = c.gamma.gamma;
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double v = dgamma[i][l](j, k) - dgamma[j][l](i, k);
          for (int m = 0; m < n; ++m) v += g[m](j, k) * g[l](i, m) - g[m](i, k) * g[l](j, m);
          c.r[((l * n + k) * n + i) * n + j] = v;
        }
      }
    }
  }
  c.ricci = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int i = 0; i < n; ++i) c.ricci(a, b) += c(i, b, i, a);
    }
  }
  c.scalar = (ginv.cwiseProduct(c.ricci)).sum();
  if (n == 2) {
    double num = 0.0;
    for (int l = 0; l < 2; ++l) num += jet.value(0, l) * c(l, 1, 0, 1);
    c.gaussian = num / jet.value.determinant();
  }
  return c;
}

CurvatureAt curvature(const JetSource& metric, const Vec& x) { return curvature_from_jet(metric.jet(x, 2), x); }

Mat orthonormalize(const Mat& metric, const Mat& raw) {
  const int n = static_cast<int>(raw.cols());
  Eigen::FullPivLU<Mat> lu(raw);
  if (raw.rows() != metric.rows() || lu.rank() < n) throw DomainError("orthonormalize: degenerate input frame");
  Mat out = raw;
  for (int i = 0; i < n; ++i) {
    // Two passes of modified Gram-Schmidt keep the gram matrix at round-off level.
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < i; ++j) out.col(i) -= out.col(j).dot(metric * out.col(i)) * out.col(j);
    }
    const double len2 = out.col(i).dot(metric * out.col(i));
    if (!(len2 > 0.0)) throw DomainError("orthonormalize: metric not positive definite on the frame");
    out.col(i) /= std::sqrt(len2);
  }
  return out;
}

double lk_coefficient(int n, int kappa) {
  const int half = kappa / 2;
  const double sign = (half % 2 == 0) ? 1.0 : -1.0;
  return sign / (factorial(n - kappa) * std::pow(2.0, kappa) * std::pow(kPi, 0.5 * kappa) * factorial(half));
}

double lk_density(const CurvatureAt& c, int kappa, const Mat& frame) {
  const int n = c.dim;
  if (kappa < 0 || kappa > n) throw DomainError("lk_density: kappa must lie in [0, n]");
  if (kappa % 2 == 1) return 0.0;
  const Mat w = orthonormalize(c.metric, frame.size() == 0 ? Mat(Mat::Identity(n, n)) : frame);
  // omega(l, k, i, j) = <R(w_i, w_j) w_k, w_l>.
  std::vector<double> omega(static_cast<std::size_t>(n * n * n * n), 0.0);
  auto om = [&](int l, int k, int i, int j) -> double& { return omega[((l * n + k) * n + i) * n + j]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Vec rv = Vec::Zero(n);  // coordinates of R(w_i, w_j) w_k
        for (int L = 0; L < n; ++L) {
          for (int K = 0; K < n; ++K) {
            for (int I = 0; I < n; ++I) {
              for (int J = 0; J < n; ++J) rv[L] += c(L, K, I, J) * w(I, i) * w(J, j) * w(K, k);
            }
          }
        }
        for (int l = 0; l < n; ++l) om(l, k, i, j) = w.col(l).dot(c.metric * rv);
      }
    }
  }
  const auto perms = permutations(n);
  const int pairs = kappa / 2;
  // Value on (w_1..w_n) of the wedge of `pairs` two-forms and n - kappa one-forms:
  // sum over pi of sgn(pi) * product of factors on consecutive blocks, divided by 2^pairs.
  double total = 0.0;
  for (const auto& sigma : perms) {
    const int ssign = permutation_sign(sigma);
    double wedge = 0.0;
    for (const auto& pi : perms) {
      double prod = 1.0;
      for (int b = 0; b < pairs && prod != 0.0; ++b) {
        prod *= om(sigma[2 * b], sigma[2 * b + 1], pi[2 * b], pi[2 * b + 1]);
      }
      for (int q = kappa; q < n && prod != 0.0; ++q) prod *= (sigma[q] == pi[q]) ? 1.0 : 0.0;
      wedge += permutation_sign(pi) * prod;
    }
    total += ssign * wedge / std::pow(2.0, pairs);
  }
  // Top form on the orthonormal frame -> density in coordinates.
  return lk_coefficient(n, kappa) * total * std::sqrt(c.metric.determinant());
}

double lk_density(const JetSource& metric, int kappa, const Vec& x) {
  const int n = metric.dim();
  if (kappa < 0 || kappa > n) throw DomainError("lk_density: kappa must lie in [0, n]");
  if (kappa % 2 == 1) return 0.0;
  if (kappa == 0) {
    const Mat g = metric.value(x);
    CurvatureAt c;
    c.dim = n;
    c.metric = g;
    c.r.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
    return lk_density(c, 0);
  }
  return lk_density(curvature(metric, x), kappa);
}

double lk_measure(const JetSource& metric, const Box& region, int kappa, int nodes) {
  if (kappa < 0 || kappa > metric.dim()) throw DomainError("lk_measure: kappa must lie in [0, n]");
  if (kappa % 2 == 1) return 0.0;
  const QuadratureGrid grid = tensor_gauss_grid(region, nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.points.size(); ++i) sum += grid.weights[i] * lk_density(metric, kappa, grid.points[i]);
  return sum;
}

double total_gaussian_curvature(const JetSource& metric, const Box& region, int nodes) {
  if (metric.dim() != 2) throw DomainError("total_gaussian_curvature: 2D metrics only");
  const QuadratureGrid grid = tensor_gauss_grid(region, nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const CurvatureAt c = curvature(metric, grid.points[i]);
    sum += grid.weights[i] * c.gaussian * std::sqrt(c.metric.determinant());
  }
  return sum;
}

std::vector<C2Row> c2_convergence_check(const MetricField& metric, const Covering& covering,
                                        const std::vector<double>& eps, const std::vector<Vec>& probes) {
  std::vector<CurvatureAt> exact;
  for (const Vec& x : probes) exact.push_back(curvature(metric, x));
  std::vector<C2Row> rows;
  for (double e : eps) {
    const SmoothedTensor s = smooth_wrt_P(metric, covering, e);
    C2Row row;
    row.epsilon = e;
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const CurvatureAt c = curvature(s, probes[p]);
      const CurvatureAt& ref = exact[p];
      for (int k = 0; k < c.dim; ++k) {
        row.christoffel_error = std::max(row.christoffel_error, (c.gamma.gamma[k] - ref.gamma.gamma[k]).cwiseAbs().maxCoeff());
      }
      for (std::size_t i = 0; i < c.r.size(); ++i) row.curvature_error = std::max(row.curvature_error, std::abs(c.r[i] - ref.r[i]));
      if (c.dim == 2) row.gaussian_error = std::max(row.gaussian_error, std::abs(c.gaussian - ref.gaussian));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace geomolt

#include "geomolt/core/norms.hpp"

#include "geomolt/core/quadrature.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

namespace geomolt {
namespace {

void check_region(const MetricField& t, const Box& region) {
  const Box& d = t.chart().domain;
  if (region.dim() != d.dim() || !d.contains(region.lo, 1e-12) || !d.contains(region.hi, 1e-12)) {
    throw DomainError("norm region lies outside the chart of '" + t.name() + "'");
  }
}

TensorFn as_fn(const MetricField& t) {
  return [&t](const Vec& x) { return t.try_eval(x); };
}

}  // namespace

double pointwise_opnorm(const Mat& t, const Mat& background) {
  Eigen::LLT<Mat> llt(background);
  if (llt.info() != Eigen::Success) throw DomainError("pointwise_opnorm: background not positive definite");
  const Mat linv = llt.matrixL().solve(Mat::Identity(background.rows(), background.cols()));
  const Mat w = linv * (0.5 * (t + t.transpose())) * linv.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> es(w, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::optional<double> pointwise_opnorm(const TensorFn& t, const Vec& x, const Mat& background) {
  auto v = t(x);
  if (!v) return std::nullopt;
  return pointwise_opnorm(*v, background);
}

double c0_norm(const TensorFn& t, const Box& region, const Mat& background, int nodes) {
  const QuadratureGrid grid = tensor_gauss_grid(region, nodes);
  double sup = 0.0;
  for (const Vec& x : grid.points) {
    if (auto v = pointwise_opnorm(t, x, background)) sup = std::max(sup, *v);
  }
  return sup;
}

double lp_norm(const TensorFn& t, const Box& region, double p, const Mat& background, int nodes) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: need p >= 1");
  const QuadratureGrid grid = tensor_gauss_grid(region, nodes);
  const double volume_factor = std::sqrt(background.determinant());
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    if (auto v = pointwise_opnorm(t, grid.points[i], background)) sum += grid.weights[i] * std::pow(*v, p);
  }
  return std::pow(sum * volume_factor, 1.0 / p);
}

double c0_norm(const MetricField& t, const Box& region, const Mat& background, int nodes) {
  check_region(t, region);
  return c0_norm(as_fn(t), region, background, nodes);
}

double lp_norm(const MetricField& t, const Box& region, double p, const Mat& background, int nodes) {
  check_region(t, region);
  return lp_norm(as_fn(t), region, p, background, nodes);
}

void write_grid_csv(const std::string& path, const std::vector<std::string>& header, const std::vector<Vec>& points,
                    const std::vector<std::vector<double>>& values) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int k = 0; k < points[i].size(); ++k) out << (k ? "," : "") << points[i][k];
    for (double v : values[i]) out << ',' << v;
    out << '\n';
  }
}

}  // namespace geomolt

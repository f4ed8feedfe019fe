#pragma once

#include "geomolt/core/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace geomolt {

/// exp(1/(s-1)) and its first two derivatives in s, at s = rho^2 (all zero for s >= 1).
struct ProfileJet {
  double h = 0.0;
  double dh = 0.0;
  double d2h = 0.0;
};
ProfileJet profile_jet(double s);

/// The unnormalized radial profile exp(1/(rho^2 - 1)) on [0, 1), zero beyond.
double mollifier_profile(double rho);

/// Integral of the profile over the Euclidean unit ball of R^n (n = 1..4).
double unit_ball_mass(int dim);

/// Metric used to measure kernel support, volume, and transport during smoothing.
struct Background {
  enum class Kind { Euclidean, RoundSphere, Numeric };
  Kind kind = Kind::Euclidean;
  /// Euclidean: constant SPD matrix in chart coordinates.
  Mat matrix;
  /// Numeric: closed-form 2D metric whose geodesics are integrated.
  std::function<Mat(const Vec&)> metric;
  std::string name = "euclidean";

  static Background euclidean(int dim);
  static Background euclidean(const Mat& matrix);
  /// Unit sphere in the chart (theta, phi) with metric diag(1, sin^2 theta).
  static Background round_sphere();
  static Background numeric(std::string name, std::function<Mat(const Vec&)> metric);

  int dim() const;
  /// Geodesic distance (Euclidean and round sphere only).
  double distance(const Vec& x, const Vec& y) const;
};

/// The standard mollifier eta(x, y, eps) normalized to unit mass in the background volume.
class MollifierKernel {
 public:
  MollifierKernel(double epsilon, int dim, Background background);
  explicit MollifierKernel(double epsilon, int dim = 2) : MollifierKernel(epsilon, dim, Background::euclidean(dim)) {}

  double epsilon() const { return epsilon_; }
  int dim() const { return dim_; }
  const Background& background() const { return background_; }
  /// Integral of exp(1/((d/eps)^2 - 1)) over the eps-ball in the background volume.
  double normalization() const { return normalization_; }
  /// sup_y eta(x, y, eps) * eps^n.
  double norm_bound() const;
  double operator()(const Vec& x, const Vec& y) const;

 private:
  double epsilon_;
  int dim_;
  Background background_;
  double normalization_;
};

/// Euclidean standard mollifier in R^n.
double kernel_eval(const Vec& x, const Vec& y, double epsilon);
/// Partial derivative in x of the Euclidean mollifier; alpha[k] is the order in x_k, |alpha| <= 2.
double kernel_derivative_eval(const Vec& x, const Vec& y, double epsilon, const std::vector<int>& alpha);

}  // namespace geomolt

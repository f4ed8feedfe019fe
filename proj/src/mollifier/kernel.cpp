#include "geomolt/mollifier/kernel.hpp"

#include "geomolt/core/quadrature.hpp"

#include <cmath>
#include <numeric>

namespace geomolt {

ProfileJet profile_jet(double s) {
  const double q = s - 1.0;
  if (q >= 0.0) return {};
  const double h = std::exp(1.0 / q);
  const double q2 = q * q;
  return {h, -h / q2, h * (1.0 / (q2 * q2) + 2.0 / (q2 * q))};
}

double mollifier_profile(double rho) { return profile_jet(rho * rho).h; }

double unit_ball_mass(int dim) {
  static const std::array<double, kMaxDim> masses = [] {
    std::array<double, kMaxDim> m{};
    // Sphere areas |S^{n-1}| for n = 1..4.
    const std::array<double, kMaxDim> area = {2.0, 2.0 * kPi, 4.0 * kPi, 2.0 * kPi * kPi};
    for (int n = 1; n <= kMaxDim; ++n) {
      const double radial = integrate_1d([n](double r) { return mollifier_profile(r) * std::pow(r, n - 1); }, 0.0, 1.0,
                                         64, 20);
      m[n - 1] = area[n - 1] * radial;
    }
    return m;
  }();
  if (dim < 1 || dim > kMaxDim) throw DomainError("unit_ball_mass: dimension must lie in [1, 4]");
  return masses[dim - 1];
}

Background Background::euclidean(int dim) { return euclidean(Mat::Identity(dim, dim)); }

Background Background::euclidean(const Mat& matrix) {
  Eigen::LLT<Mat> llt(matrix);
  if (llt.info() != Eigen::Success || (matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw DomainError("background matrix must be symmetric positive definite");
  }
  Background b;
  b.kind = Kind::Euclidean;
  b.matrix = matrix;
  b.name = matrix.isIdentity() ? "euclidean" : "euclidean-affine";
  return b;
}

Background Background::round_sphere() {
  Background b;
  b.kind = Kind::RoundSphere;
  b.matrix = Mat::Identity(2, 2);
  b.name = "round-sphere";
  return b;
}

Background Background::numeric(std::string name, std::function<Mat(const Vec&)> metric) {
  if (!metric) throw DomainError("numeric background: missing metric");
  Background b;
  b.kind = Kind::Numeric;
  b.matrix = Mat::Identity(2, 2);
  b.metric = std::move(metric);
  b.name = std::move(name);
  return b;
}

int Background::dim() const { return static_cast<int>(matrix.rows()); }

double Background::distance(const Vec& x, const Vec& y) const {
  switch (kind) {
    case Kind::Euclidean: {
      const Vec d = y - x;
      return std::sqrt(d.dot(matrix * d));
    }
    case Kind::RoundSphere: {
      const Eigen::Vector3d p(std::sin(x[0]) * std::cos(x[1]), std::sin(x[0]) * std::sin(x[1]), std::cos(x[0]));
      const Eigen::Vector3d q(std::sin(y[0]) * std::cos(y[1]), std::sin(y[0]) * std::sin(y[1]), std::cos(y[0]));
      return std::atan2(p.cross(q).norm(), p.dot(q));
    }
    case Kind::Numeric: break;
  }
  throw DomainError("background '" + name + "' has no closed-form distance");
}

MollifierKernel::MollifierKernel(double epsilon, int dim, Background background)
    : epsilon_(epsilon), dim_(dim), background_(std::move(background)) {
  if (!(epsilon > 0.0)) throw DomainError("mollifier: epsilon must be positive");
  if (background_.dim() != dim) throw DomainError("mollifier: background dimension mismatch");
  switch (background_.kind) {
    case Background::Kind::Euclidean:
      normalization_ = unit_ball_mass(dim) * std::pow(epsilon, dim) / std::sqrt(background_.matrix.determinant());
      break;
    case Background::Kind::RoundSphere:
      if (epsilon >= kPi) throw DomainError("mollifier: epsilon exceeds the injectivity radius of the sphere");
      normalization_ = 2.0 * kPi * integrate_1d([&](double r) { return mollifier_profile(r / epsilon) * std::sin(r); },
                                                0.0, epsilon, 16, 20);
      break;
    case Background::Kind::Numeric:
      throw DomainError("mollifier: numeric backgrounds are only available through smoothing");
  }
}

double MollifierKernel::norm_bound() const { return std::exp(-1.0) * std::pow(epsilon_, dim_) / normalization_; }

double MollifierKernel::operator()(const Vec& x, const Vec& y) const {
  const double rho = background_.distance(x, y) / epsilon_;
  return mollifier_profile(rho) / normalization_;
}

double kernel_eval(const Vec& x, const Vec& y, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("kernel_eval: epsilon must be positive");
  const int n = static_cast<int>(x.size());
  const double rho = (y - x).norm() / epsilon;
  return mollifier_profile(rho) / (unit_ball_mass(n) * std::pow(epsilon, n));
}

double kernel_derivative_eval(const Vec& x, const Vec& y, double epsilon, const std::vector<int>& alpha) {
  if (!(epsilon > 0.0)) throw DomainError("kernel_derivative_eval: epsilon must be positive");
  const int n = static_cast<int>(x.size());
  if (static_cast<int>(alpha.size()) != n) throw DomainError("kernel_derivative_eval: multi-index length mismatch");
  int order = 0;
  for (int a : alpha) {
    if (a < 0) throw DomainError("kernel_derivative_eval: negative multi-index entry");
    order += a;
  }
  if (order > 2) throw DomainError("kernel_derivative_eval: order above 2 is not supported");
  const Vec z = (y - x) / epsilon;
  const ProfileJet p = profile_jet(z.squaredNorm());
  const double scale = 1.0 / (unit_ball_mass(n) * std::pow(epsilon, n));
  if (order == 0) return p.h * scale;
  std::vector<int> idx;
  for (int k = 0; k < n; ++k) {
    for (int r = 0; r < alpha[k]; ++r) idx.push_back(k);
  }
  // With s = |z|^2: d/dx_k h(s) = -2 h' z_k / eps and
  // d2/dx_k dx_l h(s) = (2 h' delta_kl + 4 h'' z_k z_l) / eps^2.
  if (order == 1) return -2.0 * p.dh * z[idx[0]] / epsilon * scale;
  const int k = idx[0];
  const int l = idx[1];
  return (2.0 * p.dh * (k == l ? 1.0 : 0.0) + 4.0 * p.d2h * z[k] * z[l]) / (epsilon * epsilon) * scale;
}

}  // namespace geomolt

#include "geomolt/gallery/cantor.hpp"

#include "geomolt/core/quadrature.hpp"
#include "geomolt/mollifier/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geomolt {
namespace {

constexpr int kDigits = 60;

// Profile of the 1D standard mollifier at scale eps, normalized: eta_eps(u) = c exp(1/((u/eps)^2 - 1)) / eps.
double eta1_derivative(double u, double eps) {
  static const double mass = unit_ball_mass(1);
  const double z = u / eps;
  if (std::abs(z) >= 1.0) return 0.0;
  const ProfileJet j = profile_jet(z * z);
  return j.dh * 2.0 * z / (eps * eps * mass);
}

}  // namespace

double cantor_function(__int128 p, __int128 q) {
  if (q <= 0 || p < 0 || p > q || q > (static_cast<__int128>(1) << 100)) {
    throw DomainError("cantor_function: need 0 <= p <= q <= 2^100");
  }
  if (p == q) return 1.0;
  double out = 0.0, w = 0.5;
  __int128 r = p;
  for (int i = 0; i < kDigits && r != 0; ++i, w *= 0.5) {
    r *= 3;
    const int d = static_cast<int>(r / q);
    r %= q;
    if (d >= 1) out += w;
    if (d == 1) return out;
  }
  return out;
}

double cantor_function(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("cantor_function: x must lie in [0, 1]");
  double pow3 = 1.0;
  for (int j = 1; j <= 20; ++j) {
    pow3 *= 3.0;
    const double y = x * pow3;
    const double k = std::nearbyint(y);
    if (std::abs(y - k) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(y, 1.0)) {
      return cantor_function(static_cast<__int128>(k), static_cast<__int128>(pow3));
    }
  }
  const __int128 q = static_cast<__int128>(1) << 100;
  return cantor_function(static_cast<__int128>(std::ldexp(x, 100)), q);
}

double cantor_set_distance(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("cantor_set_distance: x must lie in [0, 1]");
  double scale = 1.0;
  for (int i = 0; i < kDigits; ++i) {
    if (x <= 1.0 / 3.0) {
      x *= 3.0;
    } else if (x >= 2.0 / 3.0) {
      x = 3.0 * x - 2.0;
    } else {
      return scale * std::min(x - 1.0 / 3.0, 2.0 / 3.0 - x);
    }
    scale /= 3.0;
  }
  return 0.0;
}

double cantor_theta(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("cantor_theta: t must lie in [0, 1]");
  if (t > 0.75) return 2.0 * kPi;
  return 2.0 * kPi * cantor_function(std::min(1.0, 4.0 * t / 3.0));
}

CantorCurve::CantorCurve(int resolution) : n_(resolution) {
  if (resolution < 1024) throw DomainError("CantorCurve: resolution must be at least 2^10");
  theta_.resize(n_ + 1);
  pts_.resize(n_ + 1);
  for (int i = 0; i <= n_; ++i) theta_[i] = cantor_theta(static_cast<double>(i) / n_);
  pts_[0] = Vec2::Zero();
  const double h = 1.0 / n_;
  for (int i = 0; i < n_; ++i) {
    const Vec2 a(std::cos(theta_[i]), std::sin(theta_[i])), b(std::cos(theta_[i + 1]), std::sin(theta_[i + 1]));
    pts_[i + 1] = pts_[i] + 0.5 * h * (a + b);
  }
}

Vec2 CantorCurve::point(double t) const {
  const double u = std::clamp(t, 0.0, 1.0) * n_;
  const int i = std::min(n_ - 1, static_cast<int>(u));
  return pts_[i] + (u - i) * (pts_[i + 1] - pts_[i]);
}

Vec2 CantorCurve::center_of_mass() const {
  Vec2 c = Vec2::Zero();
  double len = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double l = (pts_[i + 1] - pts_[i]).norm();
    c += 0.5 * l * (pts_[i] + pts_[i + 1]);
    len += l;
  }
  return c / len;
}

double CantorCurve::polygon_length() const {
  double len = 0.0;
  for (int i = 0; i < n_; ++i) len += (pts_[i + 1] - pts_[i]).norm();
  return len;
}

double CantorCurve::orbit_distance(double t) {
  if (t >= 0.75) return std::min(t - 0.75, 1.0 - t);
  return 0.75 * cantor_set_distance(4.0 * t / 3.0);
}

std::vector<double> geometric_windows(double h0, double q, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k, h0 *= q) out.push_back(h0);
  return out;
}

CurvatureDimension curvature_dimension(const std::function<double(double)>& theta, double p,
                                       const std::vector<double>& windows) {
  if (windows.size() < 2) throw DomainError("curvature_dimension: need at least two windows");
  CurvatureDimension out;
  out.windows = windows;
  std::vector<double> lx, ly;
  for (double h : windows) {
    const double inc = std::abs(theta(p + h) - theta(p - h));
    out.increments.push_back(inc);
    if (inc > 0.0) {
      lx.push_back(std::log(2.0 * h));
      ly.push_back(std::log(inc));
    }
  }
  if (out.increments.front() == 0.0) {
    out.flat = true;
    return out;
  }
  if (lx.size() < 2) throw DomainError("curvature_dimension: increments vanish on the small windows");
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

CantorSphere::CantorSphere(int resolution) : curve_(resolution) {
  shift_ = curve_.center_of_mass();
  rho_.resize(resolution / 2 + 1);
  for (std::size_t i = 0; i < rho_.size(); ++i) {
    const double x = curve_.point(curve_parameter(static_cast<double>(i) / resolution)).x() - shift_.x();
    if (x < -1e-6) throw DomainError("CantorSphere: profile crosses the rotation axis");
    rho_[i] = std::max(0.0, x);
  }
}

double CantorSphere::curve_parameter(double s) const {
  const double t = 0.875 + s;
  return t >= 1.0 ? t - 1.0 : t;
}

double CantorSphere::rho(double s) const {
  const double u = std::clamp(s, 0.0, 0.5) * curve_.resolution();
  const int i = std::min(static_cast<int>(rho_.size()) - 2, static_cast<int>(u));
  return rho_[i] + (u - i) * (rho_[i + 1] - rho_[i]);
}

double CantorSphere::gaussian(double s, double h) const {
  const double t = curve_parameter(s);
  const double lo = std::max(0.0, t - h), hi = std::min(1.0, t + h);
  const double dtheta = (cantor_theta(hi) - cantor_theta(lo)) / (hi - lo);
  if (dtheta == 0.0) return 0.0;
  return std::sin(cantor_theta(t)) * dtheta / rho(s);
}

CantorSphere::Smoothed CantorSphere::smoothed_curvature(double epsilon, double delta, double collar) const {
  if (!(epsilon > 0.0) || epsilon >= collar + 0.125) throw DomainError("CantorSphere: bad epsilon");
  Smoothed out;
  out.epsilon = epsilon;
  out.collar = collar;
  // -rho_eps''(s) = -int cos(theta(u)) eta_eps'(s - u) du, since rho' = cos(theta).
  auto density = [&](double s) {
    double v = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double a = s - epsilon + 0.25 * epsilon * k;
      for_each_gauss_node(a, a + 0.25 * epsilon, 8, [&](double u, double w) {
        v -= w * std::cos(cantor_theta(curve_parameter(u))) * eta1_derivative(s - u, epsilon);
      });
    }
    return v;
  };
  const double a = collar, b = 0.5 - collar;
  const int panels = static_cast<int>(std::ceil(4.0 * (b - a) / epsilon));
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    for_each_gauss_node(a + p * width, a + (p + 1) * width, 4, [&](double s, double w) {
      const double m = 2.0 * kPi * w * density(s);
      out.total += m;
      if (CantorCurve::orbit_distance(curve_parameter(s)) > delta) out.off_orbit += std::abs(m);
    });
  }
  return out;
}

}  // namespace geomolt

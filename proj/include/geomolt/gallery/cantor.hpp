#pragma once

#include <functional>
#include <vector>

#include "geomolt/core/types.hpp"

namespace geomolt {

/// Standard Cantor function: with ternary digits a_i and N the first index with a_i = 1,
/// sum_{i<N} (a_i / 2) 2^-i + 2^-N. Inputs within a few ulps of a triadic rational k / 3^j (j <= 33)
/// are evaluated at that rational; everything else is expanded exactly from the double, 60 digits deep.
double cantor_function(double x);

/// Exact rational input p / q with 0 <= p <= q < 2^100.
double cantor_function(__int128 p, __int128 q);

/// Distance from x in [0, 1] to the Cantor ternary set.
double cantor_set_distance(double x);

/// Tangent angle of the Cantor curve: 2 pi f(4t/3) on [0, 3/4], 2 pi on (3/4, 1].
double cantor_theta(double t);

/// Arclength-parametrized closed curve with tangent angle cantor_theta, sampled at t = i / N and
/// integrated with the cumulative trapezoid rule.
class CantorCurve {
 public:
  explicit CantorCurve(int resolution);

  int resolution() const { return n_; }
  /// Point at t (linear interpolation between samples), before centring.
  Vec2 point(double t) const;
  Vec2 closure_gap() const { return pts_.back() - pts_.front(); }
  /// Arclength-uniform centre of mass of the curve.
  Vec2 center_of_mass() const;
  double polygon_length() const;
  const std::vector<Vec2>& samples() const { return pts_; }
  const std::vector<double>& theta() const { return theta_; }
  /// Distance in t to the Cantor points {t : 4t/3 in C}.
  static double orbit_distance(double t);

 private:
  int n_;
  std::vector<double> theta_;
  std::vector<Vec2> pts_;
};

struct CurvatureDimension {
  double slope = 0.0;
  /// theta is constant on the largest window: no curvature at p at all.
  bool flat = false;
  std::vector<double> windows;
  std::vector<double> increments;
};

/// Slope of log(theta(p + h) - theta(p - h)) against log(2h) over the given shrinking half-windows h:
/// the curvature dimension, i.e. the largest d with the increment over (2h)^d bounded.
CurvatureDimension curvature_dimension(const std::function<double(double)>& theta, double p,
                                       const std::vector<double>& windows);

/// Geometric half-windows h0, h0 q, h0 q^2, ... (count of them).
std::vector<double> geometric_windows(double h0, double q, int count);

/// Surface of revolution of the right half of the centred Cantor curve around the y-axis, with profile
/// arclength s in [0, 1/2] from the bottom pole (t = 7/8) to the top pole (t = 3/8):
/// ds^2 + rho(s)^2 dphi^2, rho = distance to the axis. Both poles sit in the middle of flat
/// horizontal segments, so the surface is a flat disk near each pole.
class CantorSphere {
 public:
  explicit CantorSphere(int resolution);

  const CantorCurve& curve() const { return curve_; }
  double rho(double s) const;
  double curve_parameter(double s) const;
  /// -rho''/rho with rho'' = -sin(theta) theta'; theta' by a symmetric difference of step h, which
  /// vanishes exactly inside the removed-interval plateaus.
  double gaussian(double s, double h = 1e-9) const;

  struct Smoothed {
    double epsilon = 0.0;
    double total = 0.0;
    double off_orbit = 0.0;
    double collar = 0.0;
  };
  /// Curvature of the smoothed profile rho_eps = rho * eta_eps: total of K_eps dA = -2 pi rho_eps'' ds
  /// over s in [collar, 1/2 - collar], and the part farther than delta from the Cantor orbit.
  Smoothed smoothed_curvature(double epsilon, double delta, double collar = 1e-3) const;

 private:
  CantorCurve curve_;
  Vec2 shift_;
  std::vector<double> rho_;
};

}  // namespace geomolt

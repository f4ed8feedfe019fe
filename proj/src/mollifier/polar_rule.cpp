#include "geomolt/mollifier/polar_rule.hpp"

#include "geomolt/core/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace geomolt {
namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr int kTangentLevels = 4;

double wrap(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

double angle_of(const Vec2& v) { return std::atan2(v.y(), v.x()); }

// Breaks that grade the angular mesh around the directions where a crossing radius sweeps
// from 1 down to `delta` (a line at distance delta with foot-point angle `perp`).
void add_line_breaks(std::vector<double>& breaks, double perp, double delta) {
  for (double c = delta; c < 1.0; c *= 2.0) {
    const double psi = std::acos(c);
    breaks.push_back(perp + psi);
    breaks.push_back(perp - psi);
  }
  // Also grade toward the tangent directions, where the crossing radius reaches 1 and the kernel mass
  // beyond it vanishes to all orders.
  for (int j = 1; j <= kTangentLevels; ++j) {
    const double psi = std::acos(delta / (1.0 - (1.0 - delta) * std::ldexp(1.0, -j)));
    breaks.push_back(perp + psi);
    breaks.push_back(perp - psi);
  }
  breaks.push_back(perp + 0.5 * kPi);
  breaks.push_back(perp - 0.5 * kPi);
}

void segment_breaks(const Interface& s, std::vector<double>& breaks) {
  if (s.a.norm() < 1.0) breaks.push_back(angle_of(s.a));
  if (s.b.norm() < 1.0) breaks.push_back(angle_of(s.b));
  const Vec2 d = (s.b - s.a).normalized();
  const Vec2 foot = s.a - s.a.dot(d) * d;
  const double delta = foot.norm();
  if (delta < 1e-14) {
    breaks.push_back(angle_of(d));
    breaks.push_back(angle_of(-d));
  } else if (delta < 1.0) {
    add_line_breaks(breaks, angle_of(foot), delta);
  }
}

void ellipse_breaks(const Interface& e, std::vector<double>& breaks) {
  // Rays from the origin tangent to the ellipse satisfy u^T M u = 0.
  const Vec2 p = -e.a;
  const Mat2& q = e.shape;
  const Mat2 m = q * p * p.transpose() * q - (p.dot(q * p) - 1.0) * q;
  const double m11 = m(0, 0), m12 = m(0, 1), m22 = m(1, 1);
  const double disc = m12 * m12 - m11 * m22;
  if (disc >= 0.0) {
    if (std::abs(m22) > 1e-300) {
      for (double sign : {-1.0, 1.0}) {
        const double t = (-m12 + sign * std::sqrt(disc)) / m22;
        breaks.push_back(std::atan(t));
        breaks.push_back(std::atan(t) + kPi);
      }
    } else {
      breaks.push_back(0.5 * kPi);
      breaks.push_back(-0.5 * kPi);
      const double a = std::atan2(-m11, 2.0 * m12);
      breaks.push_back(a);
      breaks.push_back(a + kPi);
    }
  }
  // Angles where the ellipse leaves the unit disk: sign changes of |point| - 1 along the parametrization.
  Eigen::SelfAdjointEigenSolver<Mat2> es(q);
  const Mat2 axes = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal();
  auto excess = [&](double t) { return (e.a + axes * Vec2(std::cos(t), std::sin(t))).norm() - 1.0; };
  const int samples = 512;
  for (int k = 0; k < samples; ++k) {
    double lo = kTwoPi * k / samples, hi = kTwoPi * (k + 1) / samples;
    if ((excess(lo) < 0.0) == (excess(hi) < 0.0)) continue;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((excess(mid) < 0.0) == (excess(lo) < 0.0)) lo = mid; else hi = mid;
    }
    breaks.push_back(angle_of(e.a + axes * Vec2(std::cos(lo), std::sin(lo))));
  }
  // Grade toward the nearest point as if the ellipse were its tangent line there.
  const double delta = e.distance(Vec2::Zero());
  if (delta > 1e-14 && delta < 1.0) {
    // Nearest point: step from the origin along the (negated) gradient of the ellipse form.
    Vec2 g = q * p;
    if (g.norm() > 0.0) {
      const double inside = p.dot(q * p) < 1.0 ? -1.0 : 1.0;
      const Vec2 normal = -inside * g.normalized();
      add_line_breaks(breaks, angle_of(normal), delta);
    }
  }
}

void point_breaks(const Interface& pt, std::vector<double>& breaks) {
  if (pt.a.norm() >= 1.0) return;
  const double a = angle_of(pt.a);
  breaks.push_back(a);
  for (double t = 0.5; t > 1e-3; t *= 0.5) {
    breaks.push_back(a + t);
    breaks.push_back(a - t);
  }
}

void ray_crossings(const Interface& i, const Vec2& u, std::vector<double>& radii) {
  switch (i.kind) {
    case Interface::Kind::Segment: {
      const Vec2 d = i.b - i.a;
      const double det = -u.x() * d.y() + d.x() * u.y();
      if (std::abs(det) < 1e-15) return;
      const double r = (-i.a.x() * d.y() + d.x() * i.a.y()) / det;
      const double s = (u.x() * i.a.y() - u.y() * i.a.x()) / det;
      if (r > 1e-14 && r < 1.0 && s >= 0.0 && s <= 1.0) radii.push_back(r);
      return;
    }
    case Interface::Kind::Ellipse: {
      const Vec2 p = -i.a;
      const double a = u.dot(i.shape * u);
      const double b = u.dot(i.shape * p);
      const double c = p.dot(i.shape * p) - 1.0;
      const double disc = b * b - a * c;
      if (disc < 0.0) return;
      const double sq = std::sqrt(disc);
      for (double r : {(-b - sq) / a, (-b + sq) / a}) {
        if (r > 1e-14 && r < 1.0) radii.push_back(r);
      }
      return;
    }
    case Interface::Kind::Point: {
      const double r = i.a.norm();
      if (r > 1e-14 && r < 1.0) radii.push_back(r);
      return;
    }
  }
}

void add_radial_nodes(double alpha, double w_alpha, const std::vector<double>& cuts, int radial_nodes,
                      std::vector<DiskNode>& out) {
  const Vec2 u(std::cos(alpha), std::sin(alpha));
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    if (len <= 0.0) continue;
    const int n = std::max(4, static_cast<int>(std::ceil(radial_nodes * len)));
    for_each_gauss_node(cuts[k], cuts[k + 1], n, [&](double r, double w) { out.push_back({r * u, w * w_alpha * r}); });
  }
}

}  // namespace

const std::vector<DiskNode>& plain_disk_rule(const PolarRuleOptions& options) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::vector<DiskNode>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_pair(options.radial_nodes, options.angular_nodes);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<DiskNode> nodes;
  const std::vector<double> cuts = {0.0, 1.0};
  const int m = options.angular_nodes;
  for (int j = 0; j < m; ++j) {
    add_radial_nodes(kTwoPi * (j + 0.5) / m, kTwoPi / m, cuts, options.radial_nodes, nodes);
  }
  return cache.emplace(key, std::move(nodes)).first->second;
}

std::vector<DiskNode> disk_rule(const std::vector<Interface>& interfaces, const PolarRuleOptions& options) {
  if (interfaces.empty()) return plain_disk_rule(options);
  std::vector<double> breaks;
  for (const auto& i : interfaces) {
    switch (i.kind) {
      case Interface::Kind::Segment: segment_breaks(i, breaks); break;
      case Interface::Kind::Ellipse: ellipse_breaks(i, breaks); break;
      case Interface::Kind::Point: point_breaks(i, breaks); break;
    }
  }
  for (double& b : breaks) b = wrap(b);
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> unique;
  for (double b : breaks) {
    if (unique.empty() || b - unique.back() > 1e-13) unique.push_back(b);
  }
  if (unique.size() > 1 && unique.front() + kTwoPi - unique.back() <= 1e-13) unique.pop_back();
  if (unique.empty()) unique.push_back(0.0);
  unique.push_back(unique.front() + kTwoPi);

  std::vector<DiskNode> out;
  std::vector<double> cuts;
  for (std::size_t k = 0; k + 1 < unique.size(); ++k) {
    const double a0 = unique[k], a1 = unique[k + 1];
    const int n = std::max(12, static_cast<int>(std::ceil(2 * options.angular_nodes * (a1 - a0) / kTwoPi)));
    // Smooth-step substitution alpha = a0 + (a1 - a0)(3t^2 - 2t^3): the Jacobian vanishes at both ends,
    // which tames the square-root behaviour of crossing radii at tangent directions.
    for_each_gauss_node(0.0, 1.0, n, [&](double t, double wt) {
      const double alpha = a0 + (a1 - a0) * t * t * (3.0 - 2.0 * t);
      const double w_alpha = wt * (a1 - a0) * 6.0 * t * (1.0 - t);
      const Vec2 u(std::cos(alpha), std::sin(alpha));
      cuts.assign(1, 0.0);
      for (const auto& i : interfaces) ray_crossings(i, u, cuts);
      cuts.push_back(1.0);
      std::sort(cuts.begin(), cuts.end());
      add_radial_nodes(alpha, w_alpha, cuts, 2 * options.radial_nodes, out);
    });
  }
  return out;
}

std::vector<Interface> interfaces_in_unit_disk(const std::vector<Interface>& interfaces, const Vec2& x, const Mat2& a,
                                               double epsilon) {
  std::vector<Interface> out;
  const Mat2 ainv = a.inverse();
  for (const auto& i : interfaces) {
    switch (i.kind) {
      case Interface::Kind::Segment: {
        Interface s = Interface::segment(a * (i.a - x) / epsilon, a * (i.b - x) / epsilon);
        if (s.distance(Vec2::Zero()) < 1.0) out.push_back(s);
        break;
      }
      case Interface::Kind::Point: {
        Interface p = Interface::point(a * (i.a - x) / epsilon);
        if (p.a.norm() < 1.0) out.push_back(p);
        break;
      }
      case Interface::Kind::Ellipse: {
        const Mat2 q = epsilon * epsilon * ainv.transpose() * i.shape * ainv;
        Interface e = Interface::ellipse(a * (i.a - x) / epsilon, 0.5 * (q + q.transpose()));
        Eigen::SelfAdjointEigenSolver<Mat2> es(e.shape, Eigen::EigenvaluesOnly);
        const double longest = 1.0 / std::sqrt(es.eigenvalues()[0]);
        const double shortest = 1.0 / std::sqrt(es.eigenvalues()[1]);
        const double c = e.a.norm();
        if (c - longest >= 1.0) break;          // ellipse entirely outside the disk
        if (c + 1.0 <= shortest) break;         // disk entirely inside the ellipse
        out.push_back(e);
        break;
      }
    }
  }
  return out;
}

}  // namespace geomolt

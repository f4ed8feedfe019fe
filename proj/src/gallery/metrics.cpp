#include "geomolt/gallery/metrics.hpp"

#include <cmath>

namespace geomolt {

MetricField degenerate_metric() {
  MetricField f = make_field("degenerate", {"square", Box::square(-1, 1)},
                             [](const Vec& x) { return make_diag({1.0, x[0] * x[0]}); }, Regularity::C0);
  f.with_description("dx^2 + x^2 dy^2, degenerate on x = 0");
  return f;
}

MetricField oscillating_metric(int levels) {
  if (levels < 1 || levels > 50) throw DomainError("oscillating_metric: levels must lie in [1, 50]");
  MetricField f("oscillating", {"square", Box::square(-1, 1)}, [](const Vec& x) -> std::optional<Mat> {
    const double a = std::abs(x[0]);
    if (a == 0.0 || a >= 1.0) return make_diag({1.0, 1.0});
    // 2^-(k+1) <= a < 2^-k; bands with odd k carry the factor 2.
    int k = 0;
    std::frexp(a, &k);
    k = -k;
    const double c = (k % 2 == 0) ? 1.0 : 2.0;
    return make_diag({c, c});
  }, Regularity::LpLoc, 1e9);
  std::vector<Interface> lines;
  for (int j = 1; j <= levels; ++j) {
    for (double s : {1.0, -1.0}) lines.push_back(Interface::segment({s * std::ldexp(1.0, -j), -2.0}, {s * std::ldexp(1.0, -j), 2.0}));
  }
  f.with_interfaces(lines);
  f.with_description("Euclidean / doubled Euclidean on alternating dyadic bands in |x|");
  return f;
}

MetricField inverse_radius_metric() {
  MetricField f("inverse_radius", {"square", Box::square(-1, 1)}, [](const Vec& x) -> std::optional<Mat> {
    const double r = x.norm();
    if (r == 0.0) return make_diag({1.0, 1.0});
    const double c = 1.0 / std::sqrt(r);
    return make_diag({c, c});
  }, Regularity::LpLoc, 1.5);
  f.with_interfaces({Interface::point({0.0, 0.0})});
  f.with_description("(dx^2 + dy^2) / sqrt(x^2 + y^2)");
  return f;
}

MetricField dihedral_metric() {
  MetricField f("dihedral", {"square", Box::square(-1, 1)}, [](const Vec& x) -> std::optional<Mat> {
    if (x[1] == 0.0) return std::nullopt;
    return x[1] < 0.0 ? make_diag({1.0, 1.0}) : make_diag({1.0, 2.0});
  }, Regularity::LpLoc, 1e9);
  const Interface axis = Interface::segment({-2.0, 0.0}, {2.0, 0.0});
  f.with_interfaces({axis}).with_undefined({axis});
  f.with_description("plane z = 0 (y < 0) glued to the plane z = y (y > 0) along the x-axis");
  return f;
}

MetricField kinked_metric() {
  MetricField f = make_field("kinked", {"square", Box::square(-1, 1)}, [](const Vec& x) {
    const double c = 1.0 + 0.5 * std::abs(x[0] - 0.1) + 0.3 * std::abs(x[1]);
    return make_diag({c, c});
  }, Regularity::C0);
  f.with_interfaces({Interface::segment({0.1, -2.0}, {0.1, 2.0}), Interface::segment({-2.0, 0.0}, {2.0, 0.0})});
  f.with_description("conformal factor with kinks along x = 0.1 and y = 0");
  return f;
}

MetricField round_sphere_patch() {
  return make_field("round_sphere", {"theta_phi", Box(make_vec({0.2, -1.5}), make_vec({kPi - 0.2, 1.5}))},
                    [](const Vec& x) { return make_diag({1.0, std::sin(x[0]) * std::sin(x[0])}); });
}

MetricField hyperbolic_patch() {
  return make_field("hyperbolic", {"square", Box::square(-1, 1)},
                    [](const Vec& x) { return make_diag({1.0, std::exp(2.0 * x[0])}); });
}

}  // namespace geomolt

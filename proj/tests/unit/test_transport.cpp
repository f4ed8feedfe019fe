#include "doctest.h"
#include "generators.hpp"

#include "geomolt/core/covering.hpp"
#include "geomolt/transport/distance.hpp"
#include "geomolt/transport/nonregular.hpp"
#include "geomolt/transport/transport.hpp"
#include "geomolt/transport/trend.hpp"

#include <cmath>

using namespace geomolt;

namespace {

AnalyticJetSource constant_metric(const Mat& g) {
  return AnalyticJetSource(static_cast<int>(g.rows()), [g](const Vec&, int order) {
    TensorJet j = TensorJet::zero(static_cast<int>(g.rows()), order);
    j.value = g;
    return j;
  });
}

// Round sphere in (theta, phi).
const AnalyticJetSource kSphere(2, [](const Vec& x, int order) {
  TensorJet j = TensorJet::zero(2, order);
  const double s = std::sin(x[0]);
  j.value = make_diag({1.0, s * s});
  j.d1[0](1, 1) = std::sin(2 * x[0]);
  j.d2[0][0](1, 1) = 2 * std::cos(2 * x[0]);
  return j;
});

// Unit sphere in stereographic coordinates from the south pole: 4 / (1 + |u|^2)^2 I, north pole at 0.
const AnalyticJetSource kStereo(2, [](const Vec& u, int order) {
  TensorJet j = TensorJet::zero(2, order);
  const double q = 1.0 + u.squaredNorm();
  j.value = make_diag({1.0, 1.0}) * (4.0 / (q * q));
  for (int k = 0; k < 2; ++k) {
    j.d1[k] = make_diag({1.0, 1.0}) * (-16.0 * u[k] / (q * q * q));
    for (int l = 0; l < 2; ++l) {
      j.d2[k][l] = make_diag({1.0, 1.0}) * ((k == l ? -16.0 / (q * q * q) : 0.0) + 96.0 * u[k] * u[l] / (q * q * q * q));
    }
  }
  return j;
});

// Orthonormal components (a, b) = (v^theta, sin(theta) v^phi).
Vec2 orthonormal_sphere(double theta, const Vec& v) { return {v[0], std::sin(theta) * v[1]}; }

}  // namespace

TEST_CASE("transport under the Euclidean metric leaves vectors unchanged") {
  const auto flat = constant_metric(make_diag({1.0, 1.0}));
  const CurveSpec c = CurveSpec::polyline({make_vec({0, 0}), make_vec({1, 0.5}), make_vec({0.2, 0.9})});
  const auto r = integrate_transport(flat, c, make_vec({0.3, -0.7}), 200);
  REQUIRE(r.at_breakpoints.size() == 3);
  for (const Vec& v : r.at_breakpoints) CHECK((v - make_vec({0.3, -0.7})).norm() <= 1e-15);
  const auto z = integrate_transport(kSphere, CurveSpec::latitude(1.0), make_vec({0.0, 0.0}), 100);
  CHECK(z.at_breakpoints.back().norm() == 0.0);
}

TEST_CASE("holonomy of a latitude circle") {
  for (double theta : {kPi / 3, kPi / 4}) {
    const auto r = integrate_transport(kSphere, CurveSpec::latitude(theta), make_vec({1.0, 0.0}));
    const Vec2 w = orthonormal_sphere(theta, r.at_breakpoints.back());
    // The orthonormal components rotate clockwise at rate cos(theta): total angle 2 pi cos(theta).
    const double angle = -2.0 * kPi * std::cos(theta);
    CHECK((w - Vec2(std::cos(angle), std::sin(angle))).norm() <= 1e-4);
    CHECK(r.norm_drift <= 1e-6);
  }
}

TEST_CASE("RK4 transport error is fourth order in the step") {
  const double theta = 1.0;
  const Vec v0 = make_vec({1.0, 0.5});
  const Vec ref = integrate_transport(kSphere, CurveSpec::latitude(theta), v0, 2000).at_breakpoints.back();
  const double e1 = (integrate_transport(kSphere, CurveSpec::latitude(theta), v0, 2).at_breakpoints.back() - ref).norm();
  const double e2 = (integrate_transport(kSphere, CurveSpec::latitude(theta), v0, 4).at_breakpoints.back() - ref).norm();
  CHECK(e1 / e2 >= 8.0);
  CHECK(e1 / e2 <= 32.0);
}

TEST_CASE("transport preserves the metric norm on random metrics") {
  gen::Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const gen::QuadraticMetric g(rng, 2, 0.2);
    const CurveSpec c = CurveSpec::polyline(
        {gen::point_in(rng, Box::square(-0.8, 0.8)), gen::point_in(rng, Box::square(-0.8, 0.8)), gen::point_in(rng, Box::square(-0.8, 0.8))});
    const auto r = integrate_transport(g, c, gen::matrix(rng, 2).col(0));
    CHECK(r.norm_drift <= 1e-6);
  }
}

TEST_CASE("singular metric on the curve is rejected with its parameter") {
  const AnalyticJetSource degenerate(2, [](const Vec& x, int order) {
    TensorJet j = TensorJet::zero(2, order);
    j.value = make_diag({1.0, x[0] * x[0]});
    j.d1[0](1, 1) = 2 * x[0];
    j.d2[0][0](1, 1) = 2;
    return j;
  });
  try {
    integrate_transport(degenerate, CurveSpec::line(make_vec({-0.5, 0}), make_vec({0.5, 0})), make_vec({1, 0}), 10);
    FAIL("expected a singular-metric error");
  } catch (const SingularMetricError& e) {
    CHECK(std::string(e.what()).find("t = 0.5") != std::string::npos);
  }
}

TEST_CASE("geodesics") {
  const auto flat = constant_metric(make_diag({1.0, 1.0}));
  const auto line = geodesic_shoot(flat, make_vec({0.1, 0.2}), make_vec({3.0, 4.0}), 2.0, 100);
  CHECK((line.endpoint - make_vec({1.3, 1.8})).norm() <= 1e-14);
  // Equator to north pole along a meridian.
  const auto g = geodesic_shoot(kStereo, make_vec({1.0, 0.0}), make_vec({-1.0, 0.0}), kPi / 2);
  CHECK(g.endpoint.norm() <= 1e-5);
  CHECK(g.speed_drift <= 1e-6);
  // Parallel frame stays orthonormal.
  const Mat gm = kStereo.value(g.endpoint);
  const Mat f0 = Mat::Identity(2, 2);  // g = I at u = (1, 0)
  const auto gf = geodesic_shoot(kStereo, make_vec({1.0, 0.0}), make_vec({-1.0, 0.0}), kPi / 2, 2000, std::nullopt, f0);
  CHECK((gf.frame.transpose() * gm * gf.frame - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-6);
  gen::Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    const gen::QuadraticMetric q(rng, 2, 0.2);
    const auto r = geodesic_shoot(q, gen::point_in(rng, Box::square(-0.3, 0.3)), gen::matrix(rng, 2).col(0), 0.5, 2000,
                                  Box::square(-1, 1));
    CHECK(r.speed_drift <= 1e-6);
  }
  const auto out = geodesic_shoot(flat, make_vec({0.0, 0.0}), make_vec({1.0, 0.0}), 3.0, 100, Box::square(-1, 1));
  CHECK(out.exited);
  CHECK(out.length <= 1.0);
  CHECK(out.length >= 0.98);
}

TEST_CASE("grid distances") {
  const MetricFn euclid = [](const Vec&) { return make_diag({1.0, 1.0}); };
  const Box unit = Box::square(0, 1);
  CHECK(distance_smoothed(euclid, unit, make_vec({0, 0}), make_vec({1, 1})).value == doctest::Approx(std::sqrt(2.0)).epsilon(0.01));
  const MetricFn scaled = [](const Vec&) { return make_diag({4.0, 4.0}); };
  CHECK(distance_smoothed(scaled, unit, make_vec({0, 0}), make_vec({1, 1})).value ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(0.01));
  GridDistanceOptions o;
  o.grid_n = 48;
  const Box chart(make_vec({kPi / 2 - 0.5, -0.25}), make_vec({kPi / 2 + 0.5, 1.25}));
  CHECK(distance_smoothed(kSphere, chart, make_vec({kPi / 2, 0.0}), make_vec({kPi / 2, 1.0}), o).value ==
        doctest::Approx(1.0).epsilon(0.01));
  // Knight moves shrink the direction bias of the 8-neighbour graph.
  GridDistanceOptions k16;
  k16.connectivity = 16;
  const double d8 = distance_smoothed(euclid, unit, make_vec({0, 0}), make_vec({1, 0.5})).value;
  const double d16 = distance_smoothed(euclid, unit, make_vec({0, 0}), make_vec({1, 0.5}), k16).value;
  CHECK(d16 == doctest::Approx(std::sqrt(1.25)).epsilon(1e-9));
  CHECK(d8 > d16);
  GridDistanceOptions bad;
  bad.connectivity = 6;
  CHECK_THROWS_AS(distance_smoothed(euclid, unit, make_vec({0, 0}), make_vec({1, 0.5}), bad), DomainError);
  CHECK_THROWS_AS(distance_smoothed(euclid, unit, make_vec({0, 0}), make_vec({2, 0.5})), DomainError);
}

TEST_CASE("grid distance is symmetric and satisfies the triangle inequality") {
  gen::Rng rng(12);
  const gen::QuadraticMetric g(rng, 2, 0.3);
  GridDistanceOptions fixed;
  fixed.grid_n = fixed.max_grid_n = 24;
  const Box region = Box::square(-1, 1);
  const double h = 2.0 / 24;
  auto node = [&] { return make_vec({-1 + h * rng.integer(0, 24), -1 + h * rng.integer(0, 24)}); };
  for (int t = 0; t < 100; ++t) {
    const Vec a = node(), b = node(), c = node();
    const double ab = distance_smoothed(g, region, a, b, fixed).value;
    const double ba = distance_smoothed(g, region, b, a, fixed).value;
    const double bc = distance_smoothed(g, region, b, c, fixed).value;
    const double ac = distance_smoothed(g, region, a, c, fixed).value;
    CHECK(std::abs(ab - ba) <= 1e-9 * std::max(1.0, ab));
    CHECK(ac <= ab + bc + 1e-12);
  }
}

TEST_CASE("trend classification") {
  CHECK(classify_trend({1.0, 1.005, 1.01}).verdict == Verdict::Converged);
  const Trend geo = classify_trend({0.08, 0.04, 0.02, 0.01});
  CHECK(geo.verdict == Verdict::Converged);
  CHECK(geo.extrapolated);
  CHECK(geo.value == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(classify_trend({1.0, 1.3, 1.7}).verdict == Verdict::Diverging);
  const Trend osc = classify_trend({1.0, 1.2, 1.0, 1.2, 1.0, 1.2});
  CHECK(osc.verdict == Verdict::Oscillating);
  CHECK(osc.limsup - osc.liminf == doctest::Approx(0.2));
  CHECK_THROWS_AS(classify_trend({1.0, 2.0}), DomainError);
  CHECK(to_string(Verdict::Oscillating) == "OSCILLATING");
}

TEST_CASE("curves") {
  const CurveSpec c = CurveSpec::polyline({make_vec({0, 0}), make_vec({1, 0}), make_vec({1, 1})});
  CHECK(c.segment_at(0.5) == 0);
  CHECK(c.segment_at(1.5) == 1);
  CHECK((c.position(1.5) - make_vec({1, 0.5})).norm() <= 1e-15);
  const CurveSpec s = c.split_at({0.25});
  CHECK(s.breakpoints.size() == 4);
  CHECK((s.position(0.25) - make_vec({0.25, 0})).norm() <= 1e-15);
  CHECK_THROWS_AS(CurveSpec::polyline({make_vec({0, 0}), make_vec({0, 0})}), DomainError);
  CurveSpec broken = c;
  broken.segments[1].position = [](double t) { return make_vec({2.0, t - 1.0}); };
  CHECK_THROWS_AS(broken.validate(), DomainError);
  CHECK(curve_length([](const Vec&) { return make_diag({4.0, 1.0}); }, c) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("non-regular transport on the dihedral surface") {
  MetricField dihedral("dihedral", {"c", Box::square(-1, 1)}, [](const Vec& x) -> std::optional<Mat> {
    if (x[1] == 0.0) return std::nullopt;
    return x[1] < 0 ? make_diag({1.0, 1.0}) : make_diag({1.0, 2.0});
  }, Regularity::LpLoc, 1e9);
  dihedral.with_interfaces({Interface::segment({-2, 0}, {2, 0})}).with_undefined({Interface::segment({-2, 0}, {2, 0})});
  const Box region = Box::square(-0.5, 0.5);
  const EdgeCrossing crossing{make_vec({-0.2, -0.3}), make_vec({0.2, 0.3}), make_vec({0, 0}), make_vec({1, 0}),
                              make_vec({0.6, 0.8})};
  // Identity backgrounds: the smoothing depends on y only, the smoothed metric is flat and the angle is exact.
  const Covering plain = build_covering(region, 0.5, 0.1);
  CHECK(edge_angle_drift(dihedral, plain, crossing, 0.05, 400).drift <= 1e-8);
  // Rotated, stretched backgrounds break the symmetry; the drift then shrinks with eps.
  const Covering jittered = build_covering(region, 0.5, 0.1, {1.05, 0.3, 5});
  const double d1 = edge_angle_drift(dihedral, jittered, crossing, 0.05, 400).drift;
  const double d2 = edge_angle_drift(dihedral, jittered, crossing, 0.025, 400).drift;
  CHECK(d2 < d1);
  EdgeCrossing tangent = crossing;
  tangent.end = make_vec({0.2, -0.3});
  CHECK_THROWS_AS(edge_angle_drift(dihedral, plain, tangent, 0.05), DomainError);

  // Single smooth face: the limit equals plain transport under the face metric.
  const MetricField face = make_field("face", {"c", Box::square(-1, 1)}, [](const Vec& x) {
    return make_diag({1.0 + 0.3 * x[0] * x[0], 1.0 + 0.2 * std::sin(x[1])});
  });
  const CurveSpec curve = CurveSpec::line(make_vec({-0.3, -0.2}), make_vec({0.3, 0.25}));
  TransportLimitOptions opt;
  opt.steps_per_unit = 400;
  const Covering other = build_covering(region, 0.35, 0.1);
  const auto lim = transport_limit(face, plain, other, curve, make_vec({1.0, 0.0}), {0.1, 0.05, 0.025}, opt);
  const Vec direct = integrate_transport(face, curve, make_vec({1.0, 0.0}), 400).at_breakpoints.back();
  CHECK(lim.verdict == Verdict::Converged);
  CHECK((lim.vector - direct).norm() <= 1e-3);
  const auto zero = transport_limit(face, plain, other, curve, make_vec({0.0, 0.0}), {0.1, 0.05}, opt);
  for (const Vec& v : zero.first) CHECK(v.norm() == 0.0);
  opt.vertices = {make_vec({0.0, 0.025})};
  opt.vertex_clearance = 0.01;
  CHECK_THROWS_AS(transport_limit(face, plain, other, curve, make_vec({1.0, 0.0}), {0.1, 0.05}, opt), DomainError);
}

TEST_CASE("non-regular distances") {
  // dx^2 + x^2 dy^2: the smoothed (2,2) entry at x = 0 is eps^2 m2, so d_eps is about 0.36 eps.
  const MetricField degenerate = make_field("degenerate", {"c", Box::square(-1, 1)},
                                            [](const Vec& x) { return make_diag({1.0, x[0] * x[0]}); }, Regularity::C0);
  SmoothingOptions light;
  light.rule = {17, 32};
  GridDistanceOptions grid;
  grid.grid_n = 24;
  grid.max_grid_n = 96;
  const Box region = Box::square(-0.75, 0.75);
  const auto est = nonregular_distance(family_wrt_background(degenerate, region, light), region, make_vec({0, -0.5}),
                                       make_vec({0, 0.5}), {0.2, 0.1, 0.05}, grid);
  CHECK(est.distances[2] <= 0.05);
  CHECK(est.distances[2] < est.distances[1]);
  CHECK(est.distances[1] < est.distances[0]);
  CHECK(est.trend.verdict == Verdict::Converged);
  CHECK(std::abs(est.trend.value) <= 0.01);
  CHECK(est.distances[2] == doctest::Approx(0.05 * std::sqrt(0.13065560171027932)).epsilon(0.02));
}

#include "doctest.h"
#include "generators.hpp"

#include "geomolt/core/covering.hpp"
#include "geomolt/gallery/cantor.hpp"
#include "geomolt/gallery/metrics.hpp"
#include "geomolt/gallery/registry.hpp"
#include "geomolt/transport/distance.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

using namespace geomolt;

TEST_CASE("gallery metrics") {
  const MetricField d = degenerate_metric();
  CHECK(d.undefined_set().empty());
  CHECK((d.value(make_vec({0.5, 0.3})) - make_diag({1.0, 0.25})).norm() == 0.0);
  CHECK(d.value(make_vec({0.0, 0.3})).determinant() == 0.0);
  const MetricField osc = oscillating_metric();
  CHECK(osc.value(make_vec({0.7, 0.0}))(0, 0) == 1.0);   // 2^-1 < 0.7 < 1
  CHECK(osc.value(make_vec({0.3, 0.0}))(0, 0) == 2.0);   // 2^-2 < 0.3 < 2^-1
  CHECK(osc.value(make_vec({0.2, 0.0}))(0, 0) == 1.0);   // 2^-3 < 0.2 < 2^-2
  CHECK(osc.value(make_vec({-0.3, 0.0}))(0, 0) == 2.0);
  CHECK(osc.value(make_vec({0.0, 0.1}))(0, 0) == 1.0);
  const MetricField inv = inverse_radius_metric();
  CHECK(inv.value(make_vec({0.0, 0.25}))(0, 0) == doctest::Approx(2.0));
  const MetricField dih = dihedral_metric();
  CHECK_FALSE(dih.try_eval(make_vec({0.3, 0.0})).has_value());
  CHECK(dih.value(make_vec({0.3, 0.2}))(1, 1) == 2.0);
  CHECK(dih.value(make_vec({0.3, -0.2}))(1, 1) == 1.0);
}

TEST_CASE("oscillating example: smoothed lengths of x = 0 alternate") {
  // Oracle: sqrt of the smoothed (2,2) entry on x = 0 alternates between two values along eps = 0.2 / 2^k.
  const MetricField osc = oscillating_metric();
  SmoothingOptions light;
  light.rule = {17, 32};
  const Box region = Box::square(-0.7, 0.7);
  const auto est = curve_length_limit(family_wrt_background(osc, region, light),
                                      CurveSpec::line(make_vec({0.0, -0.5}), make_vec({0.0, 0.5})),
                                      {0.2, 0.1, 0.05, 0.025}, 1, 4);
  CHECK(est.distances[0] == doctest::Approx(1.2485457511789013).epsilon(1e-4));
  CHECK(est.distances[1] == doctest::Approx(1.2004722017660854).epsilon(1e-4));
  CHECK(est.distances[2] == doctest::Approx(1.2485457511789013).epsilon(1e-4));
  CHECK(est.distances[3] == doctest::Approx(1.2004722017660854).epsilon(1e-4));
  CHECK(est.trend.verdict == Verdict::Oscillating);
  CHECK(est.trend.limsup - est.trend.liminf == doctest::Approx(0.0481).epsilon(0.01));
}

TEST_CASE("Cantor function") {
  CHECK(cantor_function(0.0) == 0.0);
  CHECK(cantor_function(1.0) == 1.0);
  CHECK(cantor_function(1.0 / 3.0) == 0.5);
  CHECK(cantor_function(static_cast<__int128>(1), static_cast<__int128>(3)) == 0.5);
  CHECK(cantor_function(0.25) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(cantor_function(0.5) == 0.5);
  CHECK(cantor_function(2.0 / 9.0) == 0.25);
  CHECK_THROWS_AS(cantor_function(1.5), DomainError);
  CHECK_THROWS_AS(cantor_function(-0.1), DomainError);

  gen::Rng rng(3);
  std::vector<double> xs(1000000);
  for (double& x : xs) x = rng.uniform();
  std::sort(xs.begin(), xs.end());
  double prev = 0.0, sym = 0.0;
  bool monotone = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cantor_function(xs[i]);
    monotone = monotone && f >= prev;
    prev = f;
    if (i % 100 == 0) sym = std::max(sym, std::abs(cantor_function(1.0 - xs[i]) - (1.0 - f)));
  }
  CHECK(monotone);
  CHECK(sym <= 1e-12);
  // Constant on removed middle thirds.
  for (auto [a, b] : {std::pair{1.0 / 3, 2.0 / 3}, std::pair{1.0 / 9, 2.0 / 9}, std::pair{7.0 / 27, 8.0 / 27}}) {
    const double f = cantor_function(0.5 * (a + b));
    for (int k = 1; k < 10; ++k) CHECK(cantor_function(a + (b - a) * k / 10.0) == f);
  }
  CHECK(cantor_set_distance(0.5) == doctest::Approx(1.0 / 6));
  CHECK(cantor_set_distance(0.25) == 0.0);
}

TEST_CASE("Cantor curve") {
  CHECK(cantor_theta(0.0) == 0.0);
  CHECK(cantor_theta(1.0) == 2 * kPi);
  CHECK(cantor_theta(0.375) == doctest::Approx(kPi).epsilon(1e-15));
  const CantorCurve c(1 << 16);
  CHECK(c.closure_gap().norm() <= 1e-3);
  CHECK(c.polygon_length() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(CantorCurve(100), DomainError);
  // y-symmetry of the closed curve: the centre of mass sits on the vertical symmetry line.
  CHECK(c.center_of_mass().x() == doctest::Approx(c.point(0.875).x()).epsilon(1e-9));
}

TEST_CASE("curvature dimension") {
  const double ln = std::log(2.0) / std::log(3.0);
  CHECK(curvature_dimension(cantor_theta, 3.0 / 16, geometric_windows(0.75 / 9, 1.0 / 3, 20)).slope ==
        doctest::Approx(ln).epsilon(0.05 / ln));
  CHECK(curvature_dimension([](double t) { return 3 * t; }, 0.4, geometric_windows(0.01, 0.5, 16)).slope ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(curvature_dimension([](double t) { return t < 0.4 ? 0.0 : 1.0; }, 0.4, geometric_windows(0.01, 0.5, 16)).slope) <= 1e-12);
  CHECK(curvature_dimension(cantor_theta, 0.375, geometric_windows(0.01, 0.5, 10)).flat);
}

TEST_CASE("Cantor sphere") {
  const CantorSphere s(1 << 16);
  CHECK(s.rho(0.0) <= 1e-6);
  CHECK(s.rho(0.5) <= 1e-6);
  CHECK(s.rho(0.25) > 0.1);
  // Plateaus of theta: t in (1/4, 1/2) is the removed middle third of 4t/3.
  int plateau = 0;
  for (int k = 0; k < 2000; ++k) {
    const double sp = 0.5 * (k + 0.5) / 2000;
    const double t = s.curve_parameter(sp);
    if (CantorCurve::orbit_distance(t) > 1e-6) {
      ++plateau;
      CHECK(std::abs(s.gaussian(sp)) <= 1e-6);
    }
  }
  CHECK(plateau > 1000);
  const auto m = s.smoothed_curvature(5e-4, 1e-3);
  CHECK(m.total == doctest::Approx(4 * kPi).epsilon(0.02));
  CHECK(m.off_orbit <= 1e-3 * m.total);
}

TEST_CASE("example registry") {
  const auto cube = std::get<PiecewiseSurface>(build_example("cube"));
  CHECK(cube.vertices().size() == 8);
  CHECK(cube.edges().size() == 12);
  CHECK(cube.faces().size() == 6);
  const auto deg = std::get<MetricField>(build_example("degenerate"));
  CHECK(deg.undefined_set().empty());
  const auto dih = std::get<PiecewiseSurface>(build_example("dihedral"));
  CHECK(dih.glue_mismatch() <= 1e-8);
  try {
    build_example("no_such_example");
    FAIL("expected an error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("cube") != std::string::npos);
  }
  CHECK_THROWS_AS(build_example("cube", {{"radius", 1.0}}), DomainError);
  CHECK_THROWS_AS(build_example("oscillating", {{"levels", 2.5}}), DomainError);
}

TEST_CASE("every example round-trips through its file") {
  const auto dir = std::filesystem::temp_directory_path() / "geomolt_examples";
  std::filesystem::create_directories(dir);
  for (const auto& info : registered_examples()) {
    CAPTURE(info.name);
    const std::string path = (dir / (info.name + ".json")).string();
    save_example(path, info.name);
    const json stored = read_json_file(path);
    const LoadedExample loaded = load_example(path);
    CHECK(example_to_json(loaded.name, loaded.params, loaded.object).dump() == stored.dump());
  }
  json j = read_json_file((dir / "cube.json").string());
  j["surface"]["vertices"][0]["angles"][0] = 1.0;
  CHECK_THROWS_AS(example_from_json(j), DomainError);
}

#include "doctest.h"
#include "generators.hpp"

#include "geomolt/core/covering.hpp"
#include "geomolt/core/frame.hpp"
#include "geomolt/core/json_io.hpp"
#include "geomolt/core/metric_field.hpp"
#include "geomolt/core/norms.hpp"
#include "geomolt/core/quadrature.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace geomolt;

TEST_CASE("gauss rules integrate polynomials exactly") {
  for (int n : {1, 2, 5, 33}) {
    const int degree = 2 * n - 1;
    const double got = integrate_1d([&](double x) { return std::pow(x, degree - 1) + 1.0; }, 0.0, 2.0, 1, n);
    const double want = std::pow(2.0, degree) / degree + 2.0;
    CHECK(got == doctest::Approx(want).epsilon(1e-13));
  }
  CHECK_THROWS_AS(gauss_legendre(0), DomainError);
}

TEST_CASE("tensor grid weights sum to the box volume") {
  const Box b(make_vec({0.0, -1.0}), make_vec({2.0, 0.5}));
  const auto grid = tensor_gauss_grid(b, 7);
  double total = 0.0;
  for (double w : grid.weights) total += w;
  CHECK(total == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(grid.points.size() == 49);
}

TEST_CASE("box rejects empty or mismatched domains") {
  CHECK_THROWS_AS(Box(make_vec({0.0}), make_vec({0.0})), DomainError);
  CHECK_THROWS_AS(Box(make_vec({0.0, 0.0}), make_vec({1.0})), DomainError);
}

TEST_CASE("covering of the unit square, cell 0.5, overlap 0.1") {
  const Covering p = build_covering(Box::square(0.0, 1.0), 0.5, 0.1);
  CHECK(p.charts().size() == 4);
  gen::Rng rng(3);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Vec x = gen::point_in(rng, Box::square(0.0, 1.0));
    double sum = 0.0;
    for (const auto& [w, jet] : p.partition(x, 0)) {
      CHECK(jet.value >= 0.0);
      sum += jet.value;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("covering preconditions") {
  CHECK_THROWS_AS(build_covering(Box::square(0.0, 1.0), 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(build_covering(Box::square(0.0, 1.0), 0.5, 0.7), DomainError);
  CHECK_THROWS_AS(build_covering(Box::square(0.0, 1.0), 0.0, 0.1), DomainError);
  CHECK_THROWS_AS(Box::square(1.0, 1.0), DomainError);
}

TEST_CASE("covering of [0,3]^2 with cell 1: at most 4 supports at any point") {
  const Covering p = build_covering(Box::square(0.0, 3.0), 1.0, 0.1);
  CHECK(p.charts().size() == 9);
  // Oracle: U cells are [i - 0.1, i + 1.1]; a coordinate can lie in at most two of them per axis.
  gen::Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const Vec x = gen::point_in(rng, Box::square(0.0, 3.0));
    int by_hand = 1;
    for (int k = 0; k < 2; ++k) {
      int hits = 0;
      for (int c = 0; c < 3; ++c) hits += (x[k] > c - 0.1 && x[k] < c + 1.1);
      by_hand *= hits;
    }
    const auto active = p.active(x);
    CHECK(static_cast<int>(active.size()) <= 4);
    CHECK(static_cast<int>(active.size()) <= by_hand);
  }
}

TEST_CASE("partition derivatives match finite differences") {
  const Covering p = build_covering(Box::square(0.0, 1.0), 0.5, 0.1, {1.05, 0.2, 4});
  const Vec x = make_vec({0.47, 0.55});
  const auto parts = p.partition(x, 2);
  const double h = 1e-5;
  for (const auto& [w, jet] : parts) {
    for (int k = 0; k < 2; ++k) {
      Vec xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const double fd = (p.psi(w, xp) - p.psi(w, xm)) / (2 * h);
      CHECK(jet.grad[k] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      const auto pp = p.partition(xp, 1);
      const auto pm = p.partition(xm, 1);
      for (std::size_t i = 0; i < pp.size(); ++i) {
        if (pp[i].first != w) continue;
        for (int l = 0; l < 2; ++l) {
          const double fd2 = (pp[i].second.grad[l] - pm[i].second.grad[l]) / (2 * h);
          CHECK(jet.hess(k, l) == doctest::Approx(fd2).epsilon(1e-5).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("covering round-trips through JSON bit-exactly") {
  const Covering p = build_covering(Box::square(-0.3, 1.1), 0.35, 0.07, {1.05, 0.25, 9});
  const json j = p.to_json();
  const Covering q = Covering::from_json(json::parse(j.dump()));
  REQUIRE(q.charts().size() == p.charts().size());
  for (std::size_t w = 0; w < p.charts().size(); ++w) {
    CHECK(q.charts()[w].background == p.charts()[w].background);
    CHECK(q.charts()[w].inner.lo == p.charts()[w].inner.lo);
    CHECK(q.charts()[w].outer.hi == p.charts()[w].outer.hi);
  }
  CHECK(q.to_json().dump() == j.dump());
}

TEST_CASE("pointwise operator norm") {
  CHECK(pointwise_opnorm(Mat::Identity(2, 2), Mat::Identity(2, 2)) == doctest::Approx(1.0));
  CHECK(pointwise_opnorm(make_diag({4.0, 1.0}), Mat::Identity(2, 2)) == doctest::Approx(4.0));
  CHECK(pointwise_opnorm(make_diag({4.0, 1.0}), make_diag({4.0, 4.0})) == doctest::Approx(1.0));
  // Undefined points give no value.
  const TensorFn hole = [](const Vec& x) -> std::optional<Mat> {
    if (x.norm() == 0.0) return std::nullopt;
    return Mat::Identity(2, 2);
  };
  CHECK_FALSE(pointwise_opnorm(hole, Vec::Zero(2), Mat::Identity(2, 2)).has_value());
}

TEST_CASE("C0 and Lp norms on the unit square") {
  const Box unit = Box::square(0.0, 1.0);
  const Mat id = Mat::Identity(2, 2);
  const MetricField one = make_field("one", {"u", unit}, [](const Vec&) { return Mat(Mat::Identity(2, 2)); });
  CHECK(lp_norm(one, unit, 2.0, id) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(lp_norm(one, unit, 1.0, id) == doctest::Approx(1.0).epsilon(1e-13));
  // sup of x^2 over the Gauss grid approaches 1 from below (largest node ~ 0.9987).
  const MetricField sq = make_field("sq", {"u", unit}, [](const Vec& x) { return Mat(x[0] * x[0] * Mat::Identity(2, 2)); });
  CHECK(c0_norm(sq, unit, id, 33) == doctest::Approx(1.0).epsilon(3e-3));
  CHECK(c0_norm(sq, unit, id, 33) <= 1.0);
  CHECK_THROWS_AS(lp_norm(one, unit, 0.5, id), DomainError);
  CHECK_THROWS_AS(c0_norm(one, Box::square(0.0, 2.0), id), DomainError);
}

TEST_CASE("norm axioms on random constant tensors") {
  gen::Rng rng(17);
  const Box unit = Box::square(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat s = gen::symmetric(rng, 2), t = gen::symmetric(rng, 2), b = gen::spd(rng, 2);
    const double a = rng.uniform(-3.0, 3.0);
    auto c = [](Mat m) { return TensorFn([m](const Vec&) -> std::optional<Mat> { return m; }); };
    const double ns = lp_norm(c(s), unit, 2.0, b, 5), nt = lp_norm(c(t), unit, 2.0, b, 5);
    CHECK(lp_norm(c(s + t), unit, 2.0, b, 5) <= ns + nt + 1e-10);
    CHECK(lp_norm(c(a * s), unit, 2.0, b, 5) == doctest::Approx(std::abs(a) * ns).epsilon(1e-10));
    CHECK(c0_norm(c(s + t), unit, b, 5) <= c0_norm(c(s), unit, b, 5) + c0_norm(c(t), unit, b, 5) + 1e-10);
  }
}

TEST_CASE("operator norm is invariant under orthogonal change of background frame") {
  gen::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(2, 4);
    const Mat t = gen::symmetric(rng, n), b = gen::spd(rng, n), q = gen::orthogonal(rng, n);
    const double v0 = pointwise_opnorm(t, b);
    const double v1 = pointwise_opnorm(q.transpose() * t * q, q.transpose() * b * q);
    CHECK(std::abs(v1 - v0) <= 1e-10 * v0);
  }
}

TEST_CASE("random unit probes never exceed the eigenvalue norm") {
  gen::Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat t = gen::symmetric(rng, 2), b = gen::spd(rng, 2);
    const double norm = pointwise_opnorm(t, b);
    for (int probe = 0; probe < 50; ++probe) {
      Vec v = gen::matrix(rng, 2).col(0), w = gen::matrix(rng, 2).col(1);
      v /= std::sqrt(v.dot(b * v));
      w /= std::sqrt(w.dot(b * w));
      CHECK(std::abs(v.dot(t * w)) <= norm + 1e-10);
    }
  }
}

TEST_CASE("difference jets of a closed form") {
  // g = diag(1, sin^2 x): d/dx g22 = sin 2x, d2/dx2 g22 = 2 cos 2x.
  const auto f = [](const Vec& x) { return make_diag({1.0, std::sin(x[0]) * std::sin(x[0])}); };
  const Vec x = make_vec({0.7, 0.3});
  const TensorJet j = difference_jet(f, x, 2);
  CHECK(j.d1[0](1, 1) == doctest::Approx(std::sin(1.4)).epsilon(1e-9));
  CHECK(j.d2[0][0](1, 1) == doctest::Approx(2 * std::cos(1.4)).epsilon(1e-7));
  CHECK(std::abs(j.d1[1](1, 1)) < 1e-12);
  CHECK(std::abs(j.d2[0][1](1, 1)) < 1e-8);
}

TEST_CASE("metric field validation") {
  const Box unit = Box::square(-1.0, 1.0);
  const MetricField bad = make_field("bad", {"u", unit}, [](const Vec&) {
    Mat m(2, 2);
    m << 1.0, 0.5, 0.4, 1.0;
    return m;
  });
  CHECK_THROWS_AS(bad.validate(), DomainError);
  const MetricField indefinite = make_field("ind", {"u", unit}, [](const Vec&) { return make_diag({1.0, -1.0}); });
  CHECK_THROWS_AS(indefinite.validate(), DomainError);
  MetricField holed("holed", {"u", unit}, [](const Vec& x) -> std::optional<Mat> {
    if (x[1] == 0.0) return std::nullopt;
    return Mat(Mat::Identity(2, 2));
  });
  CHECK_NOTHROW(holed.validate());
  CHECK_THROWS_AS(holed.value(make_vec({0.3, 0.0})), DomainError);
  CHECK_THROWS_AS(holed.with_undefined({Interface::circle(Vec2::Zero(), 1.0)}), DomainError);
}

TEST_CASE("interface distances") {
  CHECK(Interface::segment({0, 0}, {1, 0}).distance({0.5, 2.0}) == doctest::Approx(2.0));
  CHECK(Interface::segment({0, 0}, {1, 0}).distance({2.0, 0.0}) == doctest::Approx(1.0));
  CHECK(Interface::circle({0, 0}, 2.0).distance({0.5, 0.0}) == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(Interface::point({1, 1}).distance({1, 2}) == doctest::Approx(1.0));
}

TEST_CASE("frames") {
  CHECK(frame_ok(Mat::Identity(2, 2), Mat::Identity(2, 2), true));
  CHECK_FALSE(frame_ok(make_diag({1.0, 0.0}), Mat::Identity(2, 2), false));
  CHECK_FALSE(frame_ok(Mat::Identity(2, 2), make_diag({4.0, 1.0}), true));
}

TEST_CASE("grid CSV export has a header row") {
  const std::string path = (std::filesystem::temp_directory_path() / "geomolt_grid_export_test.csv").string();
  write_grid_csv(path, {"x", "y", "value"}, {make_vec({0.0, 1.0})}, {{2.5}});
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "x,y,value");
  CHECK(row == "0,1,2.5");
}

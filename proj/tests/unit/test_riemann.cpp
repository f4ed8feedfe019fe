#include "doctest.h"
#include "generators.hpp"

#include "geomolt/core/covering.hpp"
#include "geomolt/core/frame.hpp"
#include "geomolt/mollifier/smoothing.hpp"
#include "geomolt/riemann/curvature.hpp"

#include <cmath>

using namespace geomolt;

namespace {

// diag(1, f(x_0)) with f, f', f'' supplied in closed form.
AnalyticJetSource warped(std::function<std::array<double, 3>(double)> f) {
  return AnalyticJetSource(2, [f](const Vec& x, int order) {
    TensorJet j = TensorJet::zero(2, order);
    const auto v = f(x[0]);
    j.value = make_diag({1.0, v[0]});
    j.d1[0](1, 1) = v[1];
    j.d2[0][0](1, 1) = v[2];
    return j;
  });
}

const AnalyticJetSource kSphere = warped([](double t) {
  return std::array<double, 3>{std::sin(t) * std::sin(t), std::sin(2 * t), 2 * std::cos(2 * t)};
});
const AnalyticJetSource kHyperbolic = warped([](double t) {
  return std::array<double, 3>{std::exp(2 * t), 2 * std::exp(2 * t), 4 * std::exp(2 * t)};
});
const AnalyticJetSource kPolar = warped([](double r) { return std::array<double, 3>{r * r, 2 * r, 2.0}; });

// Contractions in an orthonormal frame, used as an independent check of the 4D Euler density.
struct Squares {
  double rm = 0.0, ric = 0.0, scalar = 0.0;
};

Squares squares(const CurvatureAt& c) {
  const int n = c.dim;
  const Mat w = orthonormalize(c.metric, Mat::Identity(n, n));
  std::vector<double> r(n * n * n * n, 0.0);  // R_abcd = <R(w_c, w_d) w_b, w_a>
  auto at = [&](int a, int b, int cc, int d) -> double& { return r[((a * n + b) * n + cc) * n + d]; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d) {
          double v = 0.0;
          for (int L = 0; L < n; ++L)
            for (int K = 0; K < n; ++K)
              for (int I = 0; I < n; ++I)
                for (int J = 0; J < n; ++J) {
                  v += (w.col(a).transpose() * c.metric.col(L))(0) * c(L, K, I, J) * w(K, b) * w(I, cc) * w(J, d);
                }
          at(a, b, cc, d) = v;
        }
  Squares s;
  Mat ric = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d) {
          s.rm += at(a, b, cc, d) * at(a, b, cc, d);
          if (a == cc) ric(b, d) += at(a, b, cc, d);
        }
  s.ric = ric.squaredNorm();
  s.scalar = ric.trace();
  return s;
}

}  // namespace

TEST_CASE("Christoffel symbols of reference metrics") {
  const AnalyticJetSource flat(2, [](const Vec&, int order) {
    TensorJet j = TensorJet::zero(2, order);
    j.value = make_diag({1.0, 1.0});
    return j;
  });
  const auto e = christoffel(flat, make_vec({0.3, 0.4}));
  for (int k = 0; k < 2; ++k) CHECK(e.gamma.gamma[k].cwiseAbs().maxCoeff() == 0.0);

  const auto p = christoffel(kPolar, make_vec({2.0, 0.1}));
  CHECK(p.gamma(0, 1, 1) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(p.gamma(1, 0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p.gamma(1, 1, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p.gamma(0, 0, 0) == 0.0);

  const auto s = christoffel(kSphere, make_vec({kPi / 4, 0.0}));
  CHECK(s.gamma(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(s.gamma(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Gaussian curvature of the sphere and the hyperbolic plane") {
  for (int i = 0; i < 100; ++i) {
    const double t = 0.1 + (kPi - 0.2) * i / 99.0;
    const CurvatureAt c = curvature(kSphere, make_vec({t, 0.3}));
    CHECK(std::abs(c.gaussian - 1.0) <= 1e-8);
    CHECK(std::abs(c.scalar - 2.0) <= 1e-8);
  }
  gen::Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const CurvatureAt c = curvature(kHyperbolic, gen::point_in(rng, Box::square(-1, 1)));
    CHECK(std::abs(c.gaussian + 1.0) <= 1e-6);
  }
  // Difference jets of the closed-form field reach the same answer at their own accuracy.
  const MetricField sphere = make_field("sphere", {"s", Box(make_vec({0.1, -3}), make_vec({3, 3}))},
                                        [](const Vec& x) { return make_diag({1.0, std::sin(x[0]) * std::sin(x[0])}); });
  CHECK(curvature(sphere, make_vec({1.0, 0.0})).gaussian == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(curvature(kPolar, make_vec({1.5, 0.0})).gaussian == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("curvature identities on random metrics") {
  gen::Rng rng(17);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const gen::QuadraticMetric g(rng, n);
      const Vec x = gen::point_in(rng, Box::square(-0.5, 0.5, n));
      const CurvatureAt c = curvature(g, x);
      for (int k = 0; k < n; ++k) CHECK((c.gamma.gamma[k] - c.gamma.gamma[k].transpose()).cwiseAbs().maxCoeff() <= 1e-12);
      double anti = 0.0, bianchi = 0.0;
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              anti = std::max(anti, std::abs(c(l, k, i, j) + c(l, k, j, i)));
              bianchi = std::max(bianchi, std::abs(c(l, k, i, j) + c(l, i, j, k) + c(l, j, k, i)));
            }
      CHECK(anti <= 1e-8);
      CHECK(bianchi <= 1e-8);
      CHECK((c.ricci - c.ricci.transpose()).cwiseAbs().maxCoeff() <= 1e-8);
      if (n == 2) CHECK(std::abs(c.scalar - 2.0 * c.gaussian) <= 1e-8);
    }
  }
}

TEST_CASE("orthonormalize") {
  const Mat g = make_diag({4.0, 9.0});
  const Mat w = orthonormalize(g, Mat::Identity(2, 2));
  CHECK((w - make_diag({0.5, 1.0 / 3.0})).cwiseAbs().maxCoeff() <= 1e-15);
  gen::Rng rng(5);
  for (int n = 2; n <= 4; ++n) {
    for (int t = 0; t < 20; ++t) {
      const Mat m = gen::spd(rng, n, 0.1, 10.0);
      const Mat raw = gen::matrix(rng, n) + 2.0 * Mat::Identity(n, n);
      const Mat o = orthonormalize(m, raw);
      CHECK((gram(o, m) - Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK(o.determinant() * raw.determinant() > 0.0);
    }
  }
  Mat bad(2, 2);
  bad << 1, 2, 2, 4;
  CHECK_THROWS_AS(orthonormalize(g, bad), DomainError);
}

TEST_CASE("Lipschitz-Killing densities") {
  gen::Rng rng(9);
  CHECK(lk_coefficient(2, 2) == doctest::Approx(-1.0 / (4 * kPi)).epsilon(1e-15));
  CHECK(lk_coefficient(4, 4) == doctest::Approx(1.0 / (32 * kPi * kPi)).epsilon(1e-15));
  CHECK(lk_coefficient(3, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  for (int n = 2; n <= 4; ++n) {
    const gen::QuadraticMetric g(rng, n);
    const Vec x = gen::point_in(rng, Box::square(-0.5, 0.5, n));
    const CurvatureAt c = curvature(g, x);
    const double vol = std::sqrt(c.metric.determinant());
    for (int kappa = 1; kappa <= n; kappa += 2) CHECK(lk_density(c, kappa) == 0.0);
    CHECK(lk_density(c, 0) == doctest::Approx(vol).epsilon(1e-12));
    // kappa = 2 is the scalar curvature density in every dimension.
    CHECK(lk_density(c, 2) == doctest::Approx(-c.scalar * vol / (4 * kPi)).epsilon(1e-8));
    // Frame independence.
    for (int t = 0; t < 5; ++t) {
      const Mat frame = gen::matrix(rng, n) + 2.0 * Mat::Identity(n, n);
      CHECK(std::abs(lk_density(c, 2, frame) - lk_density(c, 2)) <= 1e-8 * std::max(1.0, std::abs(lk_density(c, 2))));
    }
    if (n == 4) {
      const Squares s = squares(c);
      const double euler = (s.rm - 4.0 * s.ric + s.scalar * s.scalar) * vol / (32 * kPi * kPi);
      CHECK(s.scalar == doctest::Approx(c.scalar).epsilon(1e-10));
      CHECK(lk_density(c, 4) == doctest::Approx(euler).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(lk_density(kSphere, 3, make_vec({1.0, 0.0})), DomainError);
}

TEST_CASE("LK measures: kappa = 0 is area and kappa = 2 is a fixed multiple of total curvature") {
  const Box patch(make_vec({0.5, -0.5}), make_vec({1.5, 0.5}));
  CHECK(lk_measure(kSphere, patch, 0) == doctest::Approx(std::cos(0.5) - std::cos(1.5)).epsilon(1e-12));
  CHECK(lk_measure(kSphere, patch, 1) == 0.0);
  const double ks = total_gaussian_curvature(kSphere, patch);
  const double kh = total_gaussian_curvature(kHyperbolic, Box::square(-0.5, 0.5));
  CHECK(ks == doctest::Approx(std::cos(0.5) - std::cos(1.5)).epsilon(1e-10));
  CHECK(kh == doctest::Approx(-(std::exp(0.5) - std::exp(-0.5))).epsilon(1e-6));
  const double rs = lk_measure(kSphere, patch, 2) / ks;
  const double rh = lk_measure(kHyperbolic, Box::square(-0.5, 0.5), 2) / kh;
  CHECK(rs == doctest::Approx(-1.0 / (2 * kPi)).epsilon(1e-10));
  CHECK(rh == doctest::Approx(rs).epsilon(1e-6));
}

TEST_CASE("analytic smoothed curvature matches differences of smoothed values") {
  const MetricField g = make_field("bumpy", {"c", Box::square(-1, 1)}, [](const Vec& x) {
    Mat m(2, 2);
    m << 1.0 + 0.3 * std::sin(2 * x[0]) * std::cos(x[1]), 0.1 * x[0] * x[1], 0.1 * x[0] * x[1], 1.0 + 0.2 * x[0] * x[0];
    return m;
  });
  const Covering cov = build_covering(Box::square(-0.5, 0.5), 0.5, 0.1, {1.05, 0.2, 7});
  const SmoothedTensor s = smooth_wrt_P(g, cov, 0.2);
  CHECK(s.analytic_derivatives());
  const AnalyticJetSource fd(2, [&](const Vec& x, int order) {
    return difference_jet([&](const Vec& p) { return s.value(p); }, x, order);
  });
  for (const Vec& x : {make_vec({0.1, 0.2}), make_vec({-0.3, 0.05}), make_vec({0.24, -0.26})}) {
    const CurvatureAt a = curvature(s, x), b = curvature(fd, x);
    for (int k = 0; k < 2; ++k) {
      CHECK((a.gamma.gamma[k] - b.gamma.gamma[k]).cwiseAbs().maxCoeff() <=
            1e-4 * std::max(1.0, b.gamma.gamma[k].cwiseAbs().maxCoeff()));
    }
    CHECK(std::abs(a.gaussian - b.gaussian) <= 1e-4 * std::max(1.0, std::abs(b.gaussian)));
  }
}

TEST_CASE("C2 metric: smoothed connection and curvature converge") {
  const MetricField g = make_field("sphere", {"s", Box(make_vec({0.2, -1.5}), make_vec({kPi - 0.2, 1.5}))},
                                   [](const Vec& x) { return make_diag({1.0, std::sin(x[0]) * std::sin(x[0])}); });
  const Box region(make_vec({1.0, -0.3}), make_vec({2.0, 0.3}));
  const Covering cov = build_covering(region, 0.5, 0.1);
  const auto rows = c2_convergence_check(g, cov, {0.2, 0.1, 0.05}, {make_vec({1.2, 0.0}), make_vec({1.7, 0.1})});
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].christoffel_error < rows[i - 1].christoffel_error);
    CHECK(rows[i].curvature_error < rows[i - 1].curvature_error);
    CHECK(rows[i].gaussian_error < rows[i - 1].gaussian_error);
  }
  CHECK(rows.back().gaussian_error < 0.01);
}

TEST_CASE("singular metric matrices are rejected") {
  const AnalyticJetSource degenerate(2, [](const Vec& x, int order) {
    TensorJet j = TensorJet::zero(2, order);
    j.value = make_diag({1.0, x[0] * x[0]});
    j.d1[0](1, 1) = 2 * x[0];
    j.d2[0][0](1, 1) = 2;
    return j;
  });
  CHECK_THROWS_AS(curvature(degenerate, make_vec({0.0, 0.0})), SingularMetricError);
}

// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of failed criteria.

#include "geomolt/core/covering.hpp"
#include "geomolt/core/quadrature.hpp"
#include "geomolt/gallery/cantor.hpp"
#include "geomolt/gallery/metrics.hpp"
#include "geomolt/gallery/surfaces.hpp"
#include "geomolt/mollifier/kernel.hpp"
#include "geomolt/mollifier/smoothing.hpp"
#include "geomolt/riemann/curvature.hpp"
#include "geomolt/surface/measure.hpp"
#include "geomolt/surface/models.hpp"
#include "geomolt/transport/distance.hpp"
#include "geomolt/transport/nonregular.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace geomolt;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Outcome&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  o.detail.precision(6);
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [error: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %s:%s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.str().c_str(), secs);
  std::fflush(stdout);
}

bool decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

// Integral of the kernel over its eps-ball, polar Gauss rule.
double kernel_integral(const Vec& x, double eps) {
  double s = 0.0;
  for_each_gauss_node(0.0, eps, 48, [&](double r, double wr) {
    for_each_gauss_node(0.0, 2.0 * kPi, 64, [&](double a, double wa) {
      s += wr * wa * r * kernel_eval(x, make_vec({x[0] + r * std::cos(a), x[1] + r * std::sin(a)}), eps);
    });
  });
  return s;
}

MetricField conformal_bump() {
  return make_field("conformal", {"c", Box::square(-1, 1)}, [](const Vec& x) {
    const double u = 0.3 * std::exp(-x.squaredNorm());
    return Mat(std::exp(2 * u) * Mat::Identity(2, 2));
  });
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);

  criterion(1, "mollifier normalization", [](Outcome& o) {
    double worst = 0.0;
    for (double eps : {0.2, 0.1, 0.05}) worst = std::max(worst, std::abs(kernel_integral(make_vec({0.1, -0.2}), eps) - 1.0));
    o.detail << " max |int eta - 1| = " << worst;
    o.require(worst <= 1e-6, "|int eta dV - 1| <= 1e-6");
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0), e(0.01, 0.3);
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
      const double eps = e(rng);
      const MollifierKernel k(eps);
      const Vec x = make_vec({u(rng), u(rng)});
      const Vec y = x + eps * make_vec({u(rng), u(rng)});
      if (!(k(x, y) * eps * eps <= k.norm_bound() * (1 + 1e-12))) ++violations;
    }
    o.detail << ", bound violations " << violations << "/1000";
    o.require(violations == 0, "eta eps^n <= ||eta||");
  });

  criterion(2, "constant-field fixed point", [](Outcome& o) {
    Mat c(2, 2);
    c << 2.0, 0.3, 0.3, 1.5;
    const MetricField f = make_field("const", {"c", Box::square(-1, 1)}, [c](const Vec&) { return c; });
    const SmoothedTensor bg = smooth_wrt_background(f, Box::square(-0.5, 0.5), 0.2);
    const SmoothedTensor cov = smooth_wrt_P(f, build_covering(Box::square(-0.5, 0.5), 0.35, 0.05, {1.05, 0.25, 3}), 0.2);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    double value = 0.0, gamma = 0.0, riemann = 0.0;
    for (const SmoothedTensor* s : {&bg, &cov}) {
      for (int i = 0; i < 20; ++i) {
        const Vec x = make_vec({u(rng), u(rng)});
        const CurvatureAt k = curvature(*s, x);
        value = std::max(value, (k.metric - c).cwiseAbs().maxCoeff());
        for (int m = 0; m < 2; ++m) gamma = std::max(gamma, k.gamma.gamma[m].cwiseAbs().maxCoeff());
        for (double r : k.r) riemann = std::max(riemann, std::abs(r));
      }
    }
    o.detail << " value " << value << ", |Gamma| " << gamma << ", |R| " << riemann;
    o.require(value <= 1e-10, "value within 1e-10");
    o.require(gamma <= 1e-10 && riemann <= 1e-10, "Gamma = 0 and R = 0 (1e-10)");
  });

  criterion(3, "C2 convergence on the round-sphere patch", [](Outcome& o) {
    const MetricField g = round_sphere_patch();
    const Box region(make_vec({1.0, -0.3}), make_vec({2.1, 0.3}));
    std::vector<Vec> probes;
    for (int i = 0; i < 5; ++i) {
      for (int k = 0; k < 5; ++k) probes.push_back(make_vec({1.0 + 1.1 * (i + 0.5) / 5, -0.3 + 0.6 * (k + 0.5) / 5}));
    }
    const auto rows = c2_convergence_check(g, build_covering(region, 0.5, 0.1), {0.2, 0.1, 0.05}, probes);
    std::vector<double> k, gam;
    for (const auto& r : rows) {
      k.push_back(r.gaussian_error);
      gam.push_back(r.christoffel_error);
    }
    o.detail << " |K-1| " << k[0] << " " << k[1] << " " << k[2] << "; Gamma error ratios " << gam[0] / gam[1] << " "
             << gam[1] / gam[2];
    o.require(decreasing(k) && k.back() <= 0.05, "|K_eps - 1| decreasing, final <= 0.05");
    bool halves = true;
    for (std::size_t i = 1; i < gam.size(); ++i) halves = halves && gam[i - 1] / gam[i] >= 1.5 && gam[i - 1] / gam[i] <= 3.0;
    o.require(halves, "Christoffel error ratio in [1.5, 3] per halving (measured ratio is second order)");
  });

  criterion(4, "cube vertex curvature", [](Outcome& o) {
    const PiecewiseSurface cube = cube_surface();
    const auto conv = measure_smoothing_convergence(vertex_star_model(cube, 0, 0.5), {0.2, 0.1, 0.05});
    const double v = conv.rows.back().value;
    o.detail << " vertex ball " << conv.rows[0].value << " " << conv.rows[1].value << " " << v << " (pi/2 = " << kPi / 2 << ")";
    o.require(std::abs(v - kPi / 2) <= 0.01 * kPi / 2, "vertex value within 1% of pi/2");
    double total = 0.0;
    for (int k = 0; k < 8; ++k) total += measure_smoothing_convergence(vertex_star_model(cube, k, 0.5), {0.05}).rows[0].value;
    o.detail << ", total " << total << " (4 pi = " << 4 * kPi << ")";
    o.require(std::abs(total - 4 * kPi) <= 0.01 * 4 * kPi, "cube total within 1% of 4 pi");
  });

  criterion(5, "generalized Gauss-Bonnet", [](Outcome& o) {
    const double cube = gauss_bonnet_closed(cube_surface()).residual;
    const double cyl = gauss_bonnet_closed(capped_cylinder()).residual;
    const double sph = gauss_bonnet_closed(sphere_octants()).residual;
    o.detail << " residuals cube " << cube << ", capped cylinder " << cyl << ", sphere " << sph;
    o.require(std::abs(cube) <= 1e-3 && std::abs(cyl) <= 1e-3 && std::abs(sph) <= 1e-3, "residual <= 1e-3");
  });

  criterion(6, "edge-crossing transport", [](Outcome& o) {
    const MetricField dihedral = dihedral_metric();
    const Covering cov = build_covering(Box::square(-0.5, 0.5), 0.5, 0.1, {1.05, 0.3, 5});
    const EdgeCrossing crossing{make_vec({-0.2, -0.3}), make_vec({0.2, 0.3}), make_vec({0, 0}), make_vec({1, 0}),
                                make_vec({0.6, 0.8})};
    std::vector<double> drift;
    for (double eps : {0.05, 0.025, 0.01}) drift.push_back(edge_angle_drift(dihedral, cov, crossing, eps).drift);
    o.detail << " drift " << drift[0] << " " << drift[1] << " " << drift[2];
    o.require(drift.back() <= 1e-2, "drift <= 1e-2 rad at eps = 0.01");
    o.require(decreasing(drift), "drift decreasing with eps");
  });

  criterion(7, "non-regular transport does not depend on the covering", [](Outcome& o) {
    const MetricField dihedral = dihedral_metric();
    const Box region = Box::square(-0.5, 0.5);
    const Covering a = build_covering(region, 0.5, 0.1, {1.05, 0.3, 5});
    const Covering b = build_covering(region, 0.35, 0.1, {1.05, 0.3, 9});
    TransportLimitOptions opt;
    opt.steps_per_unit = 1000;
    const auto lim = transport_limit(dihedral, a, b, CurveSpec::line(make_vec({-0.2, -0.3}), make_vec({0.2, 0.3})),
                                     make_vec({0.6, 0.8}), {0.1, 0.05, 0.025}, opt);
    const double gap = (lim.first.back() - lim.second.back()).norm();
    o.detail << " verdict " << to_string(lim.verdict) << ", covering gap at finest eps " << gap;
    o.require(lim.verdict == Verdict::Converged, "verdict CONVERGED");
    o.require(gap <= 1e-2, "coverings agree within 1e-2");
  });

  criterion(8, "degenerate and oscillating distances", [](Outcome& o) {
    SmoothingOptions light;
    light.rule = {17, 32};
    GridDistanceOptions grid;
    grid.grid_n = 24;
    grid.max_grid_n = 96;
    const Box region = Box::square(-0.75, 0.75);
    const auto deg = nonregular_distance(family_wrt_background(degenerate_metric(), region, light), region,
                                         make_vec({0, -0.5}), make_vec({0, 0.5}), {0.2, 0.1, 0.05}, grid);
    o.detail << " degenerate d_eps " << deg.distances[0] << " " << deg.distances[1] << " " << deg.distances[2] << " ("
             << to_string(deg.trend.verdict) << ")";
    o.require(deg.distances.back() <= 0.05 && decreasing(deg.distances), "degenerate d_eps <= 0.05, decreasing");
    const auto osc = curve_length_limit(family_wrt_background(oscillating_metric(), Box::square(-0.7, 0.7), light),
                                        CurveSpec::line(make_vec({0.0, -0.5}), make_vec({0.0, 0.5})),
                                        {0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625}, 1, 4);
    const double amp = osc.trend.limsup - osc.trend.liminf;
    o.detail << "; oscillating " << to_string(osc.trend.verdict) << " with limsup - liminf " << amp;
    o.require(osc.trend.verdict == Verdict::Oscillating, "oscillating verdict");
    o.require(amp >= 0.1, "limsup - liminf >= 0.1 (band factors 1 and 2 give at most 0.053)");
  });

  criterion(9, "continuous-metric distance agreement", [](Outcome& o) {
    const MetricField g = kinked_metric();
    const Box region = Box::square(-0.8, 0.8);
    GridDistanceOptions grid;
    grid.grid_n = 32;
    grid.max_grid_n = 256;
    grid.connectivity = 16;
    SmoothingOptions light;
    light.rule = {17, 32};
    const Vec x = make_vec({-0.5, -0.4}), y = make_vec({0.5, 0.45});
    const auto est = nonregular_distance(family_wrt_background(g, region, light), region, x, y, {0.1, 0.05, 0.025}, grid);
    const double direct = distance_smoothed(g, region, x, y, grid).value;
    const double rel = std::abs(est.trend.value - direct) / direct;
    o.detail << " non-regular " << est.trend.value << " (" << to_string(est.trend.verdict) << "), direct " << direct
             << ", relative gap " << rel;
    o.require(rel <= 0.02, "agreement within 2%");
  });

  criterion(10, "Cantor suite", [](Outcome& o) {
    const CantorSphere sphere(1 << 20);
    const double gap = sphere.curve().closure_gap().norm();
    const double ln = std::log(2.0) / std::log(3.0);
    const double cs = curvature_dimension(cantor_theta, 3.0 / 16, geometric_windows(0.75 / 9, 1.0 / 3, 20)).slope;
    const double arc = curvature_dimension([](double t) { return t; }, 0.3, geometric_windows(0.01, 0.5, 20)).slope;
    const double corner =
        curvature_dimension([](double t) { return t < 0.3 ? 0.0 : 1.0; }, 0.3, geometric_windows(0.01, 0.5, 20)).slope;
    const auto m = sphere.smoothed_curvature(2.5e-4, 1e-3);
    o.detail << " closure " << gap << ", slopes " << cs << " / " << arc << " / " << corner << ", sphere total "
             << m.total << " (4 pi = " << 4 * kPi << "), off-orbit fraction " << m.off_orbit / m.total;
    o.require(gap <= 1e-3, "|gamma(1)| <= 1e-3");
    o.require(std::abs(cs - ln) <= 0.05, "Cantor-point slope ln2/ln3 +- 0.05");
    o.require(std::abs(arc - 1.0) <= 0.02 && std::abs(corner) <= 0.02, "arc slope 1, corner slope 0 (+- 0.02)");
    o.require(std::abs(m.total - 4 * kPi) <= 0.02 * 4 * kPi, "sphere total 4 pi +- 2%");
    o.require(m.off_orbit <= 1e-3 * std::abs(m.total), "off-orbit mass <= 1e-3 of total");
  });

  criterion(11, "calculus invariants", [](Outcome& o) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    double torsion = 0.0, anti = 0.0, bianchi = 0.0, s2k = 0.0, odd = 0.0, vol = 0.0;
    const std::vector<MetricField> fields = {round_sphere_patch(), hyperbolic_patch(), conformal_bump()};
    const std::vector<Vec> centres = {make_vec({kPi / 2, 0.0}), make_vec({0.0, 0.0}), make_vec({0.0, 0.0})};
    for (std::size_t f = 0; f < fields.size(); ++f) {
      for (int t = 0; t < 20; ++t) {
        const CurvatureAt c = curvature(fields[f], centres[f] + make_vec({u(rng), u(rng)}));
        for (int k = 0; k < 2; ++k) torsion = std::max(torsion, (c.gamma.gamma[k] - c.gamma.gamma[k].transpose()).cwiseAbs().maxCoeff());
        for (int l = 0; l < 2; ++l)
          for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
              for (int j = 0; j < 2; ++j) {
                anti = std::max(anti, std::abs(c(l, k, i, j) + c(l, k, j, i)));
                bianchi = std::max(bianchi, std::abs(c(l, k, i, j) + c(l, i, j, k) + c(l, j, k, i)));
              }
        s2k = std::max(s2k, std::abs(c.scalar - 2 * c.gaussian));
        odd = std::max(odd, std::abs(lk_density(c, 1)));
        vol = std::max(vol, std::abs(lk_density(c, 0) - std::sqrt(c.metric.determinant())));
      }
    }
    // Three dimensions, where the Bianchi identity is not automatic.
    const MetricField g3 = make_field("warped3", {"c", Box::square(-1, 1, 3)}, [](const Vec& x) {
      Mat g = Mat::Identity(3, 3);
      g(0, 1) = g(1, 0) = 0.2 * std::sin(x[2]);
      g(1, 1) = 1.0 + 0.3 * x[0] * x[0];
      g(2, 2) = std::exp(0.4 * x[1]);
      return g;
    });
    for (int t = 0; t < 20; ++t) {
      const CurvatureAt c = curvature(g3, make_vec({u(rng), u(rng), u(rng)}));
      for (int k = 0; k < 3; ++k) torsion = std::max(torsion, (c.gamma.gamma[k] - c.gamma.gamma[k].transpose()).cwiseAbs().maxCoeff());
      for (int l = 0; l < 3; ++l)
        for (int k = 0; k < 3; ++k)
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
              anti = std::max(anti, std::abs(c(l, k, i, j) + c(l, k, j, i)));
              bianchi = std::max(bianchi, std::abs(c(l, k, i, j) + c(l, i, j, k) + c(l, j, k, i)));
            }
      odd = std::max({odd, std::abs(lk_density(c, 1)), std::abs(lk_density(c, 3))});
      vol = std::max(vol, std::abs(lk_density(c, 0) - std::sqrt(c.metric.determinant())));
    }
    std::vector<double> ratios;
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const Box b(Vec(centres[f].array() - 0.4), Vec(centres[f].array() + 0.4));
      ratios.push_back(lk_measure(fields[f], b, 2, 12) / total_gaussian_curvature(fields[f], b, 12));
    }
    double spread = 0.0;
    for (double r : ratios) spread = std::max(spread, std::abs(r / ratios[0] - 1.0));
    o.detail << " torsion " << torsion << ", antisymmetry " << anti << ", Bianchi " << bianchi << ", S-2K " << s2k
             << ", LK odd " << odd << ", LK0-vol " << vol << ", LK2/intK spread " << spread;
    o.require(torsion == 0.0, "torsion symmetry exact");
    o.require(anti <= 1e-8 && bianchi <= 1e-8, "antisymmetry and Bianchi <= 1e-8");
    o.require(s2k <= 1e-8, "S = 2K within 1e-8");
    o.require(odd == 0.0, "odd LK densities vanish exactly");
    o.require(vol <= 1e-8, "LK0 = volume within 1e-8");
    o.require(spread <= 1e-6, "LK2 / int K constant within 1e-6");
  });

  criterion(12, "measure generator", [](Outcome& o) {
    MeasureOptions opt;
    opt.max_depth = 5;
    const auto cube = generator_axioms_check(cube_surface(), 35, 21, opt);
    const auto sphere = generator_axioms_check(sphere_octants(), 15, 22, opt);
    const double val = std::max(cube.valuation_error, sphere.valuation_error);
    const double mono = std::max(cube.monotonicity_violation, sphere.monotonicity_violation);
    const double punct = measure_on_open(cube_surface(), Region::all() - Region::point(0)).value;
    o.detail << " pairs " << cube.pairs + sphere.pairs << ", valuation error " << val << ", monotonicity violation "
             << mono << ", K(M - {p}) " << punct << " (7 pi/2 = " << 3.5 * kPi << ")";
    o.require(cube.pairs + sphere.pairs >= 50, "50 sampled pairs");
    o.require(val <= 1e-6 && mono <= 1e-6, "valuation and monotonicity within 1e-6");
    o.require(std::abs(punct - 3.5 * kPi) <= 0.01 * 3.5 * kPi, "K(M - {p}) = 7 pi/2 +- 1%");
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

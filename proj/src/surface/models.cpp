#include "geomolt/surface/models.hpp"

#include "geomolt/core/parallel.hpp"
#include "geomolt/core/quadrature.hpp"
#include "geomolt/riemann/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace geomolt {
namespace {

constexpr double kTwoPi = 2.0 * kPi;

// Corners at a vertex in counterclockwise order: the face after F shares F's incoming side.
std::vector<Corner> ordered_corners(const PiecewiseSurface& s, int vertex) {
  const auto& corners = s.vertices()[vertex].corners;
  std::vector<Corner> out{corners.front()};
  while (out.size() < corners.size()) {
    const Corner& c = out.back();
    const int edge = s.faces()[c.face].sides[c.side_in].edge;
    auto it = std::find_if(corners.begin(), corners.end(), [&](const Corner& d) {
      return s.faces()[d.face].sides[d.side_out].edge == edge && d.face != c.face;
    });
    if (it == corners.end()) throw DomainError("vertex_star_model: corners do not close up around the vertex");
    if (it->face == out.front().face && it->side_out == out.front().side_out) break;
    out.push_back(*it);
  }
  if (out.size() != corners.size()) throw DomainError("vertex_star_model: vertex star is not a single fan");
  return out;
}

}  // namespace

ChartModel vertex_star_model(const PiecewiseSurface& s, int vertex, double radius) {
  const Vertex& v = s.vertices().at(static_cast<std::size_t>(vertex));
  if (v.on_boundary) throw DomainError("vertex_star_model: boundary vertex");
  if (!(radius > 0.0)) throw DomainError("vertex_star_model: radius must be positive");
  const std::vector<Corner> corners = ordered_corners(s, vertex);
  const int m = static_cast<int>(corners.size());
  if (m < 3) throw DomainError("vertex_star_model: needs at least three corners");
  for (const auto& c : corners) {
    const Face& f = s.faces()[c.face];
    if (!(c.angle < kPi)) throw DomainError("vertex_star_model: corner angles must be below pi");
    for (int side : {c.side_in, c.side_out}) {
      const int e = f.sides[side].edge;
      if (s.edge_length(e) < 1.5 * radius) throw DomainError("vertex_star_model: radius too large for the incident edges");
      for (double tau : {0.05, 0.25, 0.5}) {
        if (std::abs(side_geodesic_curvature(s, c.face, side, tau)) > 1e-8) {
          throw DomainError("vertex_star_model: incident edges must be straight");
        }
      }
    }
    const Vec2 p = s.vertex_chart_point(vertex, c);
    Vec2 din, dout;
    f.side_point(c.side_in, 1.0, &din);
    f.side_point(c.side_out, 0.0, &dout);
    const Vec2 probe = p + 0.1 * (dout.normalized() - din.normalized());
    if (std::abs(face_gaussian_curvature(s, c.face, probe)) > 1e-8) {
      throw DomainError("vertex_star_model: incident faces must be flat");
    }
  }
  std::vector<Mat2> sector_metric;
  std::vector<Interface> rays;
  for (int i = 0; i < m; ++i) {
    const double t0 = kTwoPi * i / m, t1 = kTwoPi * (i + 1) / m;
    Mat2 r;
    r << std::cos(t0), std::cos(t1), std::sin(t0), std::sin(t1);
    const double a = corners[i].angle;
    Mat2 f;
    f << 1.0, std::cos(a), 0.0, std::sin(a);
    const Mat2 A = f * r.inverse();
    sector_metric.push_back(A.transpose() * A);
    rays.push_back(Interface::segment({0.0, 0.0}, {8.0 * radius * std::cos(t0), 8.0 * radius * std::sin(t0)}));
  }
  rays.push_back(Interface::point({0.0, 0.0}));
  MetricField field("star_" + v.name, {"star", Box::square(-2.0 * radius, 2.0 * radius)},
                    [sector_metric, m](const Vec& x) -> std::optional<Mat> {
                      double t = std::atan2(x[1], x[0]);
                      if (t < 0.0) t += kTwoPi;
                      const int i = std::min(m - 1, static_cast<int>(std::floor(t * m / kTwoPi)));
                      return Mat(sector_metric[i]);
                    },
                    Regularity::LpLoc, 1e9);
  field.with_interfaces(rays);
  field.with_description("flat sectors glued along straight rays around vertex " + v.name);
  return {field, Vec2::Zero(), 0.0, radius, 0.0, kTwoPi, {0.0}, true, vertex_defect(s, vertex),
          "ball of radius " + std::to_string(radius) + " around vertex " + v.name};
}

ChartModel cylinder_crease_model() {
  MetricField field = make_field("cylinder_crease", {"crease", Box::square(-2.0, 2.0)},
                                 [](const Vec& x) {
                                   const Vec2 p(x[0], x[1]);
                                   const double r = p.norm();
                                   if (r <= 1.0) return Mat(Mat2::Identity());
                                   const Vec2 rh = p / r, ph(-rh.y(), rh.x());
                                   return Mat(Mat2(rh * rh.transpose() + ph * ph.transpose() / (r * r)));
                                 },
                                 Regularity::C0);
  field.with_interfaces({Interface::circle({0.0, 0.0}, 1.0)});
  field.with_description("flat unit disk glued to a flat cylinder along the unit circle");
  return {field, Vec2::Zero(), 0.8, 1.2, -0.2, 0.2, {1.0}, false, 0.4, "sector r in (0.8, 1.2), |phi| < 0.2"};
}

double smoothed_curvature_integral(const JetSource& g, const ChartModel& model, double epsilon,
                                   const SmoothingConvergenceOptions& options) {
  std::vector<double> breaks;
  for (double f : model.feature_radii) {
    for (int k = 0; k >= (model.compact_support ? 0 : -3); --k) {
      breaks.push_back(f - std::ldexp(epsilon, k));
      breaks.push_back(f + std::ldexp(epsilon, k));
    }
    breaks.push_back(f);
  }
  if (!model.compact_support) breaks.insert(breaks.end(), {model.r0, model.r1});
  for (double& b : breaks) b = std::clamp(b, model.r0, model.r1);
  std::sort(breaks.begin(), breaks.end());
  std::vector<std::pair<double, double>> bands;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] - breaks[i] > 1e-14) bands.push_back({breaks[i], breaks[i + 1]});
  }
  struct Node {
    Vec2 x;
    double w;
  };
  std::vector<Node> nodes;
  const double span = (model.a1 - model.a0) / options.angular_panels;
  for (const auto& [lo, hi] : bands) {
    for_each_gauss_node(lo, hi, options.radial_nodes, [&](double r, double wr) {
      for (int p = 0; p < options.angular_panels; ++p) {
        const double t0 = model.a0 + p * span;
        for_each_gauss_node(t0, t0 + span, options.angular_nodes, [&](double a, double wa) {
          nodes.push_back({model.center + r * Vec2(std::cos(a), std::sin(a)), wr * wa * r});
        });
      }
    });
  }
  std::vector<double> contrib(nodes.size());
  parallel_for(nodes.size(), options.jobs, [&](std::size_t i) {
    const CurvatureAt c = curvature(g, Vec(nodes[i].x));
    contrib[i] = nodes[i].w * c.gaussian * std::sqrt(c.metric.determinant());
  });
  double sum = 0.0;
  for (double c : contrib) sum += c;
  return sum;
}

SmoothingConvergence measure_smoothing_convergence(const ChartModel& model, const std::vector<double>& eps,
                                                   const SmoothingConvergenceOptions& options) {
  if (eps.empty()) throw DomainError("measure_smoothing_convergence: empty epsilon list");
  SmoothingConvergence out;
  out.target = model.target;
  const Box region(Vec(Vec2(model.center.array() - model.r1)), Vec(Vec2(model.center.array() + model.r1)));
  std::vector<double> values;
  for (double e : eps) {
    const SmoothedTensor g = smooth_wrt_background(model.field, region, e, Background::euclidean(2), options.smoothing);
    const double v = smoothed_curvature_integral(g, model, e, options);
    out.rows.push_back({e, v, v - model.target});
    values.push_back(v);
  }
  if (values.size() >= 3) out.trend = classify_trend(values);
  return out;
}

}  // namespace geomolt

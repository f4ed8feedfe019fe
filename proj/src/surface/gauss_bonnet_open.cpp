#include "geomolt/surface/gauss_bonnet.hpp"

#include "geomolt/core/connection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geomolt {
namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

struct Crossing {
  int edge = -1;
  double t = 0.0;
  // Chart point and canonical edge tangent in each adjacent face (index = edge use).
  std::array<Vec2, 2> u;
  std::array<Vec2, 2> tangent;
  std::array<int, 2> face{};
  int enters = -1;           // edge use whose face the boundary enters at this crossing
  Vec2 arriving_chord = Vec2::Zero();
  Vec2 leaving_chord = Vec2::Zero();
  bool arrived = false;
};

class Tracer {
 public:
  Tracer(const PiecewiseSurface& s, const Region& r, const BoundaryTraceOptions& o) : s_(s), r_(r), o_(o) {}

  double level(int face, const Vec2& u) const { return r_.level(SurfacePoint::on_face(s_, face, u), true); }

  Vec2 gradient(int face, const Vec2& u) const {
    const double h = 1e-7 * (1.0 + u.cwiseAbs().maxCoeff());
    Vec2 g;
    for (int k = 0; k < 2; ++k) {
      Vec2 e = Vec2::Zero();
      e[k] = h;
      g[k] = (level(face, u + e) - level(face, u - e)) / (2.0 * h);
    }
    return g;
  }

  // Newton projection onto the zero level; nullopt if it does not converge.
  std::optional<Vec2> project(int face, Vec2 q, double scale) const {
    for (int it = 0; it < 30; ++it) {
      const double f = level(face, q);
      if (std::abs(f) <= 1e-13 * scale) return q;
      const Vec2 g = gradient(face, q);
      const double g2 = g.squaredNorm();
      if (!(g2 > 0.0)) return std::nullopt;
      q -= f * g / g2;
    }
    if (std::abs(level(face, q)) <= 1e-10 * scale) return q;
    return std::nullopt;
  }

  // Boundary direction with the set on the left.
  Vec2 direction(int face, const Vec2& u) const {
    const Vec2 g = gradient(face, u);
    const Vec2 t(-g.y(), g.x());
    if (!(t.norm() > 0.0)) throw DomainError("gauss_bonnet_open: degenerate boundary level");
    return t.normalized();
  }

  const PiecewiseSurface& s_;
  const Region& r_;
  const BoundaryTraceOptions& o_;
};

// Geodesic curvature integral along the chart-straight chord p -> q.
double chord_turning(const Face& f, const Vec2& p, const Vec2& q) {
  const Vec2 d = q - p;
  if (d.norm() == 0.0) return 0.0;
  double sum = 0.0;
  const double gauss[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
  for (double t : gauss) {
    const TensorJet jet = f.metric.jet(Vec(Vec2(p + t * d)), 1);
    const Christoffel gam = christoffel_from_jet(jet);
    Vec2 acc;
    for (int k = 0; k < 2; ++k) acc[k] = d.dot(gam.gamma[k] * d);
    const Mat2 g = jet.value;
    sum += 0.5 * std::sqrt(g.determinant()) * cross2(d, acc) / d.dot(g * d);
  }
  return sum;
}

double chord_length(const Face& f, const Vec2& p, const Vec2& q) {
  const Vec2 d = q - p;
  const Mat2 g = f.metric.value(Vec(Vec2(0.5 * (p + q))));
  return std::sqrt(d.dot(g * d));
}

}  // namespace

GaussBonnetOpen gauss_bonnet_open(const PiecewiseSurface& s, const Region& region, int euler,
                                  const BoundaryTraceOptions& options) {
  check_admissible(s, region, options.measure.edge_samples);
  const Tracer tr(s, region, options);
  GaussBonnetOpen out;
  out.euler = euler;

  // Edge crossings of the boundary.
  std::vector<Crossing> crossings;
  for (int e = 0; e < static_cast<int>(s.edges().size()); ++e) {
    const Edge& edge = s.edges()[e];
    auto f = [&](double t) { return region.level(SurfacePoint::on_edge(s, e, t), true); };
    const int n = options.measure.edge_samples;
    double prev = f(0.0);
    for (int i = 1; i <= n; ++i) {
      const double t1 = static_cast<double>(i) / n;
      const double cur = f(t1);
      if ((cur < 0.0) != (prev < 0.0)) {
        if (edge.uses.size() != 2) throw DomainError("gauss_bonnet_open: the set reaches the surface boundary");
        double a = static_cast<double>(i - 1) / n, b = t1, fa = prev;
        for (int it = 0; it < 100 && b - a > 1e-16; ++it) {
          const double m = 0.5 * (a + b);
          const double fm = f(m);
          if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
          } else {
            b = m;
          }
        }
        Crossing c;
        c.edge = e;
        c.t = 0.5 * (a + b);
        for (int k = 0; k < 2; ++k) {
          c.face[k] = edge.uses[k].first;
          c.u[k] = s.edge_chart_point(e, k, c.t, &c.tangent[k]);
          const Face& face = s.faces()[c.face[k]];
          const int side = edge.uses[k].second;
          const bool fwd = face.sides[side].forward;
          // Inward normal of the face at the side: left of the face's own traversal direction.
          const Vec2 travel = fwd ? c.tangent[k] : Vec2(-c.tangent[k]);
          const Vec2 inward(-travel.y(), travel.x());
          if (tr.direction(c.face[k], c.u[k]).dot(inward) > 0.0) c.enters = k;
        }
        if (c.enters < 0) throw DomainError("gauss_bonnet_open: boundary direction at an edge crossing is undetermined");
        crossings.push_back(c);
      } else if (cur == 0.0 && prev == 0.0) {
        throw DomainError("gauss_bonnet_open: boundary runs along an edge");
      }
      prev = cur;
    }
  }
  out.edge_crossings = static_cast<int>(crossings.size());

  std::vector<std::vector<Vec2>> traced(s.faces().size());
  std::vector<int> next_crossing(crossings.size(), -1);
  int arrival = -1;
  auto add_polyline_turning = [&](int face, const std::vector<Vec2>& pts, bool closed) {
    const Face& f = s.faces()[face];
    const std::size_t m = pts.size();
    for (std::size_t i = 0; i + 1 < m; ++i) {
      out.boundary_turning += chord_turning(f, pts[i], pts[i + 1]);
      out.boundary_length += chord_length(f, pts[i], pts[i + 1]);
    }
    const std::size_t first = closed ? 0 : 1;
    const std::size_t last = closed ? m - 1 : m - 1;
    for (std::size_t i = first; i < last; ++i) {
      const Vec2& prev = closed && i == 0 ? pts[m - 2] : pts[i - 1];
      const Vec2 a = pts[i] - prev, b = pts[i + 1] - pts[i];
      out.boundary_turning += signed_angle(a, b, f.metric.value(Vec(pts[i])));
    }
    traced[face].insert(traced[face].end(), pts.begin(), pts.end());
  };

  auto trace = [&](int face, Vec2 start, int start_crossing) -> std::vector<Vec2> {
    const Face& f = s.faces()[face];
    const double diam = f.shape.bounding_box().extent().norm();
    const double h0 = options.step * diam;
    const double scale = std::max(1.0, diam);
    std::vector<Vec2> pts{start};
    Vec2 p = start;
    const int max_steps = static_cast<int>(50.0 / options.step) + 1000;
    for (int step = 0; step < max_steps; ++step) {
      std::optional<Vec2> q;
      double h = h0;
      for (int tries = 0; tries < 8 && !q; ++tries, h *= 0.5) {
        q = tr.project(face, p + h * tr.direction(face, p), scale);
        if (q && (*q - p).norm() < 0.1 * h) q.reset();
      }
      if (!q) throw DomainError("gauss_bonnet_open: lost the boundary curve in face '" + f.name + "'");
      if (start_crossing < 0) {
        if (pts.size() > 4 && (*q - start).norm() <= 1.5 * h0) {
          pts.push_back(start);
          return pts;
        }
      }
      if (!f.shape.contains(*q, 1e-12)) {
        // Left the face: finish at the nearest crossing on this face's boundary.
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int c = 0; c < static_cast<int>(crossings.size()); ++c) {
          if (c == start_crossing) continue;
          for (int k = 0; k < 2; ++k) {
            if (crossings[c].face[k] != face || crossings[c].enters == k) continue;
            const double d = (crossings[c].u[k] - p).norm();
            if (d < best_d) {
              best_d = d;
              best = c * 2 + k;
            }
          }
        }
        if (best < 0 || best_d > 4.0 * h0) {
          throw DomainError("gauss_bonnet_open: boundary leaves face '" + f.name + "' away from any edge crossing");
        }
        Crossing& c = crossings[best / 2];
        const Vec2 end = c.u[best % 2];
        c.arriving_chord = end - pts.back();
        c.arrived = true;
        arrival = best / 2;
        pts.push_back(end);
        return pts;
      }
      pts.push_back(*q);
      p = *q;
    }
    throw DomainError("gauss_bonnet_open: boundary trace did not terminate");
  };

  // Chains between edge crossings.
  for (int c = 0; c < static_cast<int>(crossings.size()); ++c) {
    const int k = crossings[c].enters;
    const int face = crossings[c].face[k];
    const std::vector<Vec2> pts = trace(face, crossings[c].u[k], c);
    next_crossing[c] = arrival;
    crossings[c].leaving_chord = pts[1] - pts[0];
    add_polyline_turning(face, pts, false);
  }
  for (const auto& c : crossings) {
    if (!c.arrived) throw DomainError("gauss_bonnet_open: unmatched boundary crossing on edge '" + s.edges()[c.edge].name + "'");
    const int in = 1 - c.enters, outk = c.enters;
    const double a_in = signed_angle(c.tangent[in], c.arriving_chord, s.faces()[c.face[in]].metric.value(Vec(c.u[in])));
    const double a_out =
        signed_angle(c.tangent[outk], c.leaving_chord, s.faces()[c.face[outk]].metric.value(Vec(c.u[outk])));
    out.boundary_turning += wrap_angle(a_out - a_in);
  }
  // Loops through edge crossings are the cycles of the crossing successor map.
  int crossing_loops = 0;
  std::vector<bool> seen(crossings.size(), false);
  for (std::size_t c = 0; c < crossings.size(); ++c) {
    if (seen[c]) continue;
    ++crossing_loops;
    for (int k = static_cast<int>(c); k >= 0 && !seen[k]; k = next_crossing[k]) seen[k] = true;
  }

  // Loops inside single faces, seeded from a grid on each face's unit square.
  int inner_loops = 0;
  for (int fi = 0; fi < static_cast<int>(s.faces().size()); ++fi) {
    const Face& f = s.faces()[fi];
    const int n = options.seed_grid;
    const double h0 = options.step * f.shape.bounding_box().extent().norm();
    auto lvl = [&](double a, double b) { return tr.level(fi, f.shape.from_square(Vec2(a, b))); };
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int dir = 0; dir < 2; ++dir) {
          const Vec2 p0 = dir == 0 ? Vec2(static_cast<double>(j) / n, static_cast<double>(i) / n)
                                   : Vec2(static_cast<double>(i) / n, static_cast<double>(j) / n);
          const Vec2 p1 = p0 + (dir == 0 ? Vec2(1.0 / n, 0.0) : Vec2(0.0, 1.0 / n));
          double fa = lvl(p0.x(), p0.y());
          const double fb = lvl(p1.x(), p1.y());
          if ((fa < 0.0) == (fb < 0.0)) continue;
          Vec2 a = p0, b = p1;
          for (int it = 0; it < 80; ++it) {
            const Vec2 m = 0.5 * (a + b);
            const double fm = lvl(m.x(), m.y());
            if ((fm < 0.0) == (fa < 0.0)) {
              a = m;
              fa = fm;
            } else {
              b = m;
            }
          }
          const Vec2 seed = f.shape.from_square(0.5 * (a + b));
          if (!f.shape.contains(seed, -1e-9)) continue;
          bool known = false;
          for (const auto& q : traced[fi]) {
            if ((q - seed).norm() <= 3.0 * h0) {
              known = true;
              break;
            }
          }
          if (known) continue;
          const std::vector<Vec2> loop = trace(fi, seed, -1);
          add_polyline_turning(fi, loop, true);
          ++inner_loops;
        }
      }
    }
  }
  out.loops = inner_loops + crossing_loops;

  const CurvatureMeasure m = MeasureEvaluator(s, {region}, options.measure).measure(region);
  out.vertex_term = m.vertex_part;
  out.edge_term = m.edge_part;
  out.face_term = m.face_part;
  out.residual = out.boundary_turning - (2.0 * kPi * euler - m.vertex_part - m.edge_part - m.face_part);
  return out;
}

}  // namespace geomolt

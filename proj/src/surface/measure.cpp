#include "geomolt/surface/measure.hpp"

#include "geomolt/core/parallel.hpp"
#include "geomolt/core/quadrature.hpp"
#include "geomolt/riemann/curvature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace geomolt {
namespace {

struct FaceBounds {
  double chart = 0.0;    // Lipschitz constant of the unit-square map into the chart
  double ambient = 0.0;  // ... and into R^3
};

FaceBounds face_bounds(const Face& f) {
  FaceBounds b;
  const int n = 17;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 st(static_cast<double>(i) / (n - 1), static_cast<double>(j) / (n - 1));
      Mat2 jac;
      const Vec2 u = f.shape.from_square(st, &jac);
      Eigen::JacobiSVD<Mat2> svd(jac);
      b.chart = std::max(b.chart, svd.singularValues()[0]);
      if (f.embedding) {
        const double h = 1e-6;
        Eigen::Matrix<double, 3, 2> dx;
        for (int k = 0; k < 2; ++k) {
          Vec2 e = Vec2::Zero();
          e[k] = h;
          dx.col(k) = (f.embedding(u + e) - f.embedding(u - e)) / (2.0 * h);
        }
        Eigen::JacobiSVD<Eigen::Matrix<double, 3, 2>> svd3(dx * jac);
        b.ambient = std::max(b.ambient, svd3.singularValues()[0]);
      }
    }
  }
  // Safety factor for the sampled maxima.
  b.chart = 1.25 * b.chart + 1e-12;
  b.ambient = 1.25 * b.ambient + 1e-12;
  return b;
}

// Tensor Chebyshev interpolant (first kind points) on a rectangle, evaluated by the barycentric formula.
class ChebyshevCell {
 public:
  static constexpr int kPoints = 10;

  template <class F>
  ChebyshevCell(double s0, double s1, double t0, double t1, F&& f) : s0_(s0), s1_(s1), t0_(t0), t1_(t1) {
    for (int i = 0; i < kPoints; ++i) {
      const double theta = kPi * (2 * i + 1) / (2.0 * kPoints);
      x_[i] = std::cos(theta);
      w_[i] = ((i % 2 == 0) ? 1.0 : -1.0) * std::sin(theta);
    }
    for (int i = 0; i < kPoints; ++i) {
      for (int j = 0; j < kPoints; ++j) {
        values_[i][j] = f(map(s0_, s1_, x_[i]), map(t0_, t1_, x_[j]));
      }
    }
  }

  double operator()(double s, double t) const {
    std::array<double, kPoints> cs, ct;
    const bool hs = weights(unmap(s0_, s1_, s), cs), ht = weights(unmap(t0_, t1_, t), ct);
    (void)hs;
    (void)ht;
    double v = 0.0;
    for (int i = 0; i < kPoints; ++i) {
      if (cs[i] == 0.0) continue;
      double row = 0.0;
      for (int j = 0; j < kPoints; ++j) row += ct[j] * values_[i][j];
      v += cs[i] * row;
    }
    return v;
  }

 private:
  static double map(double a, double b, double x) { return 0.5 * (a + b) + 0.5 * (b - a) * x; }
  static double unmap(double a, double b, double y) { return (2.0 * y - a - b) / (b - a); }
  // Normalized barycentric coefficients; returns true when x hits a node exactly.
  bool weights(double x, std::array<double, kPoints>& c) const {
    double sum = 0.0;
    for (int i = 0; i < kPoints; ++i) {
      const double d = x - x_[i];
      if (d == 0.0) {
        c.fill(0.0);
        c[i] = 1.0;
        return true;
      }
      c[i] = w_[i] / d;
      sum += c[i];
    }
    for (double& v : c) v /= sum;
    return false;
  }

  double s0_, s1_, t0_, t1_;
  std::array<double, kPoints> x_{}, w_{};
  std::array<std::array<double, kPoints>, kPoints> values_{};
};

double bisect(const std::function<double(double)>& f, double a, double b, double fa) {
  for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

MeasureEvaluator::MeasureEvaluator(const PiecewiseSurface& s, const std::vector<Region>& hints,
                                   const MeasureOptions& options)
    : surface_(&s) {
  if (!s.finalized()) throw DomainError("MeasureEvaluator: surface is not finalized");
  // Vertices.
  for (int v = 0; v < static_cast<int>(s.vertices().size()); ++v) {
    if (s.vertices()[v].on_boundary) continue;
    nodes_.push_back({SurfacePoint::at_vertex(s, v), vertex_defect(s, v), 1.0, 0});
  }
  // Interior edges, split at every hint crossing.
  for (int e = 0; e < static_cast<int>(s.edges().size()); ++e) {
    if (s.edges()[e].uses.size() != 2) continue;
    std::vector<double> breaks;
    for (int p = 0; p <= options.edge_panels; ++p) breaks.push_back(static_cast<double>(p) / options.edge_panels);
    for (const auto& h : hints) {
      auto f = [&](double t) { return h.level(SurfacePoint::on_edge(s, e, t)); };
      const int n = options.edge_samples;
      double prev = f(0.0);
      for (int i = 1; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        const double cur = f(t);
        if ((cur < 0.0) != (prev < 0.0)) breaks.push_back(bisect(f, static_cast<double>(i - 1) / n, t, prev));
        prev = cur;
      }
    }
    std::sort(breaks.begin(), breaks.end());
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
      if (breaks[k + 1] - breaks[k] < 1e-14) continue;
      for_each_gauss_node(breaks[k], breaks[k + 1], options.edge_nodes, [&](double t, double w) {
        nodes_.push_back({SurfacePoint::on_edge(s, e, t), edge_curvature(s, e, t), w * s.edge_speed(e, t), 1});
      });
    }
  }
  // Faces: adaptive cells on the unit square of each face.
  const bool ambient = std::any_of(hints.begin(), hints.end(), [](const Region& r) { return r.uses_ambient(); });
  for (int fi = 0; fi < static_cast<int>(s.faces().size()); ++fi) {
    const Face& f = s.faces()[fi];
    if (ambient && !f.embedding) throw DomainError("MeasureEvaluator: ambient regions need embedded faces");
    const FaceBounds lip = face_bounds(f);
    const int base = options.base_panels;
    std::vector<std::vector<Node>> per_cell(static_cast<std::size_t>(base * base));
    parallel_for(per_cell.size(), options.jobs, [&](std::size_t idx) {
      std::vector<Node>& out = per_cell[idx];
      const int ci = static_cast<int>(idx) / base, cj = static_cast<int>(idx) % base;
      const double cs0 = static_cast<double>(ci) / base, cs1 = static_cast<double>(ci + 1) / base;
      const double ct0 = static_cast<double>(cj) / base, ct1 = static_cast<double>(cj + 1) / base;
      // K2 is smooth on the face: sample it once on a Chebyshev grid of the base cell and interpolate,
      // so refined cells do not pay for a curvature evaluation per node.
      const ChebyshevCell kcell(cs0, cs1, ct0, ct1, [&](double a, double b) {
        return curvature(f.metric, Vec(f.shape.from_square(Vec2(a, b)))).gaussian;
      });
      auto emit = [&](double s0, double s1, double t0, double t1, int nodes) {
        for_each_gauss_node(s0, s1, nodes, [&](double a, double wa) {
          for_each_gauss_node(t0, t1, nodes, [&](double b, double wb) {
            Mat2 jac;
            const Vec2 u = f.shape.from_square(Vec2(a, b), &jac);
            const double det = f.metric.value(Vec(u)).determinant();
            const double da = wa * wb * std::sqrt(det) * std::abs(jac.determinant());
            out.push_back({SurfacePoint::on_face(s, fi, u), kcell(a, b), da, 2});
          });
        });
      };
      std::function<void(double, double, double, double, int)> visit = [&](double s0, double s1, double t0, double t1,
                                                                            int depth) {
        bool mixed = false;
        if (depth < options.max_depth && !hints.empty()) {
          const Vec2 mid(0.5 * (s0 + s1), 0.5 * (t0 + t1));
          const double half_diag = 0.5 * std::hypot(s1 - s0, t1 - t0);
          const SurfacePoint centre = SurfacePoint::on_face(s, fi, f.shape.from_square(mid));
          for (const auto& h : hints) {
            const Interval iv = h.bound(centre, lip.chart * half_diag, lip.ambient * half_diag);
            if (iv.lo < 0.0 && iv.hi >= 0.0) {
              mixed = true;
              break;
            }
          }
        }
        if (!mixed) {
          emit(s0, s1, t0, t1, depth == 0 ? options.base_nodes : options.leaf_nodes);
          return;
        }
        const double sm = 0.5 * (s0 + s1), tm = 0.5 * (t0 + t1);
        visit(s0, sm, t0, tm, depth + 1);
        visit(sm, s1, t0, tm, depth + 1);
        visit(s0, sm, tm, t1, depth + 1);
        visit(sm, s1, tm, t1, depth + 1);
      };
      visit(cs0, cs1, ct0, ct1, 0);
    });
    for (auto& cell : per_cell) {
      for (auto& n : cell) nodes_.push_back(std::move(n));
    }
  }
}

CurvatureMeasure MeasureEvaluator::measure(const Region& r) const {
  CurvatureMeasure m;
  for (const auto& n : nodes_) {
    if (!r.contains(n.p)) continue;
    const double kw = n.k * n.w;
    if (kw > 0.0) m.plus += kw; else m.minus -= kw;
    (n.part == 0 ? m.vertex_part : n.part == 1 ? m.edge_part : m.face_part) += kw;
  }
  m.value = m.plus - m.minus;
  return m;
}

void check_admissible(const PiecewiseSurface& s, const Region& r, int samples) {
  auto reject = [](const std::string& what) { throw DomainError("region is not admissible: " + what); };
  for (int v = 0; v < static_cast<int>(s.vertices().size()); ++v) {
    const double l = r.level(SurfacePoint::at_vertex(s, v), true);
    if (std::abs(l) <= 1e-9) reject("boundary passes through vertex '" + s.vertices()[v].name + "'");
  }
  for (int e = 0; e < static_cast<int>(s.edges().size()); ++e) {
    const std::string& name = s.edges()[e].name;
    auto f = [&](double t) { return r.level(SurfacePoint::on_edge(s, e, t), true); };
    std::vector<double> lv(static_cast<std::size_t>(samples) + 1);
    for (int i = 0; i <= samples; ++i) lv[i] = f(static_cast<double>(i) / samples);
    int flat_run = 0;
    for (int i = 0; i <= samples; ++i) {
      flat_run = std::abs(lv[i]) <= 1e-9 ? flat_run + 1 : 0;
      if (flat_run >= 2) reject("boundary runs along edge '" + name + "'");
    }
    for (int i = 1; i <= samples; ++i) {
      const double t0 = static_cast<double>(i - 1) / samples, t1 = static_cast<double>(i) / samples;
      if ((lv[i] < 0.0) != (lv[i - 1] < 0.0)) {
        const double t = bisect(f, t0, t1, lv[i - 1]);
        const double dt = 1e-7;
        const double ta = std::max(0.0, t - dt), tb = std::min(1.0, t + dt);
        const double slope = (f(tb) - f(ta)) / ((tb - ta) * s.edge_speed(e, t));
        if (std::abs(slope) < 1e-3) reject("boundary crosses edge '" + name + "' tangentially");
      }
    }
    // Touching without crossing: a local extremum of the level that reaches zero.
    for (int i = 1; i < samples; ++i) {
      const bool min_out = lv[i] > 0.0 && lv[i] <= lv[i - 1] && lv[i] <= lv[i + 1];
      const bool max_in = lv[i] < 0.0 && lv[i] >= lv[i - 1] && lv[i] >= lv[i + 1];
      if (!min_out && !max_in) continue;
      double a = static_cast<double>(i - 1) / samples, b = static_cast<double>(i + 1) / samples;
      auto g = [&](double t) { return min_out ? f(t) : -f(t); };
      for (int it = 0; it < 80; ++it) {
        const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        if (g(m1) < g(m2)) b = m2; else a = m1;
      }
      if (std::abs(g(0.5 * (a + b))) <= 1e-9) reject("boundary touches edge '" + name + "' without crossing it");
    }
  }
}

CurvatureMeasure measure_on_open(const PiecewiseSurface& s, const Region& r, const MeasureOptions& options) {
  if (r.kind() == Region::Kind::Point) return vertex_measure(s, r.point_vertex());
  check_admissible(s, r, options.edge_samples);
  return MeasureEvaluator(s, {r}, options).measure(r);
}

CurvatureMeasure vertex_measure(const PiecewiseSurface& s, int vertex) {
  CurvatureMeasure m;
  const double k = vertex_defect(s, vertex);
  (k > 0.0 ? m.plus : m.minus) = std::abs(k);
  m.value = m.vertex_part = k;
  return m;
}

CurvatureMeasure edge_measure(const PiecewiseSurface& s, int edge, int panels, int nodes) {
  CurvatureMeasure m;
  for (int p = 0; p < panels; ++p) {
    for_each_gauss_node(static_cast<double>(p) / panels, static_cast<double>(p + 1) / panels, nodes, [&](double t, double w) {
      const double kw = w * edge_curvature(s, edge, t) * s.edge_speed(edge, t);
      if (kw > 0.0) m.plus += kw; else m.minus -= kw;
    });
  }
  m.value = m.edge_part = m.plus - m.minus;
  return m;
}

Region random_admissible_region(const PiecewiseSurface& s, std::mt19937_64& rng, double min_size, double max_size) {
  if (!s.embedded()) throw DomainError("random_admissible_region: surface faces need embeddings");
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(s.faces().size()) - 1);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Face& f = s.faces()[pick(rng)];
    const Vec3 c = f.embedding(f.shape.from_square(Vec2(u01(rng), u01(rng))));
    const double size = min_size + (max_size - min_size) * u01(rng);
    Region r;
    if (u01(rng) < 0.5) {
      r = Region::ball(c, size);
    } else {
      const Vec3 half(size * (0.5 + u01(rng)), size * (0.5 + u01(rng)), size * (0.5 + u01(rng)));
      r = Region::box(c - half, c + half);
    }
    try {
      check_admissible(s, r, 180);
      return r;
    } catch (const DomainError&) {
      continue;
    }
  }
  throw DomainError("random_admissible_region: no admissible sample found");
}

bool GeneratorAxiomsReport::ok(double tol) const {
  return valuation_error <= tol && additivity_error <= 1e-8 && monotonicity_violation <= 1e-12 && min_part >= 0.0 &&
         decomposition_error <= 1e-8 && shrinking_final <= 1e-3;
}

GeneratorAxiomsReport generator_axioms_check(const PiecewiseSurface& s, const std::vector<std::pair<Region, Region>>& pairs,
                                             const MeasureOptions& options) {
  GeneratorAxiomsReport rep;
  rep.pairs = static_cast<int>(pairs.size());
  // Shrinking balls around interior points of a few faces: the measure must vanish in the limit.
  std::vector<std::vector<Region>> shrinking;
  if (s.embedded()) {
    const int stride = std::max<int>(1, static_cast<int>(s.faces().size()) / 3);
    for (int fi = 0; fi < static_cast<int>(s.faces().size()); fi += stride) {
      const Face& f = s.faces()[fi];
      const Vec3 c = f.embedding(f.shape.from_square(Vec2(0.37, 0.41)));
      std::vector<Region> seq;
      for (double r = 0.2; r > 0.005; r *= 0.5) seq.push_back(Region::ball(c, r));
      shrinking.push_back(seq);
    }
  }
  // One evaluator for everything, so all sets share nodes.
  std::vector<Region> hints;
  for (const auto& [a, b] : pairs) {
    hints.insert(hints.end(), {a, b, a | b, a & b});
  }
  for (const auto& seq : shrinking) hints.insert(hints.end(), seq.begin(), seq.end());
  const MeasureEvaluator ev(s, hints, options);
  for (const auto& [a, b] : pairs) {
    const CurvatureMeasure ma = ev.measure(a), mb = ev.measure(b), mu = ev.measure(a | b), mi = ev.measure(a & b);
    rep.valuation_error = std::max({rep.valuation_error, std::abs(mu.plus + mi.plus - ma.plus - mb.plus),
                                    std::abs(mu.minus + mi.minus - ma.minus - mb.minus)});
    // Pairs whose intersection carries no curvature behave like disjoint pairs.
    if (mi.plus == 0.0 && mi.minus == 0.0) {
      rep.additivity_error = std::max(rep.additivity_error, std::abs(mu.value - ma.value - mb.value));
    }
    for (const auto* m : {&ma, &mb}) {
      rep.monotonicity_violation = std::max({rep.monotonicity_violation, mi.plus - m->plus, mi.minus - m->minus,
                                             m->plus - mu.plus, m->minus - mu.minus});
    }
    for (const auto* m : {&ma, &mb, &mu, &mi}) {
      rep.min_part = std::min({rep.min_part, m->plus, m->minus});
      rep.decomposition_error =
          std::max(rep.decomposition_error, std::abs(m->value - m->vertex_part - m->edge_part - m->face_part));
    }
  }
  for (const auto& seq : shrinking) {
    const CurvatureMeasure m = ev.measure(seq.back());
    rep.shrinking_final = std::max(rep.shrinking_final, m.plus + m.minus);
  }
  return rep;
}

GeneratorAxiomsReport generator_axioms_check(const PiecewiseSurface& s, int pairs, unsigned seed,
                                             const MeasureOptions& options) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Region, Region>> sample;
  for (int i = 0; i < pairs; ++i) {
    const Region a = random_admissible_region(s, rng);
    // Alternate overlapping partners, nested partners and far-apart partners.
    Region b;
    for (int attempt = 0;; ++attempt) {
      b = random_admissible_region(s, rng);
      if (i % 3 == 1) b = b & a;
      const Region cand[] = {a | b, a & b};
      try {
        check_admissible(s, b, 180);
        for (const auto& c : cand) check_admissible(s, c, 180);
        break;
      } catch (const DomainError&) {
        if (attempt > 200) throw;
      }
    }
    sample.emplace_back(a, b);
  }
  return generator_axioms_check(s, sample, options);
}

}  // namespace geomolt

#include "geomolt/surface/surface.hpp"

#include "geomolt/core/connection.hpp"
#include "geomolt/core/quadrature.hpp"
#include "geomolt/riemann/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace geomolt {
namespace {

constexpr double kTwoPi = 2.0 * kPi;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

Mat2 metric_at(const Face& f, const Vec2& u) { return f.metric.value(Vec(u)); }

double norm_in(const Vec2& v, const Mat2& g) { return std::sqrt(v.dot(g * v)); }

}  // namespace

FaceShape FaceShape::rect(Vec2 lo, Vec2 hi) {
  if (!(hi.x() > lo.x() && hi.y() > lo.y())) throw DomainError("FaceShape::rect: empty rectangle");
  FaceShape s;
  s.kind = Kind::Rect;
  s.p0 = lo;
  s.p1 = hi;
  return s;
}

FaceShape FaceShape::triangle(Vec2 a, Vec2 b, Vec2 c) {
  if (cross2(b - a, c - a) <= 0.0) throw DomainError("FaceShape::triangle: corners must be counterclockwise");
  FaceShape s;
  s.kind = Kind::Triangle;
  s.p0 = a;
  s.p1 = b;
  s.p2 = c;
  return s;
}

FaceShape FaceShape::disk(Vec2 center, double radius) {
  if (!(radius > 0.0)) throw DomainError("FaceShape::disk: radius must be positive");
  FaceShape s;
  s.kind = Kind::Disk;
  s.p0 = center;
  s.radius = radius;
  return s;
}

Vec2 FaceShape::boundary(double s, Vec2* d1, Vec2* d2) const {
  s -= std::floor(s);
  if (kind == Kind::Disk) {
    const double a = kTwoPi * s;
    const Vec2 u(std::cos(a), std::sin(a));
    if (d1) *d1 = kTwoPi * radius * Vec2(-u.y(), u.x());
    if (d2) *d2 = -kTwoPi * kTwoPi * radius * u;
    return p0 + radius * u;
  }
  std::vector<Vec2> corners;
  if (kind == Kind::Rect) {
    corners = {p0, Vec2(p1.x(), p0.y()), p1, Vec2(p0.x(), p1.y())};
  } else {
    corners = {p0, p1, p2};
  }
  const int m = static_cast<int>(corners.size());
  const int k = std::min(m - 1, static_cast<int>(std::floor(s * m)));
  const double local = s * m - k;
  const Vec2 a = corners[k], b = corners[(k + 1) % m];
  if (d1) *d1 = m * (b - a);
  if (d2) *d2 = Vec2::Zero();
  return a + local * (b - a);
}

bool FaceShape::contains(const Vec2& u, double tol) const {
  switch (kind) {
    case Kind::Rect:
      return u.x() >= p0.x() - tol && u.x() <= p1.x() + tol && u.y() >= p0.y() - tol && u.y() <= p1.y() + tol;
    case Kind::Triangle: {
      const Vec2 c[3] = {p0, p1, p2};
      for (int k = 0; k < 3; ++k) {
        const Vec2 e = c[(k + 1) % 3] - c[k];
        if (cross2(e, u - c[k]) / e.norm() < -tol) return false;
      }
      return true;
    }
    case Kind::Disk:
      return (u - p0).norm() <= radius + tol;
  }
  return false;
}

Vec2 FaceShape::from_square(const Vec2& st, Mat2* jacobian) const {
  const double s = st.x(), t = st.y();
  switch (kind) {
    case Kind::Rect: {
      const Vec2 w = p1 - p0;
      if (jacobian) *jacobian = w.asDiagonal();
      return p0 + w.cwiseProduct(st);
    }
    case Kind::Triangle: {
      const Vec2 dir = (1.0 - t) * (p1 - p0) + t * (p2 - p0);
      if (jacobian) {
        jacobian->col(0) = dir;
        jacobian->col(1) = s * (p2 - p1);
      }
      return p0 + s * dir;
    }
    case Kind::Disk: {
      const double a = kTwoPi * t;
      const Vec2 u(std::cos(a), std::sin(a));
      if (jacobian) {
        jacobian->col(0) = radius * u;
        jacobian->col(1) = kTwoPi * radius * s * Vec2(-u.y(), u.x());
      }
      return p0 + radius * s * u;
    }
  }
  return p0;
}

Box FaceShape::bounding_box() const {
  switch (kind) {
    case Kind::Rect:
      return Box(Vec(p0), Vec(p1));
    case Kind::Triangle: {
      const Vec2 lo = p0.cwiseMin(p1).cwiseMin(p2), hi = p0.cwiseMax(p1).cwiseMax(p2);
      return Box(Vec(lo), Vec(hi));
    }
    case Kind::Disk:
      return Box(Vec(Vec2(p0.array() - radius)), Vec(Vec2(p0.array() + radius)));
  }
  return {};
}

Vec2 Face::side_point(int k, double tau, Vec2* d1, Vec2* d2) const {
  const Side& sd = sides.at(static_cast<std::size_t>(k));
  const double span = sd.s1 - sd.s0;
  Vec2 b1, b2;
  const Vec2 p = shape.boundary(sd.s0 + tau * span, &b1, &b2);
  if (d1) *d1 = span * b1;
  if (d2) *d2 = span * span * b2;
  return p;
}

double signed_angle(const Vec2& a, const Vec2& b, const Mat2& g) {
  return std::atan2(std::sqrt(g.determinant()) * cross2(a, b), a.dot(g * b));
}

PiecewiseSurface::PiecewiseSurface(std::string name) : name_(std::move(name)) {}

int PiecewiseSurface::add_vertex(std::string name, std::optional<Vec3> position) {
  if (finalized_) throw DomainError("surface already finalized");
  for (const auto& v : vertices_) {
    if (v.name == name) throw DomainError("duplicate vertex '" + name + "'");
  }
  vertices_.push_back({std::move(name), position, {}, false});
  return static_cast<int>(vertices_.size()) - 1;
}

int PiecewiseSurface::add_edge(std::string name, const std::string& v0, const std::string& v1) {
  if (finalized_) throw DomainError("surface already finalized");
  for (const auto& e : edges_) {
    if (e.name == name) throw DomainError("duplicate edge '" + name + "'");
  }
  Edge e;
  e.name = std::move(name);
  e.v0 = vertex_index(v0);
  e.v1 = vertex_index(v1);
  if (e.v0 == e.v1) throw DomainError("edge '" + e.name + "' is a loop; split it with an extra vertex");
  edges_.push_back(std::move(e));
  return static_cast<int>(edges_.size()) - 1;
}

int PiecewiseSurface::add_face(std::string name, FaceShape shape, MetricField metric,
                               std::function<Vec3(const Vec2&)> embedding, const std::vector<SideSpec>& sides) {
  if (finalized_) throw DomainError("surface already finalized");
  if (metric.dim() != 2) throw DomainError("face '" + name + "': metric must be two-dimensional");
  if (sides.size() < 2) throw DomainError("face '" + name + "': needs at least two sides");
  Face f{std::move(name), shape, std::move(metric), std::move(embedding), {}};
  for (const auto& sd : sides) {
    if (!(sd.s1 > sd.s0)) throw DomainError("face '" + f.name + "': side parameters must increase");
    f.sides.push_back({edge_index(sd.edge), sd.forward, sd.s0, sd.s1});
  }
  faces_.push_back(std::move(f));
  return static_cast<int>(faces_.size()) - 1;
}

int PiecewiseSurface::vertex_index(const std::string& name) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].name == name) return static_cast<int>(i);
  }
  throw DomainError("unknown vertex '" + name + "'");
}

int PiecewiseSurface::edge_index(const std::string& name) const {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].name == name) return static_cast<int>(i);
  }
  throw DomainError("unknown edge '" + name + "'");
}

int PiecewiseSurface::face_index(const std::string& name) const {
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    if (faces_[i].name == name) return static_cast<int>(i);
  }
  throw DomainError("unknown face '" + name + "'");
}

bool PiecewiseSurface::embedded() const {
  return std::all_of(faces_.begin(), faces_.end(), [](const Face& f) { return static_cast<bool>(f.embedding); });
}

void PiecewiseSurface::require_finalized() const {
  if (!finalized_) throw DomainError("surface '" + name_ + "' is not finalized");
}

void PiecewiseSurface::finalize(bool closed, double glue_tol) {
  if (finalized_) return;
  closed_ = closed;
  for (int fi = 0; fi < static_cast<int>(faces_.size()); ++fi) {
    Face& f = faces_[fi];
    const int m = static_cast<int>(f.sides.size());
    const double total = f.sides.back().s1 - f.sides.front().s0;
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("face '" + f.name + "': sides must cover the whole outline");
    for (int k = 0; k < m; ++k) {
      const Side& a = f.sides[k];
      const Side& b = f.sides[(k + 1) % m];
      if (k + 1 < m && std::abs(a.s1 - b.s0) > 1e-12) {
        throw DomainError("face '" + f.name + "': sides are not contiguous");
      }
      const Edge& ea = edges_[a.edge];
      const Edge& eb = edges_[b.edge];
      const int end_a = a.forward ? ea.v1 : ea.v0;
      const int start_b = b.forward ? eb.v0 : eb.v1;
      if (end_a != start_b) {
        throw DomainError("face '" + f.name + "': side " + std::to_string(k) + " ends at '" + vertices_[end_a].name +
                          "' but the next side starts at '" + vertices_[start_b].name + "'");
      }
      vertices_[end_a].corners.push_back({fi, k, (k + 1) % m, 0.0});
      edges_[a.edge].uses.emplace_back(fi, k);
    }
  }
  for (auto& e : edges_) {
    if (e.uses.empty() || e.uses.size() > 2) {
      throw DomainError("edge '" + e.name + "' is used by " + std::to_string(e.uses.size()) + " faces");
    }
    if (e.uses.size() == 1) {
      if (closed_) throw DomainError("closed surface: edge '" + e.name + "' borders a single face");
      vertices_[e.v0].on_boundary = vertices_[e.v1].on_boundary = true;
    } else {
      const Side& a = faces_[e.uses[0].first].sides[e.uses[0].second];
      const Side& b = faces_[e.uses[1].first].sides[e.uses[1].second];
      if (a.forward == b.forward) throw DomainError("edge '" + e.name + "': adjacent faces are not coherently oriented");
    }
  }
  finalized_ = true;
  const double mismatch = glue_mismatch(50);
  if (mismatch > glue_tol) {
    finalized_ = false;
    std::ostringstream os;
    os << "surface '" << name_ << "': faces do not glue (length-element mismatch " << mismatch << ")";
    throw DomainError(os.str());
  }
  for (auto& v : vertices_) {
    if (v.corners.empty()) throw DomainError("vertex '" + v.name + "' belongs to no face");
    for (auto& c : v.corners) {
      c.angle = corner_angle(c);
      if (!(c.angle > 1e-9)) {
        finalized_ = false;
        throw DomainError("vertex '" + v.name + "': zero interior angle in face '" + faces_[c.face].name + "'");
      }
    }
  }
}

int PiecewiseSurface::euler_characteristic() const {
  return static_cast<int>(vertices_.size()) - static_cast<int>(edges_.size()) + static_cast<int>(faces_.size());
}

Vec2 PiecewiseSurface::edge_chart_point(int edge, int use, double t, Vec2* d1, Vec2* d2) const {
  const auto [fi, k] = edges_.at(static_cast<std::size_t>(edge)).uses.at(static_cast<std::size_t>(use));
  const Face& f = faces_[fi];
  const bool fwd = f.sides[k].forward;
  const Vec2 p = f.side_point(k, fwd ? t : 1.0 - t, d1, d2);
  if (d1 && !fwd) *d1 = -*d1;
  return p;
}

Vec2 PiecewiseSurface::vertex_chart_point(int vertex, const Corner& corner) const {
  (void)vertex;
  return faces_[corner.face].side_point(corner.side_out, 0.0);
}

double PiecewiseSurface::edge_speed(int edge, double t) const {
  Vec2 d;
  const Vec2 p = edge_chart_point(edge, 0, t, &d);
  return norm_in(d, metric_at(faces_[edges_[edge].uses[0].first], p));
}

double PiecewiseSurface::edge_length(int edge) const {
  return integrate_1d([&](double t) { return edge_speed(edge, t); }, 0.0, 1.0, 16, 8);
}

double PiecewiseSurface::glue_mismatch(int samples) const {
  double worst = 0.0;
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    if (edges_[e].uses.size() != 2) continue;
    const Face& fa = faces_[edges_[e].uses[0].first];
    const Face& fb = faces_[edges_[e].uses[1].first];
    for (int i = 0; i < samples; ++i) {
      const double t = (i + 0.5) / samples;
      Vec2 da, db;
      const Vec2 pa = edge_chart_point(e, 0, t, &da);
      const Vec2 pb = edge_chart_point(e, 1, t, &db);
      const double la = norm_in(da, metric_at(fa, pa));
      const double lb = norm_in(db, metric_at(fb, pb));
      worst = std::max(worst, std::abs(la - lb) / std::max(1.0, la));
      if (fa.embedding && fb.embedding) worst = std::max(worst, (fa.embedding(pa) - fb.embedding(pb)).norm());
    }
  }
  return worst;
}

double PiecewiseSurface::corner_angle(const Corner& c) const {
  const Face& f = faces_[c.face];
  Vec2 t_in0, t_out0;
  const Vec2 v = f.side_point(c.side_out, 0.0, &t_out0);
  f.side_point(c.side_in, 1.0, &t_in0);
  // Face metrics need not extend to the vertex: measure the angle between the side tangents at chart
  // distance r, in the metric at the bisecting point, and extrapolate r -> 0 from three radii.
  auto angle_at = [&](double r) {
    const double din = r / std::max(t_in0.norm(), 1e-300);
    const double dout = r / std::max(t_out0.norm(), 1e-300);
    Vec2 a, b;
    const Vec2 pin = f.side_point(c.side_in, 1.0 - din, &a);
    const Vec2 pout = f.side_point(c.side_out, dout, &b);
    Vec2 q = 0.5 * (pin + pout);
    if (!f.shape.contains(q, 1e-12)) q = v + 0.5 * ((pin - v) + (pout - v));
    const Mat2 g = metric_at(f, q);
    return kPi - signed_angle(a, b, g);
  };
  const double r = 1e-2 * std::max(1.0, f.shape.bounding_box().extent().maxCoeff());
  const double a1 = angle_at(r), a2 = angle_at(0.5 * r), a4 = angle_at(0.25 * r);
  return (8.0 * a4 - 6.0 * a2 + a1) / 3.0;
}

double vertex_defect(const PiecewiseSurface& s, int vertex) {
  const Vertex& v = s.vertices().at(static_cast<std::size_t>(vertex));
  if (v.on_boundary) throw DomainError("vertex_defect: '" + v.name + "' lies on the surface boundary");
  double sum = 0.0;
  for (const auto& c : v.corners) {
    if (!(c.angle > 1e-9)) throw DomainError("vertex_defect: zero interior angle at '" + v.name + "'");
    sum += c.angle;
  }
  return 2.0 * kPi - sum;
}

double side_geodesic_curvature(const PiecewiseSurface& s, int face, int side, double tau) {
  const Face& f = s.faces().at(static_cast<std::size_t>(face));
  Vec2 d1, d2;
  const Vec2 p = f.side_point(side, tau, &d1, &d2);
  const TensorJet jet = f.metric.jet(Vec(p), 1);
  const Christoffel gam = christoffel_from_jet(jet);
  Vec2 acc = d2;
  for (int k = 0; k < 2; ++k) acc[k] += d1.dot(gam.gamma[k] * d1);
  const Mat2 g = jet.value;
  const double speed = norm_in(d1, g);
  return std::sqrt(g.determinant()) * cross2(d1, acc) / (speed * speed * speed);
}

double edge_curvature(const PiecewiseSurface& s, int edge, double t) {
  const Edge& e = s.edges().at(static_cast<std::size_t>(edge));
  if (!(t > 0.0 && t < 1.0)) throw DomainError("edge_curvature: t must lie inside (0, 1)");
  // Gluing was verified when the surface was finalized; surfaces are immutable afterwards.
  if (!s.finalized()) throw DomainError("edge_curvature: surface is not finalized");
  double sum = 0.0;
  for (const auto& [fi, k] : e.uses) {
    const bool fwd = s.faces()[fi].sides[k].forward;
    sum += side_geodesic_curvature(s, fi, k, fwd ? t : 1.0 - t);
  }
  return sum;
}

double face_gaussian_curvature(const PiecewiseSurface& s, int face, const Vec2& u) {
  return curvature(s.faces().at(static_cast<std::size_t>(face)).metric, Vec(u)).gaussian;
}

double edge_curvature_integral(const PiecewiseSurface& s, int edge, int panels, int nodes) {
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    for_each_gauss_node(static_cast<double>(p) / panels, static_cast<double>(p + 1) / panels, nodes,
                        [&](double t, double w) { sum += w * edge_curvature(s, edge, t) * s.edge_speed(edge, t); });
  }
  return sum;
}

double face_curvature_integral(const PiecewiseSurface& s, int face, int panels, int nodes) {
  const Face& f = s.faces().at(static_cast<std::size_t>(face));
  const QuadratureGrid grid = composite_gauss_grid(Box::square(0.0, 1.0), panels, nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    Mat2 jac;
    const Vec2 u = f.shape.from_square(Vec2(grid.points[i][0], grid.points[i][1]), &jac);
    const CurvatureAt c = curvature(f.metric, Vec(u));
    sum += grid.weights[i] * c.gaussian * std::sqrt(c.metric.determinant()) * std::abs(jac.determinant());
  }
  return sum;
}

GaussBonnetClosed gauss_bonnet_closed(const PiecewiseSurface& s) {
  if (!s.finalized()) throw DomainError("gauss_bonnet_closed: surface is not finalized");
  if (!s.closed()) throw DomainError("gauss_bonnet_closed: surface has boundary");
  GaussBonnetClosed r;
  for (int v = 0; v < static_cast<int>(s.vertices().size()); ++v) r.vertex_term += vertex_defect(s, v);
  for (int e = 0; e < static_cast<int>(s.edges().size()); ++e) r.edge_term += edge_curvature_integral(s, e);
  for (int f = 0; f < static_cast<int>(s.faces().size()); ++f) r.face_term += face_curvature_integral(s, f);
  r.total = r.vertex_term + r.edge_term + r.face_term;
  r.euler = s.euler_characteristic();
  r.residual = r.total - 2.0 * kPi * r.euler;
  return r;
}

}  // namespace geomolt

#include "geomolt/gallery/surfaces.hpp"

#include <cmath>
#include <map>

namespace geomolt {
namespace {

MetricField constant_metric(const std::string& name, const Box& box, const Mat2& g) {
  return make_field(name, {name, box.fattened(1.0)}, [g](const Vec&) { return Mat(g); });
}

Vec3 unit(const Vec3& v) { return v / v.norm(); }

}  // namespace

PiecewiseSurface flat_polyhedron(const std::string& name, const std::vector<Vec3>& positions,
                                 const std::vector<std::vector<int>>& faces, bool closed) {
  PiecewiseSurface s(name);
  for (std::size_t i = 0; i < positions.size(); ++i) s.add_vertex("v" + std::to_string(i), positions[i]);
  std::map<std::pair<int, int>, std::string> edges;
  auto edge_name = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = edges.find(key);
    if (it != edges.end()) return it->second;
    const std::string e = "e" + std::to_string(key.first) + "_" + std::to_string(key.second);
    s.add_edge(e, "v" + std::to_string(key.first), "v" + std::to_string(key.second));
    return edges.emplace(key, e).first->second;
  };
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const auto& c = faces[fi];
    if (c.size() != 3 && c.size() != 4) throw DomainError("flat_polyhedron: faces must be triangles or parallelograms");
    const Vec3 p0 = positions[c[0]];
    const Vec3 a = positions[c[1]] - p0;
    const Vec3 b = positions[c.back()] - p0;
    if (c.size() == 4 && (positions[c[2]] - (p0 + a + b)).norm() > 1e-12) {
      throw DomainError("flat_polyhedron: quadrilateral faces must be parallelograms");
    }
    const FaceShape shape = c.size() == 3 ? FaceShape::triangle({0, 0}, {1, 0}, {0, 1}) : FaceShape::rect({0, 0}, {1, 1});
    const Vec3 a2 = c.size() == 3 ? Vec3(positions[c[1]] - p0) : a;
    const Vec3 b2 = c.size() == 3 ? Vec3(positions[c[2]] - p0) : b;
    Mat2 g;
    g << a2.dot(a2), a2.dot(b2), a2.dot(b2), b2.dot(b2);
    const int m = static_cast<int>(c.size());
    std::vector<PiecewiseSurface::SideSpec> sides;
    for (int k = 0; k < m; ++k) {
      const int from = c[k], to = c[(k + 1) % m];
      sides.push_back({edge_name(from, to), from < to, static_cast<double>(k) / m, static_cast<double>(k + 1) / m});
    }
    const std::string fname = "f" + std::to_string(fi);
    s.add_face(fname, shape, constant_metric(fname, shape.bounding_box(), g),
               [p0, a2, b2](const Vec2& u) { return Vec3(p0 + u.x() * a2 + u.y() * b2); }, sides);
  }
  s.finalize(closed);
  return s;
}

PiecewiseSurface cube_surface() {
  std::vector<Vec3> p;
  for (int i = 0; i < 8; ++i) p.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  // Vertex index = x + 2y + 4z; each face counterclockwise seen from outside.
  const std::vector<std::vector<int>> faces = {
      {0, 2, 3, 1},  // z = 0
      {4, 5, 7, 6},  // z = 1
      {0, 1, 5, 4},  // y = 0
      {2, 6, 7, 3},  // y = 1
      {0, 4, 6, 2},  // x = 0
      {1, 3, 7, 5},  // x = 1
  };
  PiecewiseSurface s = flat_polyhedron("cube", p, faces, true);
  return s;
}

PiecewiseSurface tetrahedron_surface() {
  const std::vector<Vec3> p = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  std::vector<std::vector<int>> faces = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  for (auto& f : faces) {
    const Vec3 n = (p[f[1]] - p[f[0]]).cross(p[f[2]] - p[f[0]]);
    if (n.dot(p[f[0]] + p[f[1]] + p[f[2]]) < 0.0) std::swap(f[1], f[2]);
  }
  return flat_polyhedron("tetrahedron", p, faces, true);
}

PiecewiseSurface sphere_octants() {
  PiecewiseSurface s("sphere_octants");
  const std::vector<Vec3> axes = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  const char* names[] = {"px", "mx", "py", "my", "pz", "mz"};
  for (int i = 0; i < 6; ++i) s.add_vertex(names[i], axes[i]);
  std::map<std::pair<int, int>, std::string> edges;
  auto edge_name = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = edges.find(key);
    if (it != edges.end()) return it->second;
    const std::string e = std::string(names[key.first]) + "_" + names[key.second];
    s.add_edge(e, names[key.first], names[key.second]);
    return edges.emplace(key, e).first->second;
  };
  int count = 0;
  for (int sx = 0; sx < 2; ++sx) {
    for (int sy = 0; sy < 2; ++sy) {
      for (int sz = 0; sz < 2; ++sz) {
        int c[3] = {sx, 2 + sy, 4 + sz};
        Vec3 a = axes[c[0]], b = axes[c[1]], d = axes[c[2]];
        if ((b - a).cross(d - a).dot(a + b + d) < 0.0) {
          std::swap(c[1], c[2]);
          std::swap(b, d);
        }
        const Vec3 eb = b - a, ed = d - a;
        auto point = [a, eb, ed](const Vec2& u) { return Vec3(a + u.x() * eb + u.y() * ed); };
        const std::string fname = "oct" + std::to_string(count++);
        const FaceShape shape = FaceShape::triangle({0, 0}, {1, 0}, {0, 1});
        MetricField metric = make_field(fname, {fname, shape.bounding_box().fattened(0.2)}, [point, eb, ed](const Vec& u) {
          const Vec3 p = point(Vec2(u[0], u[1]));
          const double r = p.norm();
          const Vec3 x = p / r;
          const Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - x * x.transpose();
          Eigen::Matrix<double, 3, 2> j;
          j.col(0) = proj * eb / r;
          j.col(1) = proj * ed / r;
          return Mat(j.transpose() * j);
        });
        std::vector<PiecewiseSurface::SideSpec> sides;
        for (int k = 0; k < 3; ++k) {
          const int from = c[k], to = c[(k + 1) % 3];
          sides.push_back({edge_name(from, to), from < to, k / 3.0, (k + 1) / 3.0});
        }
        s.add_face(fname, shape, metric, [point](const Vec2& u) { return unit(point(u)); }, sides);
      }
    }
  }
  s.finalize(true);
  return s;
}

PiecewiseSurface capped_cylinder(double height) {
  if (!(height > 0.0)) throw DomainError("capped_cylinder: height must be positive");
  PiecewiseSurface s("capped_cylinder");
  s.add_vertex("b0", Vec3(1, 0, 0));
  s.add_vertex("b1", Vec3(-1, 0, 0));
  s.add_vertex("t0", Vec3(1, 0, height));
  s.add_vertex("t1", Vec3(-1, 0, height));
  s.add_edge("bottom_a", "b0", "b1");
  s.add_edge("bottom_b", "b1", "b0");
  s.add_edge("top_a", "t0", "t1");
  s.add_edge("top_b", "t1", "t0");
  s.add_edge("seam0", "b0", "t0");
  s.add_edge("seam1", "b1", "t1");
  const FaceShape disk = FaceShape::disk({0, 0}, 1.0);
  s.add_face("top", disk, constant_metric("top", disk.bounding_box(), Mat2::Identity()),
             [height](const Vec2& u) { return Vec3(u.x(), u.y(), height); },
             {{"top_a", true, 0.0, 0.5}, {"top_b", true, 0.5, 1.0}});
  s.add_face("bottom", disk, constant_metric("bottom", disk.bounding_box(), Mat2::Identity()),
             [](const Vec2& u) { return Vec3(u.x(), -u.y(), 0.0); },
             {{"bottom_b", false, 0.0, 0.5}, {"bottom_a", false, 0.5, 1.0}});
  auto side = [](const Vec2& u) { return Vec3(std::cos(u.x()), std::sin(u.x()), u.y()); };
  const FaceShape side1 = FaceShape::rect({0.0, 0.0}, {kPi, height});
  const FaceShape side2 = FaceShape::rect({kPi, 0.0}, {2.0 * kPi, height});
  s.add_face("side1", side1, constant_metric("side1", side1.bounding_box(), Mat2::Identity()), side,
             {{"bottom_a", true, 0.0, 0.25}, {"seam1", true, 0.25, 0.5}, {"top_a", false, 0.5, 0.75}, {"seam0", false, 0.75, 1.0}});
  s.add_face("side2", side2, constant_metric("side2", side2.bounding_box(), Mat2::Identity()), side,
             {{"bottom_b", true, 0.0, 0.25}, {"seam0", true, 0.25, 0.5}, {"top_b", false, 0.5, 0.75}, {"seam1", false, 0.75, 1.0}});
  s.finalize(true);
  return s;
}

PiecewiseSurface dihedral_surface() {
  PiecewiseSurface s("dihedral");
  s.add_vertex("a", Vec3(-1, -1, 0));
  s.add_vertex("b", Vec3(1, -1, 0));
  s.add_vertex("c", Vec3(1, 0, 0));
  s.add_vertex("d", Vec3(-1, 0, 0));
  s.add_vertex("e", Vec3(1, 1, 1));
  s.add_vertex("f", Vec3(-1, 1, 1));
  s.add_edge("ab", "a", "b");
  s.add_edge("bc", "b", "c");
  s.add_edge("axis", "c", "d");
  s.add_edge("da", "d", "a");
  s.add_edge("ce", "c", "e");
  s.add_edge("ef", "e", "f");
  s.add_edge("fd", "f", "d");
  const FaceShape lower = FaceShape::rect({-1, -1}, {1, 0});
  const FaceShape upper = FaceShape::rect({-1, 0}, {1, 1});
  Mat2 tilted = Mat2::Identity();
  tilted(1, 1) = 2.0;
  s.add_face("flat", lower, constant_metric("flat", lower.bounding_box(), Mat2::Identity()),
             [](const Vec2& u) { return Vec3(u.x(), u.y(), 0.0); },
             {{"ab", true, 0.0, 0.25}, {"bc", true, 0.25, 0.5}, {"axis", true, 0.5, 0.75}, {"da", true, 0.75, 1.0}});
  s.add_face("tilted", upper, constant_metric("tilted", upper.bounding_box(), tilted),
             [](const Vec2& u) { return Vec3(u.x(), u.y(), u.y()); },
             {{"axis", false, 0.0, 0.25}, {"ce", true, 0.25, 0.5}, {"ef", true, 0.5, 0.75}, {"fd", true, 0.75, 1.0}});
  s.finalize(false);
  return s;
}

PiecewiseSurface disk_annulus() {
  PiecewiseSurface s("disk_annulus");
  s.add_vertex("p0", Vec3(2, 0, 0));
  s.add_vertex("p1", Vec3(-2, 0, 0));
  s.add_vertex("q0", Vec3(3, 0, 0));
  s.add_vertex("q1", Vec3(-3, 0, 0));
  s.add_edge("arc_a", "p0", "p1");
  s.add_edge("arc_b", "p1", "p0");
  s.add_edge("outer_a", "q0", "q1");
  s.add_edge("outer_b", "q1", "q0");
  s.add_edge("seam0", "p0", "q0");
  s.add_edge("seam1", "p1", "q1");
  const FaceShape disk = FaceShape::disk({0, 0}, 2.0);
  s.add_face("disk", disk, constant_metric("disk", disk.bounding_box(), Mat2::Identity()),
             [](const Vec2& u) { return Vec3(u.x(), u.y(), 0.0); }, {{"arc_a", true, 0.0, 0.5}, {"arc_b", true, 0.5, 1.0}});
  auto polar_metric = [](const std::string& name, const Box& box) {
    return make_field(name, {name, box.fattened(0.5)}, [](const Vec& u) { return make_diag({1.0, u[0] * u[0]}); });
  };
  auto polar = [](const Vec2& u) { return Vec3(u.x() * std::cos(u.y()), u.x() * std::sin(u.y()), 0.0); };
  const FaceShape upper = FaceShape::rect({2.0, 0.0}, {3.0, kPi});
  const FaceShape lower = FaceShape::rect({2.0, kPi}, {3.0, 2.0 * kPi});
  s.add_face("annulus_a", upper, polar_metric("annulus_a", upper.bounding_box()), polar,
             {{"seam0", true, 0.0, 0.25}, {"outer_a", true, 0.25, 0.5}, {"seam1", false, 0.5, 0.75}, {"arc_a", false, 0.75, 1.0}});
  s.add_face("annulus_b", lower, polar_metric("annulus_b", lower.bounding_box()), polar,
             {{"seam1", true, 0.0, 0.25}, {"outer_b", true, 0.25, 0.5}, {"seam0", false, 0.5, 0.75}, {"arc_b", false, 0.75, 1.0}});
  s.finalize(false);
  return s;
}

PiecewiseSurface hexagon_fan() {
  std::vector<Vec3> p = {Vec3::Zero()};
  for (int k = 0; k < 6; ++k) p.emplace_back(std::cos(k * kPi / 3.0), std::sin(k * kPi / 3.0), 0.0);
  std::vector<std::vector<int>> faces;
  for (int k = 0; k < 6; ++k) faces.push_back({0, 1 + k, 1 + (k + 1) % 6});
  return flat_polyhedron("hexagon_fan", p, faces, false);
}

}  // namespace geomolt

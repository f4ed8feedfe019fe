#pragma once

#include "geomolt/core/metric_field.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace geomolt {

using Vec3 = Eigen::Vector3d;

/// Chart-space outline of a face, traversed counterclockwise as s runs over [0, 1].
/// Rectangles spend a quarter of s on each side (starting at lo), triangles a third, disks are
/// parametrized by angle 2 pi s.
struct FaceShape {
  enum class Kind { Rect, Triangle, Disk };
  Kind kind = Kind::Rect;
  Vec2 p0 = Vec2::Zero(), p1 = Vec2::Zero(), p2 = Vec2::Zero();
  double radius = 0.0;

  static FaceShape rect(Vec2 lo, Vec2 hi);
  static FaceShape triangle(Vec2 a, Vec2 b, Vec2 c);
  static FaceShape disk(Vec2 center, double radius);

  /// Boundary point at s (taken mod 1) and its first two s-derivatives.
  Vec2 boundary(double s, Vec2* d1 = nullptr, Vec2* d2 = nullptr) const;
  bool contains(const Vec2& u, double tol = 0.0) const;
  /// Map from the unit square onto the face; triangles collapse the side s = 0 onto the first corner,
  /// disks use polar coordinates (s = radius fraction, t = angle fraction).
  Vec2 from_square(const Vec2& st, Mat2* jacobian = nullptr) const;
  Box bounding_box() const;
};

/// A face side: the boundary arc s in [s0, s1] of the face, lying on `edge`. `forward` means the
/// face traverses the edge from its first to its second vertex.
struct Side {
  int edge = -1;
  bool forward = true;
  double s0 = 0.0;
  double s1 = 0.0;
};

struct Face {
  std::string name;
  FaceShape shape;
  MetricField metric;
  /// Isometric embedding into R^3 (optional; needed for ambient region primitives).
  std::function<Vec3(const Vec2&)> embedding;
  std::vector<Side> sides;

  /// Point on side k at tau in [0, 1] along the face's counterclockwise traversal.
  Vec2 side_point(int k, double tau, Vec2* d1 = nullptr, Vec2* d2 = nullptr) const;
};

struct Edge {
  std::string name;
  int v0 = -1;
  int v1 = -1;
  /// (face, side index) pairs; two for interior edges, one on the surface boundary.
  std::vector<std::pair<int, int>> uses;
};

/// A face corner at a vertex: side_in ends at the vertex, side_out leaves it.
struct Corner {
  int face = -1;
  int side_in = -1;
  int side_out = -1;
  double angle = 0.0;
};

struct Vertex {
  std::string name;
  std::optional<Vec3> position;
  std::vector<Corner> corners;
  bool on_boundary = false;
};

/// A triangulated (more generally, polygonal) surface whose faces carry smooth metrics that glue
/// along the edges: the induced length elements on each edge agree from both sides.
class PiecewiseSurface {
 public:
  struct SideSpec {
    std::string edge;
    bool forward = true;
    double s0 = 0.0;
    double s1 = 0.0;
  };

  explicit PiecewiseSurface(std::string name = "surface");

  int add_vertex(std::string name, std::optional<Vec3> position = std::nullopt);
  int add_edge(std::string name, const std::string& v0, const std::string& v1);
  int add_face(std::string name, FaceShape shape, MetricField metric, std::function<Vec3(const Vec2&)> embedding,
               const std::vector<SideSpec>& sides);

  /// Builds incidences, checks side chains, orientation and gluing, and measures the corner angles.
  /// Closed surfaces need every edge shared by exactly two faces.
  void finalize(bool closed = true, double glue_tol = 1e-8);

  const std::string& name() const { return name_; }
  bool closed() const { return closed_; }
  bool finalized() const { return finalized_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Face>& faces() const { return faces_; }
  int vertex_index(const std::string& name) const;
  int edge_index(const std::string& name) const;
  int face_index(const std::string& name) const;
  bool embedded() const;

  /// V - E + F.
  int euler_characteristic() const;

  /// Edge point at canonical parameter t in [0, 1] (first vertex to second), in the chart of use `use`,
  /// with t-derivatives.
  Vec2 edge_chart_point(int edge, int use, double t, Vec2* d1 = nullptr, Vec2* d2 = nullptr) const;
  /// Chart coordinates of a vertex in one of its faces.
  Vec2 vertex_chart_point(int vertex, const Corner& corner) const;
  /// Length element |dc/dt| of the edge in the metric of its first face.
  double edge_speed(int edge, double t) const;
  double edge_length(int edge) const;

  /// Largest mismatch of the induced edge length elements (and embedded positions) over all edges.
  double glue_mismatch(int samples = 50) const;

 private:
  void require_finalized() const;
  double corner_angle(const Corner& c) const;

  std::string name_;
  bool closed_ = true;
  bool finalized_ = false;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Face> faces_;
};

/// Oriented angle from a to b in the metric g (chart orientation), in (-pi, pi].
double signed_angle(const Vec2& a, const Vec2& b, const Mat2& g);

/// K0(v) = 2 pi - sum of the interior angles at v. Rejects boundary vertices.
double vertex_defect(const PiecewiseSurface& s, int vertex);

/// Geodesic curvature of side `side` of face `face` at tau, positive when the side bends toward the face.
double side_geodesic_curvature(const PiecewiseSurface& s, int face, int side, double tau);

/// K1 at edge parameter t: the sum of the edge's geodesic curvatures measured from both faces.
double edge_curvature(const PiecewiseSurface& s, int edge, double t);

/// K2 at a chart point of a face.
double face_gaussian_curvature(const PiecewiseSurface& s, int face, const Vec2& u);

/// Integral of K1 ds over the open edge arc.
double edge_curvature_integral(const PiecewiseSurface& s, int edge, int panels = 16, int nodes = 8);

/// Integral of K2 dA over a face.
double face_curvature_integral(const PiecewiseSurface& s, int face, int panels = 8, int nodes = 6);

struct GaussBonnetClosed {
  double vertex_term = 0.0;
  double edge_term = 0.0;
  double face_term = 0.0;
  double total = 0.0;
  int euler = 0;
  double residual = 0.0;
};

/// Sum of K0 over vertices, K1 over edges and K2 over faces, against 2 pi chi.
GaussBonnetClosed gauss_bonnet_closed(const PiecewiseSurface& s);

}  // namespace geomolt

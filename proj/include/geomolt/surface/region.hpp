#pragma once

#include "geomolt/surface/surface.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace geomolt {

/// A surface point with its chart coordinates in every face that contains it: one representative for
/// face interiors, two on interior edges, one per corner at vertices.
struct SurfacePoint {
  struct Rep {
    int face;
    Vec2 u;
  };
  std::vector<Rep> reps;
  std::optional<Vec3> x;
  int vertex = -1;
  int edge = -1;

  static SurfacePoint on_face(const PiecewiseSurface& s, int face, const Vec2& u);
  static SurfacePoint on_edge(const PiecewiseSurface& s, int edge, double t);
  static SurfacePoint at_vertex(const PiecewiseSurface& s, int vertex);
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Open subset of a surface, {level < 0}, built from primitives by union, intersection and difference.
///
/// Ambient primitives (ball, half-space, box) live in R^3 and need embedded faces; chart primitives
/// (box, disk, half-plane) live in one face's chart and also see the edges and vertices of that face.
/// `point(v)` is the closed singleton {v}; subtracting it punctures a set. Every primitive level is
/// 1-Lipschitz in its own coordinates, which gives rigorous cell bounds for adaptive quadrature.
class Region {
 public:
  enum class Kind {
    All, Empty, Ball, HalfSpace, Box, ChartBox, ChartDisk, ChartHalfPlane, Point, Union, Intersection, Difference
  };

  Region();
  static Region all();
  static Region empty();
  static Region ball(const Vec3& center, double radius);
  /// {x : n . x < offset}
  static Region halfspace(const Vec3& normal, double offset);
  static Region box(const Vec3& lo, const Vec3& hi);
  static Region chart_box(int face, const Vec2& lo, const Vec2& hi);
  static Region chart_disk(int face, const Vec2& center, double radius);
  /// {u : n . u < offset} in the chart of `face`.
  static Region chart_halfplane(int face, const Vec2& normal, double offset);
  static Region point(int vertex);

  Region operator|(const Region& other) const;
  Region operator&(const Region& other) const;
  Region operator-(const Region& other) const;

  Kind kind() const;
  /// Vertex of a point region, -1 for other kinds.
  int point_vertex() const;
  /// Negative inside. With ignore_points, punctures are filled back in (used for boundary checks).
  double level(const SurfacePoint& p, bool ignore_points = false) const;
  bool contains(const SurfacePoint& p) const { return level(p) < 0.0; }
  /// Level bounds over a cell whose points lie within chart distance rc and ambient distance ra of `centre`.
  Interval bound(const SurfacePoint& centre, double rc, double ra) const;
  bool uses_ambient() const;
  /// Textual form, parseable by `parse` (faces and vertices by name).
  std::string to_string(const PiecewiseSurface& s) const;

  /// Grammar: expr := term (('|' | '-') term)*; term := factor ('&' factor)*;
  /// factor := '(' expr ')' | all | empty | ball(x,y,z,r) | halfspace(nx,ny,nz,c) | box(x0,y0,z0,x1,y1,z1)
  ///         | chart_box(face,u0,v0,u1,v1) | chart_disk(face,u,v,r) | chart_halfplane(face,nu,nv,c) | point(vertex)
  static Region parse(const std::string& text, const PiecewiseSurface& s);

  struct Node;

 private:
  explicit Region(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Union over the faces at `vertex` of chart squares of half-width `half_width` centred at the vertex.
Region vertex_square(const PiecewiseSurface& s, int vertex, double half_width);

}  // namespace geomolt

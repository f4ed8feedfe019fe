#include "geomolt/surface/region.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace geomolt {
namespace {

constexpr double kFar = 1e30;

}  // namespace

struct Region::Node {
  Kind kind = Kind::All;
  int index = -1;  // face or vertex
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
  double r = 0.0;
  std::shared_ptr<const Node> left, right;
};

SurfacePoint SurfacePoint::on_face(const PiecewiseSurface& s, int face, const Vec2& u) {
  SurfacePoint p;
  p.reps.push_back({face, u});
  const Face& f = s.faces()[face];
  if (f.embedding) p.x = f.embedding(u);
  return p;
}

SurfacePoint SurfacePoint::on_edge(const PiecewiseSurface& s, int edge, double t) {
  SurfacePoint p;
  p.edge = edge;
  const Edge& e = s.edges()[edge];
  for (int k = 0; k < static_cast<int>(e.uses.size()); ++k) p.reps.push_back({e.uses[k].first, s.edge_chart_point(edge, k, t)});
  const Face& f = s.faces()[p.reps[0].face];
  if (f.embedding) p.x = f.embedding(p.reps[0].u);
  return p;
}

SurfacePoint SurfacePoint::at_vertex(const PiecewiseSurface& s, int vertex) {
  SurfacePoint p;
  p.vertex = vertex;
  const Vertex& v = s.vertices()[vertex];
  for (const auto& c : v.corners) p.reps.push_back({c.face, s.vertex_chart_point(vertex, c)});
  if (v.position) {
    p.x = v.position;
  } else {
    const Face& f = s.faces()[p.reps[0].face];
    if (f.embedding) p.x = f.embedding(p.reps[0].u);
  }
  return p;
}

Region::Region() : Region(all()) {}
Region::Region(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Region Region::all() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::All;
  return Region(n);
}

Region Region::empty() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Empty;
  return Region(n);
}

Region Region::ball(const Vec3& center, double radius) {
  if (!(radius > 0.0)) throw DomainError("Region::ball: radius must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Ball;
  n->a = center;
  n->r = radius;
  return Region(n);
}

Region Region::halfspace(const Vec3& normal, double offset) {
  if (normal.norm() == 0.0) throw DomainError("Region::halfspace: zero normal");
  auto n = std::make_shared<Node>();
  n->kind = Kind::HalfSpace;
  n->a = normal.normalized();
  n->r = offset / normal.norm();
  return Region(n);
}

Region Region::box(const Vec3& lo, const Vec3& hi) {
  if (!((hi - lo).minCoeff() > 0.0)) throw DomainError("Region::box: empty box");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Box;
  n->a = lo;
  n->b = hi;
  return Region(n);
}

Region Region::chart_box(int face, const Vec2& lo, const Vec2& hi) {
  if (!((hi - lo).minCoeff() > 0.0)) throw DomainError("Region::chart_box: empty box");
  auto n = std::make_shared<Node>();
  n->kind = Kind::ChartBox;
  n->index = face;
  n->a = Vec3(lo.x(), lo.y(), 0.0);
  n->b = Vec3(hi.x(), hi.y(), 0.0);
  return Region(n);
}

Region Region::chart_disk(int face, const Vec2& center, double radius) {
  if (!(radius > 0.0)) throw DomainError("Region::chart_disk: radius must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::ChartDisk;
  n->index = face;
  n->a = Vec3(center.x(), center.y(), 0.0);
  n->r = radius;
  return Region(n);
}

Region Region::chart_halfplane(int face, const Vec2& normal, double offset) {
  if (normal.norm() == 0.0) throw DomainError("Region::chart_halfplane: zero normal");
  auto n = std::make_shared<Node>();
  n->kind = Kind::ChartHalfPlane;
  n->index = face;
  const Vec2 unit = normal.normalized();
  n->a = Vec3(unit.x(), unit.y(), 0.0);
  n->r = offset / normal.norm();
  return Region(n);
}

Region Region::point(int vertex) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Point;
  n->index = vertex;
  return Region(n);
}

Region Region::operator|(const Region& other) const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Union;
  n->left = node_;
  n->right = other.node_;
  return Region(n);
}

Region Region::operator&(const Region& other) const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Intersection;
  n->left = node_;
  n->right = other.node_;
  return Region(n);
}

Region Region::operator-(const Region& other) const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Difference;
  n->left = node_;
  n->right = other.node_;
  return Region(n);
}

Region::Kind Region::kind() const { return node_->kind; }

int Region::point_vertex() const { return node_->kind == Kind::Point ? node_->index : -1; }

namespace {

const Vec3& need_x(const SurfacePoint& p) {
  if (!p.x) throw DomainError("Region: ambient primitives need embedded faces");
  return *p.x;
}

}  // namespace

struct RegionEval {
  static double chart(const Region::Node& n, const Vec2& u) {
    switch (n.kind) {
      case Region::Kind::ChartBox:
        return std::max({n.a.x() - u.x(), u.x() - n.b.x(), n.a.y() - u.y(), u.y() - n.b.y()});
      case Region::Kind::ChartDisk:
        return (u - Vec2(n.a.x(), n.a.y())).norm() - n.r;
      case Region::Kind::ChartHalfPlane:
        return n.a.x() * u.x() + n.a.y() * u.y() - n.r;
      default:
        return kFar;
    }
  }
  static double ambient(const Region::Node& n, const Vec3& x) {
    switch (n.kind) {
      case Region::Kind::Ball:
        return (x - n.a).norm() - n.r;
      case Region::Kind::HalfSpace:
        return n.a.dot(x) - n.r;
      case Region::Kind::Box:
        return std::max((n.a - x).maxCoeff(), (x - n.b).maxCoeff());
      default:
        return kFar;
    }
  }
  static double value(const Region::Node& n, const SurfacePoint& p, bool ignore_points) {
    switch (n.kind) {
      case Region::Kind::All: return -kFar;
      case Region::Kind::Empty: return kFar;
      case Region::Kind::Ball:
      case Region::Kind::HalfSpace:
      case Region::Kind::Box: return ambient(n, need_x(p));
      case Region::Kind::ChartBox:
      case Region::Kind::ChartDisk:
      case Region::Kind::ChartHalfPlane: {
        double best = kFar;
        for (const auto& r : p.reps) {
          if (r.face == n.index) best = std::min(best, chart(n, r.u));
        }
        return best;
      }
      case Region::Kind::Point: return (!ignore_points && p.vertex == n.index) ? 0.0 : kFar;
      case Region::Kind::Union: return std::min(value(*n.left, p, ignore_points), value(*n.right, p, ignore_points));
      case Region::Kind::Intersection:
        return std::max(value(*n.left, p, ignore_points), value(*n.right, p, ignore_points));
      case Region::Kind::Difference:
        return std::max(value(*n.left, p, ignore_points), -value(*n.right, p, ignore_points));
    }
    return kFar;
  }
  static Interval bound(const Region::Node& n, const SurfacePoint& c, double rc, double ra) {
    switch (n.kind) {
      case Region::Kind::Ball:
      case Region::Kind::HalfSpace:
      case Region::Kind::Box: {
        const double v = ambient(n, need_x(c));
        return {v - ra, v + ra};
      }
      case Region::Kind::ChartBox:
      case Region::Kind::ChartDisk:
      case Region::Kind::ChartHalfPlane: {
        const double v = value(n, c, true);
        if (v >= kFar) return {kFar, kFar};
        return {v - rc, v + rc};
      }
      case Region::Kind::All: return {-kFar, -kFar};
      case Region::Kind::Empty:
      case Region::Kind::Point: return {kFar, kFar};
      case Region::Kind::Union: {
        const Interval a = bound(*n.left, c, rc, ra), b = bound(*n.right, c, rc, ra);
        return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
      }
      case Region::Kind::Intersection: {
        const Interval a = bound(*n.left, c, rc, ra), b = bound(*n.right, c, rc, ra);
        return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
      }
      case Region::Kind::Difference: {
        const Interval a = bound(*n.left, c, rc, ra), b = bound(*n.right, c, rc, ra);
        return {std::max(a.lo, -b.hi), std::max(a.hi, -b.lo)};
      }
    }
    return {kFar, kFar};
  }
  static bool ambient_used(const Region::Node& n) {
    switch (n.kind) {
      case Region::Kind::Ball:
      case Region::Kind::HalfSpace:
      case Region::Kind::Box: return true;
      case Region::Kind::Union:
      case Region::Kind::Intersection:
      case Region::Kind::Difference: return ambient_used(*n.left) || ambient_used(*n.right);
      default: return false;
    }
  }
};

double Region::level(const SurfacePoint& p, bool ignore_points) const { return RegionEval::value(*node_, p, ignore_points); }

Interval Region::bound(const SurfacePoint& centre, double rc, double ra) const {
  return RegionEval::bound(*node_, centre, rc, ra);
}

bool Region::uses_ambient() const { return RegionEval::ambient_used(*node_); }

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void print(const Region::Node& n, const PiecewiseSurface& s, std::ostringstream& os) {
  using K = Region::Kind;
  switch (n.kind) {
    case K::All: os << "all"; return;
    case K::Empty: os << "empty"; return;
    case K::Ball: os << "ball(" << fmt(n.a.x()) << "," << fmt(n.a.y()) << "," << fmt(n.a.z()) << "," << fmt(n.r) << ")"; return;
    case K::HalfSpace:
      os << "halfspace(" << fmt(n.a.x()) << "," << fmt(n.a.y()) << "," << fmt(n.a.z()) << "," << fmt(n.r) << ")";
      return;
    case K::Box:
      os << "box(" << fmt(n.a.x()) << "," << fmt(n.a.y()) << "," << fmt(n.a.z()) << "," << fmt(n.b.x()) << ","
         << fmt(n.b.y()) << "," << fmt(n.b.z()) << ")";
      return;
    case K::ChartBox:
      os << "chart_box(" << s.faces()[n.index].name << "," << fmt(n.a.x()) << "," << fmt(n.a.y()) << "," << fmt(n.b.x())
         << "," << fmt(n.b.y()) << ")";
      return;
    case K::ChartDisk:
      os << "chart_disk(" << s.faces()[n.index].name << "," << fmt(n.a.x()) << "," << fmt(n.a.y()) << "," << fmt(n.r) << ")";
      return;
    case K::ChartHalfPlane:
      os << "chart_halfplane(" << s.faces()[n.index].name << "," << fmt(n.a.x()) << "," << fmt(n.a.y()) << ","
         << fmt(n.r) << ")";
      return;
    case K::Point: os << "point(" << s.vertices()[n.index].name << ")"; return;
    case K::Union:
    case K::Intersection:
    case K::Difference:
      os << "(";
      print(*n.left, s, os);
      os << (n.kind == K::Union ? " | " : n.kind == K::Intersection ? " & " : " - ");
      print(*n.right, s, os);
      os << ")";
      return;
  }
}

class Parser {
 public:
  Parser(const std::string& text, const PiecewiseSurface& s) : text_(text), s_(s) {}

  Region parse() {
    Region r = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + text_.substr(pos_, 1) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw DomainError("region expression: " + msg + " at position " + std::to_string(pos_) + " in \"" + text_ + "\"");
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string word() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a name");
    return text_.substr(start, pos_ - start);
  }
  double number() {
    skip();
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }
  std::vector<double> numbers(int count) {
    std::vector<double> v;
    for (int i = 0; i < count; ++i) {
      if (i > 0) expect(',');
      v.push_back(number());
    }
    return v;
  }
  Region expr() {
    Region r = term();
    for (;;) {
      if (accept('|')) {
        r = r | term();
      } else if (accept('-')) {
        r = r - term();
      } else {
        return r;
      }
    }
  }
  Region term() {
    Region r = factor();
    while (accept('&')) r = r & factor();
    return r;
  }
  Region factor() {
    if (accept('(')) {
      Region r = expr();
      expect(')');
      return r;
    }
    const std::string name = word();
    if (name == "all") return Region::all();
    if (name == "empty") return Region::empty();
    expect('(');
    Region r;
    if (name == "ball") {
      const auto v = numbers(4);
      r = Region::ball({v[0], v[1], v[2]}, v[3]);
    } else if (name == "halfspace") {
      const auto v = numbers(4);
      r = Region::halfspace({v[0], v[1], v[2]}, v[3]);
    } else if (name == "box") {
      const auto v = numbers(6);
      r = Region::box({v[0], v[1], v[2]}, {v[3], v[4], v[5]});
    } else if (name == "chart_box" || name == "chart_disk" || name == "chart_halfplane") {
      const int face = s_.face_index(word());
      expect(',');
      if (name == "chart_box") {
        const auto v = numbers(4);
        r = Region::chart_box(face, {v[0], v[1]}, {v[2], v[3]});
      } else if (name == "chart_disk") {
        const auto v = numbers(3);
        r = Region::chart_disk(face, {v[0], v[1]}, v[2]);
      } else {
        const auto v = numbers(3);
        r = Region::chart_halfplane(face, {v[0], v[1]}, v[2]);
      }
    } else if (name == "point") {
      r = Region::point(s_.vertex_index(word()));
    } else {
      fail("unknown primitive '" + name + "'");
    }
    expect(')');
    return r;
  }

  const std::string& text_;
  const PiecewiseSurface& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Region::to_string(const PiecewiseSurface& s) const {
  std::ostringstream os;
  print(*node_, s, os);
  return os.str();
}

Region Region::parse(const std::string& text, const PiecewiseSurface& s) { return Parser(text, s).parse(); }

Region vertex_square(const PiecewiseSurface& s, int vertex, double half_width) {
  const Vertex& v = s.vertices().at(static_cast<std::size_t>(vertex));
  Region r = Region::empty();
  bool first = true;
  for (const auto& c : v.corners) {
    const Vec2 p = s.vertex_chart_point(vertex, c);
    const Region sq = Region::chart_box(c.face, p.array() - half_width, p.array() + half_width);
    r = first ? sq : (r | sq);
    first = false;
  }
  return r;
}

}  // namespace geomolt

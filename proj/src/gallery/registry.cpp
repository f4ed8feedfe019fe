#include "geomolt/gallery/registry.hpp"

#include "geomolt/gallery/metrics.hpp"
#include "geomolt/gallery/surfaces.hpp"
#include "geomolt/surface/models.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace geomolt {
namespace {

using Builder = std::function<ExampleObject(const ExampleParams&)>;

struct Entry {
  ExampleInfo info;
  Builder build;
};

int int_param(const ExampleParams& p, const std::string& key) {
  const double v = p.at(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw DomainError("example parameter " + key + " must be an integer");
  return static_cast<int>(v);
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    auto metric = [&t](std::string name, std::string text, ExampleParams defaults, Builder b) {
      t.push_back({{std::move(name), "metric", std::move(text), std::move(defaults)}, std::move(b)});
    };
    auto surface = [&t](std::string name, std::string text, ExampleParams defaults, Builder b) {
      t.push_back({{std::move(name), "surface", std::move(text), std::move(defaults)}, std::move(b)});
    };
    metric("degenerate", "dx^2 + x^2 dy^2 on (-1, 1)^2", {}, [](const ExampleParams&) { return degenerate_metric(); });
    metric("oscillating", "flat bands with factors 1 and 2 accumulating at x = 0", {{"levels", 30}},
           [](const ExampleParams& p) { return oscillating_metric(int_param(p, "levels")); });
    metric("inverse_radius", "(dx^2 + dy^2) / r", {}, [](const ExampleParams&) { return inverse_radius_metric(); });
    metric("dihedral_field", "dx^2 + dy^2 below the x-axis, dx^2 + 2 dy^2 above", {},
           [](const ExampleParams&) { return dihedral_metric(); });
    metric("kinked", "continuous conformal metric with kinks along x = 0.1 and y = 0", {},
           [](const ExampleParams&) { return kinked_metric(); });
    metric("round_sphere_patch", "dtheta^2 + sin^2 theta dphi^2", {}, [](const ExampleParams&) { return round_sphere_patch(); });
    metric("hyperbolic", "dx^2 + e^(2x) dy^2", {}, [](const ExampleParams&) { return hyperbolic_patch(); });
    metric("cylinder_crease", "flat disk glued to a flat cylinder along the unit circle, one chart", {},
           [](const ExampleParams&) { return cylinder_crease_model().field; });
    metric("cube_vertex_star", "star of a cube vertex as flat sectors in one chart", {{"radius", 0.5}},
           [](const ExampleParams& p) { return vertex_star_model(cube_surface(), 0, p.at("radius")).field; });
    surface("cube", "unit cube, 6 flat faces", {}, [](const ExampleParams&) { return cube_surface(); });
    surface("tetrahedron", "regular tetrahedron", {}, [](const ExampleParams&) { return tetrahedron_surface(); });
    surface("sphere", "unit sphere as 8 curved octant faces", {}, [](const ExampleParams&) { return sphere_octants(); });
    surface("capped_cylinder", "unit cylinder closed by two flat disks", {{"height", 2.0}},
            [](const ExampleParams& p) { return capped_cylinder(p.at("height")); });
    surface("dihedral", "half-planes z = 0 and z = y glued along the x-axis", {},
            [](const ExampleParams&) { return dihedral_surface(); });
    surface("disk_annulus", "flat disk inside a flat annulus", {}, [](const ExampleParams&) { return disk_annulus(); });
    surface("hexagon_fan", "six flat triangles around a vertex", {}, [](const ExampleParams&) { return hexagon_fan(); });
    t.push_back({{"cantor_curve", "curve", "closed curve whose tangent angle is 2 pi times the Cantor function",
                  {{"resolution", 65536}}},
                 [](const ExampleParams& p) { return CantorCurve(int_param(p, "resolution")); }});
    return t;
  }();
  return table;
}

const Entry& entry(const std::string& name) {
  for (const auto& e : entries()) {
    if (e.info.name == name) return e;
  }
  std::ostringstream msg;
  msg << "unknown example '" << name << "'; registered:";
  for (const auto& e : entries()) msg << ' ' << e.info.name;
  throw DomainError(msg.str());
}

ExampleParams merged(const ExampleInfo& info, const ExampleParams& params) {
  ExampleParams out = info.defaults;
  for (const auto& [k, v] : params) {
    if (!out.count(k)) throw DomainError("example " + info.name + " has no parameter '" + k + "'");
    out[k] = v;
  }
  return out;
}

json interface_to_json(const Interface& i) {
  switch (i.kind) {
    case Interface::Kind::Segment: return {{"kind", "segment"}, {"a", vec_to_json(i.a)}, {"b", vec_to_json(i.b)}};
    case Interface::Kind::Ellipse: return {{"kind", "ellipse"}, {"center", vec_to_json(i.a)}, {"shape", mat_to_json(i.shape)}};
    case Interface::Kind::Point: return {{"kind", "point"}, {"a", vec_to_json(i.a)}};
  }
  return {};
}

json field_to_json(const MetricField& f) {
  json j;
  j["name"] = f.name();
  j["chart"] = {{"id", f.chart().id}, {"box", box_to_json(f.chart().domain)}};
  j["regularity"] = to_string(f.regularity());
  j["lp_exponent"] = f.lp_exponent();
  j["interfaces"] = json::array();
  for (const auto& i : f.interfaces()) j["interfaces"].push_back(interface_to_json(i));
  j["undefined"] = json::array();
  for (const auto& i : f.undefined_set()) j["undefined"].push_back(interface_to_json(i));
  json samples = json::array();
  const Box& b = f.chart().domain;
  if (f.dim() == 2) {
    for (int i = 0; i < 5; ++i) {
      for (int k = 0; k < 5; ++k) {
        const Vec x = make_vec({b.lo[0] + (b.hi[0] - b.lo[0]) * (i + 0.5) / 5, b.lo[1] + (b.hi[1] - b.lo[1]) * (k + 0.5) / 5});
        const auto g = f.try_eval(x);
        samples.push_back({{"x", vec_to_json(x)}, {"g", g ? mat_to_json(*g) : json(nullptr)}});
      }
    }
  }
  j["samples"] = samples;
  return j;
}

json shape_to_json(const FaceShape& s) {
  static const char* kinds[] = {"rect", "triangle", "disk"};
  return {{"kind", kinds[static_cast<int>(s.kind)]},
          {"p0", vec_to_json(s.p0)},
          {"p1", vec_to_json(s.p1)},
          {"p2", vec_to_json(s.p2)},
          {"radius", s.radius},
          {"box", box_to_json(s.bounding_box())}};
}

json surface_to_json(const PiecewiseSurface& s) {
  json j;
  j["name"] = s.name();
  j["closed"] = s.closed();
  j["euler"] = s.euler_characteristic();
  j["vertices"] = json::array();
  for (const auto& v : s.vertices()) {
    json faces = json::array(), angles = json::array();
    for (const auto& c : v.corners) {
      faces.push_back(s.faces()[c.face].name);
      angles.push_back(c.angle);
    }
    json jv = {{"name", v.name}, {"faces", faces}, {"angles", angles}, {"boundary", v.on_boundary}};
    if (v.position) jv["position"] = {(*v.position)[0], (*v.position)[1], (*v.position)[2]};
    j["vertices"].push_back(jv);
  }
  j["edges"] = json::array();
  for (std::size_t e = 0; e < s.edges().size(); ++e) {
    const Edge& ed = s.edges()[e];
    json faces = json::array(), arc = json::array();
    for (const auto& [f, side] : ed.uses) faces.push_back(s.faces()[f].name);
    for (int k = 0; k <= 8; ++k) arc.push_back(vec_to_json(s.edge_chart_point(static_cast<int>(e), 0, k / 8.0)));
    j["edges"].push_back({{"name", ed.name},
                          {"v0", s.vertices()[ed.v0].name},
                          {"v1", s.vertices()[ed.v1].name},
                          {"faces", faces},
                          {"arc", arc}});
  }
  j["faces"] = json::array();
  for (const auto& f : s.faces()) {
    json sides = json::array();
    for (const auto& sd : f.sides) {
      sides.push_back({{"edge", s.edges()[sd.edge].name}, {"forward", sd.forward}, {"s0", sd.s0}, {"s1", sd.s1}});
    }
    j["faces"].push_back({{"name", f.name}, {"shape", shape_to_json(f.shape)}, {"metric", f.metric.name()}, {"sides", sides}});
  }
  return j;
}

json curve_to_json(const CantorCurve& c) {
  return {{"resolution", c.resolution()},
          {"closure_gap", vec_to_json(c.closure_gap())},
          {"center_of_mass", vec_to_json(c.center_of_mass())},
          {"length", c.polygon_length()}};
}

// First differing path between two JSON documents, or "" when equal.
std::string first_difference(const json& a, const json& b, const std::string& path) {
  if (a.is_number() && b.is_number()) return a == b ? "" : path;
  if (a.type() != b.type()) return path;
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) return path + "/" + it.key();
      const std::string d = first_difference(it.value(), b.at(it.key()), path + "/" + it.key());
      if (!d.empty()) return d;
    }
    return a.size() == b.size() ? "" : path;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return path;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string d = first_difference(a[i], b[i], path + "/" + std::to_string(i));
      if (!d.empty()) return d;
    }
    return "";
  }
  return a == b ? "" : path;
}

}  // namespace

const std::vector<ExampleInfo>& registered_examples() {
  static const std::vector<ExampleInfo> infos = [] {
    std::vector<ExampleInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

const ExampleInfo& example_info(const std::string& name) { return entry(name).info; }

ExampleObject build_example(const std::string& name, const ExampleParams& params) {
  const Entry& e = entry(name);
  ExampleObject obj = e.build(merged(e.info, params));
  if (auto* f = std::get_if<MetricField>(&obj)) f->validate();
  if (auto* s = std::get_if<PiecewiseSurface>(&obj)) {
    if (!s->finalized()) throw DomainError("example " + name + " is not finalized");
  }
  return obj;
}

json example_to_json(const std::string& name, const ExampleParams& params, const ExampleObject& object) {
  const ExampleInfo& info = example_info(name);
  json j;
  j["format"] = "geomolt-example/1";
  j["example"] = name;
  j["kind"] = info.kind;
  j["params"] = json::object();
  for (const auto& [k, v] : merged(info, params)) j["params"][k] = v;
  if (const auto* f = std::get_if<MetricField>(&object)) j["metric"] = field_to_json(*f);
  if (const auto* s = std::get_if<PiecewiseSurface>(&object)) j["surface"] = surface_to_json(*s);
  if (const auto* c = std::get_if<CantorCurve>(&object)) j["curve"] = curve_to_json(*c);
  return j;
}

LoadedExample example_from_json(const json& j) {
  if (j.value("format", "") != "geomolt-example/1") throw DomainError("example file: unknown format");
  const std::string name = j.at("example").get<std::string>();
  ExampleParams params;
  for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it) params[it.key()] = it.value().get<double>();
  LoadedExample out{name, params, build_example(name, params)};
  const json again = example_to_json(name, params, out.object);
  const std::string diff = first_difference(j, again, "");
  if (!diff.empty()) throw DomainError("example file does not match the rebuilt example at " + diff);
  return out;
}

void save_example(const std::string& path, const std::string& name, const ExampleParams& params) {
  write_json_file(path, example_to_json(name, params, build_example(name, params)));
}

LoadedExample load_example(const std::string& path) { return example_from_json(read_json_file(path)); }

}  // namespace geomolt

#include "geomolt/report/report.hpp"

#include "geomolt/core/covering.hpp"
#include "geomolt/gallery/cantor.hpp"
#include "geomolt/gallery/registry.hpp"
#include "geomolt/mollifier/convergence.hpp"
#include "geomolt/riemann/curvature.hpp"
#include "geomolt/surface/measure.hpp"
#include "geomolt/surface/models.hpp"
#include "geomolt/surface/region.hpp"
#include "geomolt/transport/distance.hpp"
#include "geomolt/transport/nonregular.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace geomolt {
namespace {

ExampleParams params_of(const json& c) {
  ExampleParams p;
  if (c.contains("params")) {
    for (auto it = c["params"].begin(); it != c["params"].end(); ++it) p[it.key()] = it.value().get<double>();
  }
  return p;
}

Vec vec_key(const json& c, const std::string& key, std::initializer_list<double> fallback) {
  return c.contains(key) ? vec_from_json(c[key]) : make_vec(fallback);
}

Box box_key(const json& c, const std::string& key, const Box& fallback) {
  if (!c.contains(key)) return fallback;
  const auto v = c[key].get<std::vector<double>>();
  if (v.size() != 4) throw DomainError("config: " + key + " must be [lo_x, lo_y, hi_x, hi_y]");
  return Box(make_vec({v[0], v[1]}), make_vec({v[2], v[3]}));
}

void fail(Report& r, const std::string& what) {
  r.passed = false;
  r.failures.push_back(r.study + ": " + what);
}

void set_trend(Report& r, const std::vector<double>& values) {
  r.verdict = values.size() >= 3 ? to_string(classify_trend(values).verdict) : "MEASURED";
}

bool decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

Table eps_table(const Report& r, const std::string& name) {
  Table t{name, {"eps", "value", "residual"}, {}, {}};
  for (std::size_t i = 0; i < r.eps.size(); ++i) t.rows.push_back({r.eps[i], r.values[i], r.residuals[i]});
  return t;
}

MetricField metric_example(const Report& r) {
  ExampleObject obj = build_example(r.example, params_of(json{{"params", r.params}}));
  if (auto* f = std::get_if<MetricField>(&obj)) return *f;
  throw DomainError(r.study + ": example " + r.example + " is not a metric field");
}

void smooth_study(Report& r, const json& c, int) {
  const MetricField f = metric_example(r);
  const double reach = *std::max_element(r.eps.begin(), r.eps.end());
  const Box region = box_key(c, "region", f.chart().domain.fattened(-1.01 * reach));
  const std::string mode = c.value("mode", "c0");
  ConvergenceOptions opt;
  opt.nodes = c.value("grid", 17);
  const ConvergenceMode m = mode == "lp" ? ConvergenceMode::LpLoc : mode == "ae" ? ConvergenceMode::AE : ConvergenceMode::C0Loc;
  if (mode == "lp") opt.p = f.lp_exponent() < 1e8 ? f.lp_exponent() : 2.0;
  const ConvergenceTable t = convergence_report(f, m, r.eps, region, opt);
  r.values = t.errors;
  r.residuals = t.errors;
  set_trend(r, r.values);
  r.tables.push_back(eps_table(r, "smoothing_error"));
  if (!t.decreasing(1e-12)) fail(r, "smoothing error does not decrease with eps");
  if (c.contains("tolerance") && !(r.values.back() <= c["tolerance"].get<double>())) {
    fail(r, "final smoothing error above tolerance");
  }
}

void curvature_study(Report& r, const json& c, int jobs) {
  const ExampleParams params = params_of(json{{"params", r.params}});
  ExampleObject obj = build_example(r.example, params);
  SmoothingConvergenceOptions opt;
  opt.jobs = jobs;
  if (auto* f = std::get_if<MetricField>(&obj); f && r.example != "cylinder_crease") {
    const Box region = box_key(c, "region", f->chart().domain.fattened(-0.25 * (f->chart().domain.hi - f->chart().domain.lo).minCoeff()));
    const Covering cov = build_covering(region, c.value("cell", 0.5), c.value("overlap", 0.1));
    std::vector<Vec> probes;
    for (int i = 0; i < 5; ++i) {
      for (int k = 0; k < 5; ++k) {
        probes.push_back(make_vec({region.lo[0] + (region.hi[0] - region.lo[0]) * (i + 0.5) / 5, region.lo[1] + (region.hi[1] - region.lo[1]) * (k + 0.5) / 5}));
      }
    }
    const auto rows = c2_convergence_check(*f, cov, r.eps, probes);
    Table t{"c2_convergence", {"eps", "christoffel_error", "curvature_error", "gaussian_error"}, {}, {}};
    for (const auto& row : rows) {
      r.values.push_back(row.gaussian_error);
      r.residuals.push_back(row.gaussian_error);
      t.rows.push_back({row.epsilon, row.christoffel_error, row.curvature_error, row.gaussian_error});
    }
    r.tables.push_back(t);
    set_trend(r, r.values);
    if (!decreasing(r.values)) fail(r, "probe curvature error does not decrease with eps");
    if (!(r.values.back() <= c.value("tolerance", 0.05))) fail(r, "final curvature error above tolerance");
    return;
  }
  ChartModel model = [&] {
    if (r.example == "cylinder_crease") return cylinder_crease_model();
    const auto* s = std::get_if<PiecewiseSurface>(&obj);
    if (!s) throw DomainError("curvature: example " + r.example + " is neither a surface nor a metric");
    return vertex_star_model(*s, s->vertex_index(c.value("vertex", s->vertices().front().name)), c.value("radius", 0.5));
  }();
  const SmoothingConvergence conv = measure_smoothing_convergence(model, r.eps, opt);
  for (const auto& row : conv.rows) {
    r.values.push_back(row.value);
    r.residuals.push_back(row.error);
  }
  r.params["target"] = conv.target;
  r.params["region"] = model.description;
  set_trend(r, r.values);
  r.tables.push_back(eps_table(r, "smoothed_curvature"));
  const double tol = c.value("tolerance", 0.01);
  if (!(std::abs(r.residuals.back()) <= tol * std::abs(conv.target))) fail(r, "smoothed curvature misses the target");
}

void transport_study(Report& r, const json& c, int) {
  const MetricField f = metric_example(r);
  const json x = c.value("crossing", json::object());
  const EdgeCrossing crossing{vec_key(x, "start", {-0.2, -0.3}), vec_key(x, "end", {0.2, 0.3}),
                              vec_key(x, "edge_point", {0.0, 0.0}), vec_key(x, "edge_direction", {1.0, 0.0}),
                              vec_key(x, "v0", {0.6, 0.8})};
  CoveringOptions copt;
  copt.jitter = c.value("jitter", 0.3);
  copt.seed = c.value("seed", 5u);
  const Covering cov = build_covering(box_key(c, "region", Box::square(-0.5, 0.5)), c.value("cell", 0.5),
                                      c.value("overlap", 0.1), copt);
  Table t{"edge_drift", {"eps", "angle_before", "angle_after", "drift"}, {}, {}};
  for (double e : r.eps) {
    const EdgeDrift d = edge_angle_drift(f, cov, crossing, e, c.value("steps_per_unit", 2000));
    r.values.push_back(d.drift);
    r.residuals.push_back(d.drift);
    t.rows.push_back({e, d.angle_before, d.angle_after, d.drift});
  }
  r.tables.push_back(t);
  set_trend(r, r.values);
  if (!decreasing(r.values)) fail(r, "angle drift does not decrease with eps");
  if (!(r.values.back() <= c.value("tolerance", 1e-2))) fail(r, "angle drift above tolerance at the finest eps");
}

void distance_study(Report& r, const json& c, int jobs) {
  const MetricField f = metric_example(r);
  const Box region = box_key(c, "region", f.chart().domain.fattened(-0.25));
  SmoothingOptions light;
  light.rule = {c.value("radial_nodes", 17), c.value("angular_nodes", 32)};
  const SmoothingFamily family = c.contains("cell")
                                     ? family_wrt_P(f, build_covering(region, c["cell"].get<double>(), 0.1), light)
                                     : family_wrt_background(f, region, light);
  DistanceEstimate est;
  if (c.contains("curve")) {
    const auto pts = c["curve"];
    est = curve_length_limit(family, CurveSpec::line(vec_from_json(pts[0]), vec_from_json(pts[1])), r.eps, jobs,
                             c.value("panels_per_unit", 64));
  } else {
    GridDistanceOptions grid;
    grid.grid_n = c.value("grid", 24);
    grid.max_grid_n = c.value("max_grid", 4 * grid.grid_n);
    grid.jobs = jobs;
    est = nonregular_distance(family, region, vec_key(c, "x", {0.0, -0.5}), vec_key(c, "y", {0.0, 0.5}), r.eps, grid);
  }
  r.values = est.distances;
  r.verdict = r.values.size() >= 3 ? to_string(est.trend.verdict) : "MEASURED";
  for (double v : r.values) r.residuals.push_back(v - est.trend.value);
  r.params["limit"] = est.trend.value;
  r.params["liminf"] = est.trend.liminf;
  r.params["limsup"] = est.trend.limsup;
  r.tables.push_back(eps_table(r, "distance"));
  const std::string expect = c.value("expect", "CONVERGED");
  if (r.verdict != expect) fail(r, "verdict " + r.verdict + " (expected " + expect + ")");
  if (expect == "CONVERGED" && c.contains("tolerance") && !(r.values.back() <= c["tolerance"].get<double>())) {
    fail(r, "distance above tolerance at the finest eps");
  }
  if (expect == "OSCILLATING" && c.contains("amplitude") &&
      !(est.trend.limsup - est.trend.liminf >= c["amplitude"].get<double>())) {
    std::ostringstream msg;
    msg << "oscillation amplitude " << est.trend.limsup - est.trend.liminf << " below " << c["amplitude"].get<double>();
    fail(r, msg.str());
  }
}

void measure_study(Report& r, const json& c, int jobs) {
  ExampleObject obj = build_example(r.example, params_of(json{{"params", r.params}}));
  const auto* s = std::get_if<PiecewiseSurface>(&obj);
  if (!s) throw DomainError("measure: example " + r.example + " is not a surface");
  if (!c.contains("sets") || c["sets"].empty()) throw DomainError("measure: no sets given");
  MeasureOptions opt;
  opt.jobs = jobs;
  Table t{"measure", {"plus", "minus", "value", "vertex_part", "edge_part", "face_part"}, {}, {}};
  const double tol = c.value("tolerance", 1e-6);
  for (std::size_t i = 0; i < c["sets"].size(); ++i) {
    const std::string text = c["sets"][i].get<std::string>();
    const CurvatureMeasure m = measure_on_open(*s, Region::parse(text, *s), opt);
    r.values.push_back(m.value);
    const double expected = c.contains("expected") ? c["expected"][i].get<double>() : m.value;
    r.residuals.push_back(m.value - expected);
    t.labels.push_back(text);
    t.rows.push_back({m.plus, m.minus, m.value, m.vertex_part, m.edge_part, m.face_part});
    if (!(std::abs(m.value - expected) <= tol)) fail(r, "measure of " + text + " misses the expected value");
  }
  r.verdict = "MEASURED";
  r.tables.push_back(t);
}

void cantor_study(Report& r, const json& c, int) {
  const int n = c.value("resolution", 1 << 20);
  const double delta = c.value("delta", 1e-3);
  const CantorSphere sphere(n);
  const double gap = sphere.curve().closure_gap().norm();
  const double ln = std::log(2.0) / std::log(3.0);
  const auto cantor = curvature_dimension(cantor_theta, 3.0 / 16.0, geometric_windows(0.75 / 9.0, 1.0 / 3.0, 20));
  const auto arc = curvature_dimension([](double t) { return t; }, 0.3, geometric_windows(0.01, 0.5, 20));
  const auto corner = curvature_dimension([](double t) { return t < 0.3 ? 0.0 : 1.0; }, 0.3, geometric_windows(0.01, 0.5, 20));
  Table dims{"cantor", {"closure_gap", "cantor_slope", "arc_slope", "corner_slope"}, {}, {}};
  dims.rows.push_back({gap, cantor.slope, arc.slope, corner.slope});
  r.tables.push_back(dims);
  r.params["closure_gap"] = gap;
  r.params["cantor_slope"] = cantor.slope;
  r.params["arc_slope"] = arc.slope;
  r.params["corner_slope"] = corner.slope;
  if (!(gap <= 1e-3)) fail(r, "curve does not close within 1e-3");
  if (!(std::abs(cantor.slope - ln) <= 0.05)) fail(r, "curvature dimension at a Cantor point off ln2/ln3");
  if (!(std::abs(arc.slope - 1.0) <= 0.02)) fail(r, "curvature dimension on a smooth arc off 1");
  if (!(std::abs(corner.slope) <= 0.02)) fail(r, "curvature dimension at a corner off 0");
  Table t{"cantor_sphere", {"eps", "total", "off_orbit", "relative_off_orbit"}, {}, {}};
  for (double e : r.eps) {
    const auto m = sphere.smoothed_curvature(e, delta);
    r.values.push_back(m.total);
    r.residuals.push_back(m.total - 4.0 * kPi);
    t.rows.push_back({e, m.total, m.off_orbit, m.off_orbit / std::abs(m.total)});
  }
  r.tables.push_back(t);
  set_trend(r, r.values);
  if (!(std::abs(r.residuals.back()) <= 0.02 * 4.0 * kPi)) fail(r, "sphere total curvature off 4 pi by more than 2%");
  if (!(t.rows.back()[3] <= 1e-3)) fail(r, "curvature mass off the Cantor orbit above 1e-3 of the total");
}

}  // namespace

std::string Table::to_csv() const {
  std::ostringstream out;
  out << std::setprecision(17);
  if (!labels.empty()) out << "label,";
  for (std::size_t i = 0; i < header.size(); ++i) out << header[i] << (i + 1 < header.size() ? "," : "\n");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!labels.empty()) out << '"' << labels[r] << "\",";
    for (std::size_t i = 0; i < rows[r].size(); ++i) out << rows[r][i] << (i + 1 < rows[r].size() ? "," : "\n");
  }
  return out.str();
}

json Report::to_json() const {
  json j = {{"study", study},     {"example", example},     {"params", params}, {"eps", eps},
            {"values", values},   {"residuals", residuals}, {"verdict", verdict},
            {"passed", passed},   {"failures", failures},   {"wallclock_ms", wallclock_ms}};
  if (!children.empty()) {
    j["studies"] = json::array();
    for (const auto& c : children) j["studies"].push_back(c.to_json());
  }
  return j;
}

Report run_report(const json& config, int jobs) {
  const auto start = std::chrono::steady_clock::now();
  Report r;
  r.study = config.at("study").get<std::string>();
  jobs = config.value("jobs", jobs);
  if (r.study == "suite") {
    for (const auto& sub : config.at("studies")) {
      r.children.push_back(run_report(sub, jobs));
      if (!r.children.back().passed) {
        r.passed = false;
        for (const auto& f : r.children.back().failures) r.failures.push_back(f);
      }
    }
    r.verdict = r.passed ? "PASS" : "FAIL";
  } else {
    r.example = config.value("example", r.study == "cantor" ? "cantor_curve" : "");
    r.params = config.value("params", json::object());
    if (config.contains("eps")) r.eps = config["eps"].get<std::vector<double>>();
    if (r.study != "measure" && r.eps.empty()) throw DomainError(r.study + ": empty epsilon list");
    for (double e : r.eps) {
      if (!(e > 0.0)) throw DomainError(r.study + ": epsilon values must be positive");
    }
    if (r.study == "smooth") smooth_study(r, config, jobs);
    else if (r.study == "curvature") curvature_study(r, config, jobs);
    else if (r.study == "transport") transport_study(r, config, jobs);
    else if (r.study == "distance") distance_study(r, config, jobs);
    else if (r.study == "measure") measure_study(r, config, jobs);
    else if (r.study == "cantor") cantor_study(r, config, jobs);
    else throw DomainError("unknown study '" + r.study + "'");
  }
  r.wallclock_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

json with_overrides(json config, const std::vector<double>& eps, int grid) {
  if (!eps.empty()) config["eps"] = eps;
  if (grid > 0) config["grid"] = grid;
  if (config.value("study", "") == "suite") {
    for (auto& sub : config["studies"]) sub = with_overrides(sub, eps, grid);
  }
  return config;
}

void write_report(const Report& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_json_file((fs::path(dir) / "report.json").string(), report.to_json());
  for (const auto& t : report.tables) {
    std::ofstream out(fs::path(dir) / (t.name + ".csv"));
    out << t.to_csv();
  }
  for (std::size_t i = 0; i < report.children.size(); ++i) {
    write_report(report.children[i], (fs::path(dir) / (std::to_string(i) + "_" + report.children[i].study)).string());
  }
}

}  // namespace geomolt

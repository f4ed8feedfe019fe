#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geomolt/gallery/cantor.hpp"
#include "geomolt/gallery/registry.hpp"
#include "geomolt/report/report.hpp"
#include "geomolt/riemann/curvature.hpp"
#include "geomolt/surface/measure.hpp"

namespace py = pybind11;
using namespace geomolt;

namespace {

Vec to_vec(const std::vector<double>& x) {
  if (x.empty() || x.size() > static_cast<std::size_t>(kMaxDim)) throw DomainError("point must have 1 to 4 coordinates");
  Vec v(static_cast<int>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) v[static_cast<int>(i)] = x[i];
  return v;
}

py::dict measure_dict(const CurvatureMeasure& m) {
  py::dict d;
  d["plus"] = m.plus;
  d["minus"] = m.minus;
  d["value"] = m.value;
  d["vertex"] = m.vertex_part;
  d["edge"] = m.edge_part;
  d["face"] = m.face_part;
  return d;
}

}  // namespace

PYBIND11_MODULE(_geomolt, m) {
  m.doc() = "Mollified curvature of nonsmooth metrics";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SingularMetricError>(m, "SingularMetricError", PyExc_ArithmeticError);

  m.def("cantor_function", py::overload_cast<double>(&cantor_function), py::arg("x"));
  m.def("cantor_theta", &cantor_theta, py::arg("t"));
  m.def("curvature_dimension", [](double p, double h0, double q, int count) {
    const CurvatureDimension d = curvature_dimension(cantor_theta, p, geometric_windows(h0, q, count));
    return py::make_tuple(d.slope, d.flat);
  }, py::arg("p"), py::arg("h0") = 1e-2, py::arg("q") = 1.0 / 3.0, py::arg("count") = 8,
        "Slope of the Cantor tangent-angle increments at p and whether theta is flat there.");

  py::class_<CantorCurve>(m, "CantorCurve")
      .def(py::init<int>(), py::arg("resolution") = 65536)
      .def_property_readonly("resolution", &CantorCurve::resolution)
      .def("point", &CantorCurve::point)
      .def("closure_gap", &CantorCurve::closure_gap)
      .def("center_of_mass", &CantorCurve::center_of_mass)
      .def("polygon_length", &CantorCurve::polygon_length);

  py::class_<MetricField>(m, "MetricField")
      .def_property_readonly("name", &MetricField::name)
      .def_property_readonly("dim", &MetricField::dim)
      .def_property_readonly("description", &MetricField::description)
      .def("value", [](const MetricField& f, const std::vector<double>& x) {
        return Eigen::MatrixXd(f.value(to_vec(x)));
      })
      .def("gaussian_curvature", [](const MetricField& f, const std::vector<double>& x) {
        if (f.dim() != 2) throw DomainError("gaussian_curvature: 2D metrics only");
        return curvature(f, to_vec(x)).gaussian;
      });

  py::class_<PiecewiseSurface>(m, "PiecewiseSurface")
      .def_property_readonly("name", &PiecewiseSurface::name)
      .def_property_readonly("closed", &PiecewiseSurface::closed)
      .def_property_readonly("euler_characteristic", &PiecewiseSurface::euler_characteristic)
      .def_property_readonly("vertices", [](const PiecewiseSurface& s) {
        std::vector<std::string> out;
        for (const auto& v : s.vertices()) out.push_back(v.name);
        return out;
      })
      .def("vertex_measure", [](const PiecewiseSurface& s, const std::string& v) {
        return measure_dict(vertex_measure(s, s.vertex_index(v)));
      })
      .def("measure", [](const PiecewiseSurface& s, const std::string& region, int jobs) {
        MeasureOptions opt;
        opt.jobs = jobs;
        const Region r = Region::parse(region, s);
        CurvatureMeasure c;
        {
          py::gil_scoped_release release;
          c = measure_on_open(s, r, opt);
        }
        return measure_dict(c);
      }, py::arg("region"), py::arg("jobs") = 1,
         "Curvature measure of a region expression such as \"all\" or \"ball(1,1,1,0.5)\".");

  m.def("examples", [] {
    py::list out;
    for (const auto& e : registered_examples()) {
      py::dict d;
      d["name"] = e.name;
      d["kind"] = e.kind;
      d["description"] = e.description;
      d["defaults"] = e.defaults;
      out.append(d);
    }
    return out;
  });
  m.def("build_example", &build_example, py::arg("name"), py::arg("params") = ExampleParams{});
  m.def("save_example", &save_example, py::arg("path"), py::arg("name"), py::arg("params") = ExampleParams{});
  m.def("load_example", [](const std::string& path) {
    LoadedExample e = load_example(path);
    return py::make_tuple(e.name, e.params, e.object);
  });

  m.def("run_report", [](const std::string& config, int jobs) {
    const json c = json::parse(config);
    std::string out;
    {
      py::gil_scoped_release release;
      out = run_report(c, jobs).to_json().dump();
    }
    return out;
  }, py::arg("config"), py::arg("jobs") = 1, "Runs a study from a JSON config; returns the report as JSON text.");
}

#pragma once

#include "geomolt/core/json_io.hpp"
#include "geomolt/core/metric_field.hpp"
#include "geomolt/gallery/cantor.hpp"
#include "geomolt/surface/surface.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace geomolt {

using ExampleParams = std::map<std::string, double>;
using ExampleObject = std::variant<MetricField, PiecewiseSurface, CantorCurve>;

struct ExampleInfo {
  std::string name;
  /// "metric", "surface" or "curve".
  std::string kind;
  std::string description;
  ExampleParams defaults;
};

const std::vector<ExampleInfo>& registered_examples();
const ExampleInfo& example_info(const std::string& name);

/// Builds and validates a registered example. Unknown parameters and unknown names are rejected;
/// the latter with the list of registered names.
ExampleObject build_example(const std::string& name, const ExampleParams& params = {});

/// File format of a built example: the builder name and parameters, plus a description of the object
/// (fields: chart, regularity, interfaces and values on a 5 x 5 grid; surfaces: vertices, edges with
/// arc samples, faces with chart shapes and metric names; curves: resolution and closure data).
json example_to_json(const std::string& name, const ExampleParams& params, const ExampleObject& object);

struct LoadedExample {
  std::string name;
  ExampleParams params;
  ExampleObject object;
};

/// Rebuilds the example named in the file and checks that the rebuilt object reproduces the stored
/// description exactly; throws DomainError naming the first mismatch.
LoadedExample example_from_json(const json& j);

void save_example(const std::string& path, const std::string& name, const ExampleParams& params = {});
LoadedExample load_example(const std::string& path);

}  // namespace geomolt

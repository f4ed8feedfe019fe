#pragma once

#include "geomolt/core/types.hpp"

#include "json.hpp"

#include <string>

namespace geomolt {

using json = nlohmann::json;

json vec_to_json(const Vec& v);
Vec vec_from_json(const json& j);
/// Row-major nested arrays.
json mat_to_json(const Mat& m);
Mat mat_from_json(const json& j);
json box_to_json(const Box& b);
Box box_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace geomolt

#include "geomolt/core/json_io.hpp"

#include <fstream>

namespace geomolt {

json vec_to_json(const Vec& v) {
  json j = json::array();
  for (int k = 0; k < v.size(); ++k) j.push_back(v[k]);
  return j;
}

Vec vec_from_json(const json& j) {
  if (!j.is_array() || j.empty() || j.size() > kMaxDim) throw DomainError("expected a vector of 1-4 numbers");
  Vec v(static_cast<int>(j.size()));
  for (int k = 0; k < v.size(); ++k) v[k] = j[k].get<double>();
  return v;
}

json mat_to_json(const Mat& m) {
  json j = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(row);
  }
  return j;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty() || j.size() > kMaxDim) throw DomainError("expected a square matrix of size 1-4");
  const int n = static_cast<int>(j.size());
  Mat m(n, n);
  for (int r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n) throw DomainError("matrix rows must have equal length");
    for (int c = 0; c < n; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

json box_to_json(const Box& b) { return json{{"lo", vec_to_json(b.lo)}, {"hi", vec_to_json(b.hi)}}; }

Box box_from_json(const json& j) { return Box(vec_from_json(j.at("lo")), vec_from_json(j.at("hi"))); }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DomainError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace geomolt

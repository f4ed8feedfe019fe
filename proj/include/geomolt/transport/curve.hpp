#pragma once

#include "geomolt/core/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace geomolt {

struct CurveSegment {
  std::function<Vec(double)> position;
  std::function<Vec(double)> velocity;
};

/// Piecewise regular curve: segment k lives on [breakpoints[k], breakpoints[k+1]].
struct CurveSpec {
  std::vector<double> breakpoints;
  std::vector<CurveSegment> segments;
  /// One flag per edge crossing the caller declares (true = transversal).
  std::vector<bool> transversal;

  double start() const { return breakpoints.front(); }
  double end() const { return breakpoints.back(); }
  int dim() const;
  int segment_at(double t) const;
  Vec position(double t) const;
  Vec velocity(double t) const;

  /// Continuity at breakpoints and nonvanishing velocity on 100 samples per segment.
  void validate() const;
  /// Same curve with extra breakpoints inserted (used to read off the transported vector there).
  CurveSpec split_at(std::vector<double> params) const;

  static CurveSpec line(const Vec& a, const Vec& b);
  /// Unit-parameter pieces between consecutive points: t in [0, points.size() - 1].
  static CurveSpec polyline(const std::vector<Vec>& points);
  /// Latitude circle (theta, phi0 + t), t in [0, 2 pi], in (theta, phi) sphere coordinates.
  static CurveSpec latitude(double theta, double phi0 = 0.0);
  /// CSV rows "t,x1,...,xn,kind" (header optional); kind "line" joins a row to the next.
  static CurveSpec from_csv(const std::string& path);
};

}  // namespace geomolt

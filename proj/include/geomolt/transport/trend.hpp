#pragma once

#include <string>
#include <vector>

namespace geomolt {

enum class Verdict { Converged, Diverging, Oscillating, NotConverged };
std::string to_string(Verdict v);

struct Trend {
  Verdict verdict = Verdict::NotConverged;
  /// Limit estimate when CONVERGED, otherwise the last value.
  double value = 0.0;
  double liminf = 0.0;
  double limsup = 0.0;
  /// True when the limit came from geometric-tail extrapolation rather than the 2% band.
  bool extrapolated = false;
};

/// Classifies a sequence indexed by decreasing epsilon (needs at least three values):
///  - CONVERGED if the last three lie within a 2% band of their largest magnitude;
///  - CONVERGED to the Aitken limit if the last three differences shrink geometrically with
///    ratio in (0, 0.75] (and any earlier ratio agrees with that range), e.g. d_eps ~ C eps -> 0;
///  - DIVERGING if each of the last three grows by at least 20%;
///  - OSCILLATING otherwise. liminf/limsup are taken over the tail (last half, at least three values).
Trend classify_trend(const std::vector<double>& values, double band = 0.02);

}  // namespace geomolt

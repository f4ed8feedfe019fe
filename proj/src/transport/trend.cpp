#include "geomolt/transport/trend.hpp"

#include "geomolt/core/types.hpp"

#include <algorithm>
#include <cmath>

namespace geomolt {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "CONVERGED";
    case Verdict::Diverging: return "DIVERGING";
    case Verdict::Oscillating: return "OSCILLATING";
    case Verdict::NotConverged: return "NOT_CONVERGED";
  }
  return "?";
}

Trend classify_trend(const std::vector<double>& values, double band) {
  const std::size_t n = values.size();
  if (n < 3) throw DomainError("classify_trend: need at least three values");
  Trend t;
  const std::size_t start = std::min(n - 3, n / 2);
  t.liminf = *std::min_element(values.begin() + start, values.end());
  t.limsup = *std::max_element(values.begin() + start, values.end());
  t.value = values.back();
  const double a = values[n - 3], b = values[n - 2], c = values[n - 1];
  const double lo = std::min({a, b, c}), hi = std::max({a, b, c});
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (hi - lo <= band * scale) {
    t.verdict = Verdict::Converged;
    return t;
  }
  auto geometric = [](double d1, double d2) {
    if (d1 == 0.0) return false;
    const double r = d2 / d1;
    return r > 0.0 && r <= 0.75;
  };
  const double d1 = b - a, d2 = c - b;
  bool tail_ok = geometric(d1, d2);
  if (tail_ok && n >= 4) tail_ok = geometric(values[n - 3] - values[n - 4], d1);
  if (tail_ok) {
    const double r = d2 / d1;
    t.verdict = Verdict::Converged;
    t.value = c + d2 * r / (1.0 - r);
    t.extrapolated = true;
    return t;
  }
  if (a > 0.0 && b >= 1.2 * a && c >= 1.2 * b) {
    t.verdict = Verdict::Diverging;
    return t;
  }
  t.verdict = Verdict::Oscillating;
  return t;
}

}  // namespace geomolt

#include "geomolt/transport/transport.hpp"

#include "geomolt/core/connection.hpp"
#include "geomolt/core/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace geomolt {
namespace {

// Gamma(a, b)^l = sum_ij Gamma^l_ij a^i b^j.
Vec contract(const Christoffel& g, const Vec& a, const Vec& b) {
  Vec out(g.dim);
  for (int l = 0; l < g.dim; ++l) out[l] = a.dot(g.gamma[l] * b);
  return out;
}

struct Local {
  Christoffel gamma;
  Mat metric;
};

Local local_at(const JetSource& metric, const Vec& x, double t) {
  try {
    const TensorJet j = metric.jet(x, 1);
    return {christoffel_from_jet(j), j.value};
  } catch (const SingularMetricError& e) {
    std::ostringstream os;
    os << e.what() << " at curve parameter t = " << t;
    throw SingularMetricError(os.str(), e.condition());
  }
}

double gnorm(const Mat& g, const Vec& v) { return std::sqrt(std::max(0.0, v.dot(g * v))); }

}  // namespace

TransportResult integrate_transport(const JetSource& metric, const CurveSpec& curve, const Vec& v0, int steps_per_unit) {
  if (steps_per_unit <= 0) throw DomainError("integrate_transport: steps_per_unit must be positive");
  if (v0.size() != metric.dim()) throw DomainError("integrate_transport: vector dimension mismatch");
  TransportResult res;
  Vec v = v0;
  res.at_breakpoints.push_back(v);
  Local here = local_at(metric, curve.position(curve.start()), curve.start());
  const double n0 = gnorm(here.metric, v0);
  auto rhs = [](const Christoffel& g, const Vec& xdot, const Vec& w) { return Vec(-contract(g, xdot, w)); };
  for (std::size_t k = 0; k < curve.segments.size(); ++k) {
    const CurveSegment& seg = curve.segments[k];
    const double a = curve.breakpoints[k], b = curve.breakpoints[k + 1];
    const int steps = std::max(1, static_cast<int>(std::ceil(steps_per_unit * (b - a))));
    const double h = (b - a) / steps;
    // The curve is known, so only Gamma at t, t + h/2 and t + h is needed; the end value is reused.
    here = local_at(metric, seg.position(a), a);
    for (int s = 0; s < steps; ++s) {
      const double t = a + s * h;
      const Local mid = local_at(metric, seg.position(t + 0.5 * h), t + 0.5 * h);
      const Local next = local_at(metric, seg.position(t + h), t + h);
      const Vec k1 = rhs(here.gamma, seg.velocity(t), v);
      const Vec vm = seg.velocity(t + 0.5 * h);
      const Vec k2 = rhs(mid.gamma, vm, v + 0.5 * h * k1);
      const Vec k3 = rhs(mid.gamma, vm, v + 0.5 * h * k2);
      const Vec k4 = rhs(next.gamma, seg.velocity(t + h), v + h * k3);
      v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      here = next;
      if (n0 > 0.0) res.norm_drift = std::max(res.norm_drift, std::abs(gnorm(here.metric, v) - n0) / n0);
      res.samples.push_back({t + h, seg.position(t + h), seg.velocity(t + h), v});
    }
    res.at_breakpoints.push_back(v);
  }
  return res;
}

GeodesicResult geodesic_shoot(const JetSource& metric, const Vec& x, const Vec& v, double length, int steps_per_unit,
                              const std::optional<Box>& domain, const Mat& frame) {
  const int n = metric.dim();
  if (!(length >= 0.0)) throw DomainError("geodesic_shoot: length must be nonnegative");
  if (steps_per_unit <= 0) throw DomainError("geodesic_shoot: steps_per_unit must be positive");
  const Mat g0 = metric.value(x);
  const double speed = gnorm(g0, v);
  if (!(speed > 0.0)) throw DomainError("geodesic_shoot: zero initial velocity");
  const int m = frame.size() == 0 ? n : static_cast<int>(frame.cols());
  // State columns: position, velocity, then the carried frame.
  Mat state(n, 2 + m);
  state.col(0) = x;
  state.col(1) = v / speed;
  for (int c = 0; c < m; ++c) state.col(2 + c) = frame.size() == 0 ? Vec(Mat::Identity(n, n).col(c)) : Vec(frame.col(c));
  double t = 0.0;
  auto deriv = [&](const Mat& s) {
    const Local loc = local_at(metric, s.col(0), t);
    Mat d(n, 2 + m);
    d.col(0) = s.col(1);
    for (int c = 1; c < 2 + m; ++c) d.col(c) = -contract(loc.gamma, s.col(1), s.col(c));
    return d;
  };
  GeodesicResult res;
  const int steps = std::max(1, static_cast<int>(std::ceil(steps_per_unit * length)));
  const double h = length / steps;
  for (int s = 0; s < steps; ++s) {
    const Mat k1 = deriv(state);
    const Mat k2 = deriv(state + 0.5 * h * k1);
    const Mat k3 = deriv(state + 0.5 * h * k2);
    const Mat k4 = deriv(state + h * k3);
    const Mat trial = state + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (domain && !domain->contains(trial.col(0))) {
      res.exited = true;
      break;
    }
    state = trial;
    t += h;
    const double sp = state.col(1).dot(metric.value(state.col(0)) * state.col(1));
    res.speed_drift = std::max(res.speed_drift, std::abs(sp - 1.0));
  }
  res.endpoint = state.col(0);
  res.velocity = state.col(1);
  res.frame = state.rightCols(m);
  res.length = t;
  return res;
}

double curve_length(const std::function<Mat(const Vec&)>& metric, const CurveSpec& curve, int panels_per_unit) {
  double total = 0.0;
  for (std::size_t k = 0; k < curve.segments.size(); ++k) {
    const CurveSegment& seg = curve.segments[k];
    const double a = curve.breakpoints[k], b = curve.breakpoints[k + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil(panels_per_unit * (b - a))));
    total += integrate_1d(
        [&](double t) {
          const Vec d = seg.velocity(t);
          return std::sqrt(std::max(0.0, d.dot(metric(seg.position(t)) * d)));
        },
        a, b, panels, 8);
  }
  return total;
}

}  // namespace geomolt

#include "geomolt/transport/nonregular.hpp"

#include "geomolt/core/parallel.hpp"
#include "geomolt/transport/transport.hpp"

#include <cmath>
#include <sstream>

namespace geomolt {
namespace {

void check_vertices(const CurveSpec& curve, const TransportLimitOptions& options) {
  for (std::size_t k = 0; k < curve.segments.size(); ++k) {
    const double a = curve.breakpoints[k], b = curve.breakpoints[k + 1];
    for (int s = 0; s <= 1000; ++s) {
      const Vec p = curve.segments[k].position(a + (b - a) * s / 1000.0);
      for (const Vec& v : options.vertices) {
        if ((p - v).norm() <= options.vertex_clearance) {
          std::ostringstream os;
          os << "transport_limit: curve touches the vertex (" << v.transpose() << ")";
          throw DomainError(os.str());
        }
      }
    }
  }
}

double widest_reach(const Covering& c) {
  double r = 0.0;
  for (const auto& ch : c.charts()) {
    Eigen::SelfAdjointEigenSolver<Mat> es(ch.background, Eigen::EigenvaluesOnly);
    r = std::max(r, 1.0 / std::sqrt(es.eigenvalues().minCoeff()));
  }
  return r;
}

}  // namespace

TransportLimit transport_limit(const MetricField& field, const Covering& first, const Covering& second,
                               const CurveSpec& curve, const Vec& v0, const std::vector<double>& eps,
                               const TransportLimitOptions& options) {
  if (eps.size() < 2) throw DomainError("transport_limit: need at least two epsilons");
  curve.validate();
  check_vertices(curve, options);
  TransportLimit out;
  out.eps = eps;
  out.first.assign(eps.size(), Vec());
  out.second.assign(eps.size(), Vec());
  parallel_for(2 * eps.size(), options.jobs, [&](std::size_t job) {
    const std::size_t k = job / 2;
    const Covering& cov = job % 2 == 0 ? first : second;
    const SmoothedTensor g = smooth_wrt_P(field, cov, eps[k], options.smoothing);
    const Vec v = integrate_transport(g, curve, v0, options.steps_per_unit).at_breakpoints.back();
    (job % 2 == 0 ? out.first : out.second)[k] = v;
  });
  for (std::size_t k = 0; k < eps.size(); ++k) out.covering_gap = std::max(out.covering_gap, (out.first[k] - out.second[k]).norm());
  const std::size_t n = eps.size();
  out.step_gap = (out.first[n - 1] - out.first[n - 2]).norm();
  const double finest_gap = (out.first[n - 1] - out.second[n - 1]).norm();
  out.vector = out.first.back();
  out.verdict = (out.step_gap <= options.tol && finest_gap <= options.tol) ? Verdict::Converged : Verdict::NotConverged;
  return out;
}

EdgeDrift edge_angle_drift(const MetricField& field, const Covering& covering, const EdgeCrossing& c, double eps,
                           int steps_per_unit, const SmoothingOptions& smoothing) {
  if (c.start.size() != 2) throw DomainError("edge_angle_drift: 2D charts only");
  const Vec2 p = c.start, d = Vec(c.end - c.start), q = c.edge_point, e = c.edge_direction;
  const double cross = d.x() * e.y() - d.y() * e.x();
  if (std::abs(cross) <= 1e-3 * d.norm() * e.norm()) throw DomainError("edge_angle_drift: crossing is tangential");
  // p + t d = q + s e  =>  t = ((q - p) x e) / (d x e)
  const Vec2 w = q - p;
  const double t_star = (w.x() * e.y() - w.y() * e.x()) / cross;
  if (!(t_star > 0.0 && t_star < 1.0)) throw DomainError("edge_angle_drift: segment does not cross the edge");
  EdgeDrift out;
  out.epsilon = eps;
  out.crossing_parameter = t_star;
  out.window = c.window_factor * eps * widest_reach(covering) / d.norm();
  if (!(t_star - out.window > 0.0 && t_star + out.window < 1.0)) throw DomainError("edge_angle_drift: window exceeds the segment");
  const SmoothedTensor g = smooth_wrt_P(field, covering, eps, smoothing);
  const CurveSpec curve = CurveSpec::line(c.start, c.end).split_at({t_star - out.window, t_star + out.window});
  const TransportResult r = integrate_transport(g, curve, c.v0, steps_per_unit);
  auto angle = [&](double t, const Vec& v) {
    const Mat gm = g.value(curve.position(t));
    const double cosv = v.dot(gm * c.edge_direction) /
                        std::sqrt(v.dot(gm * v) * c.edge_direction.dot(gm * c.edge_direction));
    return std::acos(std::clamp(cosv, -1.0, 1.0));
  };
  out.angle_before = angle(t_star - out.window, r.at_breakpoints[1]);
  out.angle_after = angle(t_star + out.window, r.at_breakpoints[2]);
  out.drift = std::abs(out.angle_after - out.angle_before);
  return out;
}

}  // namespace geomolt

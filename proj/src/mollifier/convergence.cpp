#include "geomolt/mollifier/convergence.hpp"

#include "geomolt/core/norms.hpp"

#include <random>

namespace geomolt {

bool ConvergenceTable::decreasing(double noise_floor) const {
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (errors[i] <= noise_floor && errors[i - 1] <= noise_floor) continue;
    if (!(errors[i] < errors[i - 1])) return false;
  }
  return true;
}

ConvergenceTable convergence_report(const MetricField& field, ConvergenceMode mode, const std::vector<double>& eps,
                                    const Box& region, const ConvergenceOptions& options) {
  if (eps.empty()) throw DomainError("convergence_report: empty epsilon list");
  ConvergenceTable table;
  table.mode = mode;
  const Regularity r = field.regularity();
  if (mode == ConvergenceMode::C0Loc && (r == Regularity::LpLoc || r == Regularity::Measurable)) {
    table.warnings.push_back("C0 convergence requested for a field tagged " + to_string(r));
  }
  if (mode == ConvergenceMode::LpLoc && r == Regularity::LpLoc && options.p > field.lp_exponent()) {
    table.warnings.push_back("Lp exponent exceeds the field's local summability exponent");
  }
  if (mode == ConvergenceMode::LpLoc && r == Regularity::Measurable) {
    table.warnings.push_back("Lp convergence requested for a merely measurable field");
  }
  const Mat background = Mat::Identity(field.dim(), field.dim());
  std::vector<Vec> points = options.points;
  if (mode == ConvergenceMode::AE && points.empty()) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < options.samples; ++s) {
      Vec x(field.dim());
      for (int k = 0; k < field.dim(); ++k) x[k] = region.lo[k] + u(rng) * (region.hi[k] - region.lo[k]);
      points.push_back(x);
    }
  }
  for (double e : eps) {
    const SmoothedTensor s = options.covering ? smooth_wrt_P(field, *options.covering, e, options.smoothing)
                                              : smooth_wrt_background(field, region, e, Background::euclidean(field.dim()),
                                                                      options.smoothing);
    const TensorFn diff = [&](const Vec& x) -> std::optional<Mat> {
      auto v = field.try_eval(x);
      if (!v) return std::nullopt;
      return Mat(s.value(x) - *v);
    };
    double err = 0.0;
    switch (mode) {
      case ConvergenceMode::AE:
        for (const Vec& x : points) {
          if (auto v = pointwise_opnorm(diff, x, background)) err = std::max(err, *v);
        }
        break;
      case ConvergenceMode::C0Loc: err = c0_norm(diff, region, background, options.nodes); break;
      case ConvergenceMode::LpLoc: err = lp_norm(diff, region, options.p, background, options.nodes); break;
    }
    table.eps.push_back(e);
    table.errors.push_back(err);
  }
  return table;
}

}  // namespace geomolt

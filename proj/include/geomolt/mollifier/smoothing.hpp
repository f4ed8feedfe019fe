#pragma once

#include "geomolt/core/covering.hpp"
#include "geomolt/core/metric_field.hpp"
#include "geomolt/mollifier/kernel.hpp"
#include "geomolt/mollifier/polar_rule.hpp"

#include <memory>
#include <string>

namespace geomolt {

struct SmoothingOptions {
  PolarRuleOptions rule;
  /// Split the kernel quadrature along the field's interfaces (2D Euclidean backgrounds).
  bool interface_aware = true;
};

namespace detail {
class Smoother;
}

/// A mollified tensor field. Euclidean-background and covering smoothings carry analytic derivatives
/// (the kernel is differentiated under the integral); sphere and numeric backgrounds use difference jets.
class SmoothedTensor : public JetSource {
 public:
  enum class Mode { Background, Covering };

  explicit SmoothedTensor(std::shared_ptr<const detail::Smoother> impl);

  int dim() const override;
  TensorJet jet(const Vec& x, int order) const override;
  Mat value(const Vec& x) const override;

  Mode mode() const;
  double epsilon() const;
  const std::string& source_name() const;
  bool analytic_derivatives() const;

 private:
  std::shared_ptr<const detail::Smoother> impl_;
};

/// Smoothing with respect to a background metric, valid on `region`.
/// Rejects epsilon when the kernel support around some point of `region` leaves the field's chart.
SmoothedTensor smooth_wrt_background(const MetricField& field, const Box& region, double epsilon,
                                     const Background& background, const SmoothingOptions& options = {});
inline SmoothedTensor smooth_wrt_background(const MetricField& field, const Box& region, double epsilon) {
  return smooth_wrt_background(field, region, epsilon, Background::euclidean(field.dim()));
}

/// sum_w psi_w * (smoothing of the field in chart w against that chart's Euclidean background).
SmoothedTensor smooth_wrt_P(const MetricField& field, const Covering& covering, double epsilon,
                            const SmoothingOptions& options = {});

}  // namespace geomolt

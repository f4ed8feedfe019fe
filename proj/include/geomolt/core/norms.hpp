#pragma once

#include "geomolt/core/metric_field.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace geomolt {

/// A (0,2) tensor evaluator; nullopt marks the undefined set.
using TensorFn = std::function<std::optional<Mat>(const Vec&)>;

/// max |T(v,w)| over background-unit v, w: the largest absolute eigenvalue of the whitened matrix.
double pointwise_opnorm(const Mat& t, const Mat& background);
/// nullopt when T is undefined at x.
std::optional<double> pointwise_opnorm(const TensorFn& t, const Vec& x, const Mat& background);

/// Supremum of the pointwise norm over a tensor Gauss grid of `region`.
double c0_norm(const TensorFn& t, const Box& region, const Mat& background, int nodes = 33);
/// (integral of pointwise norm^p dV_background)^(1/p) by tensor Gauss quadrature; p >= 1.
double lp_norm(const TensorFn& t, const Box& region, double p, const Mat& background, int nodes = 33);

/// Field overloads check that `region` lies inside the field's chart.
double c0_norm(const MetricField& t, const Box& region, const Mat& background, int nodes = 33);
double lp_norm(const MetricField& t, const Box& region, double p, const Mat& background, int nodes = 33);

/// CSV with header `names...` and one row per point; columns are point coordinates then values.
void write_grid_csv(const std::string& path, const std::vector<std::string>& header, const std::vector<Vec>& points,
                    const std::vector<std::vector<double>>& values);

}  // namespace geomolt

#pragma once

#include "geomolt/core/types.hpp"

#include <functional>

namespace geomolt {

/// Per-point frame on a chart; the columns of eval(x) are the frame vectors.
struct FrameField {
  Chart chart;
  std::function<Mat(const Vec&)> eval;
  bool orthonormal = false;
};

/// Gram matrix F^T g F of a frame sample.
inline Mat gram(const Mat& frame, const Mat& metric) { return frame.transpose() * metric * frame; }

/// True when the columns are independent and, for orthonormal frames, the gram matrix is I within `tol`.
bool frame_ok(const Mat& frame, const Mat& metric, bool orthonormal, double tol = 1e-10);

}  // namespace geomolt

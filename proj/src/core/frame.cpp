#include "geomolt/core/frame.hpp"

#include <cmath>

namespace geomolt {

bool frame_ok(const Mat& frame, const Mat& metric, bool orthonormal, double tol) {
  Eigen::FullPivLU<Mat> lu(frame);
  if (lu.rank() < frame.cols()) return false;
  if (!orthonormal) return true;
  return (gram(frame, metric) - Mat::Identity(frame.cols(), frame.cols())).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace geomolt

#include "geomolt/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace geomolt {

Box::Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size() || lo.size() == 0 || lo.size() > kMaxDim) {
    throw DomainError("box: corner dimensions must agree and lie in [1, 4]");
  }
  for (int k = 0; k < lo.size(); ++k) {
    if (!(hi[k] > lo[k])) throw DomainError("box: empty domain");
  }
}

Box Box::square(double lo, double hi, int dim) {
  return Box(Vec::Constant(dim, lo), Vec::Constant(dim, hi));
}

bool Box::contains(const Vec& x, double tol) const {
  for (int k = 0; k < dim(); ++k) {
    if (x[k] < lo[k] - tol || x[k] > hi[k] + tol) return false;
  }
  return true;
}

bool Box::contains_with_margin(const Vec& x, double margin) const {
  for (int k = 0; k < dim(); ++k) {
    if (x[k] - lo[k] <= margin || hi[k] - x[k] <= margin) return false;
  }
  return true;
}

double Box::distance_to_boundary(const Vec& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < dim(); ++k) d = std::min({d, x[k] - lo[k], hi[k] - x[k]});
  return d;
}

Box Box::fattened(double r) const {
  return Box(lo.array() - r, hi.array() + r);
}

double Box::volume() const { return (hi - lo).prod(); }

bool Box::compactly_contains(const Box& inner) const {
  return ((inner.lo - lo).array() > 0.0).all() && ((hi - inner.hi).array() > 0.0).all();
}

Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<int>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Mat make_diag(std::initializer_list<double> values) {
  const int n = static_cast<int>(values.size());
  Mat m = Mat::Zero(n, n);
  int i = 0;
  for (double x : values) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

double condition_number(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double hi = ev.cwiseAbs().maxCoeff();
  const double lo = ev.cwiseAbs().minCoeff();
  if (lo == 0.0 || !std::isfinite(hi)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

Mat checked_inverse(const Mat& m, double max_condition) {
  const double cond = condition_number(m);
  if (!(cond <= max_condition)) {
    std::ostringstream os;
    os << "metric matrix is singular to working precision (condition number " << cond << ")";
    throw SingularMetricError(os.str(), cond);
  }
  return m.partialPivLu().inverse();
}

}  // namespace geomolt

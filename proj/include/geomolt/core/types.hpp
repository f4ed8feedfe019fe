#pragma once

#include <Eigen/Dense>

#include <array>
#include <numbers>
#include <stdexcept>
#include <string>

namespace geomolt {

inline constexpr int kMaxDim = 4;
inline constexpr double kPi = std::numbers::pi;

// Dynamic-size but stack-allocated: every chart here has dimension <= 4.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Raised when an operation is called outside its preconditions.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a metric matrix is numerically singular (condition number above the limit).
class SingularMetricError : public std::runtime_error {
 public:
  SingularMetricError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

/// Axis-aligned box [lo, hi] in chart coordinates.
struct Box {
  Vec lo;
  Vec hi;

  Box() = default;
  Box(Vec lo_, Vec hi_);
  static Box square(double lo, double hi, int dim = 2);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& x, double tol = 0.0) const;
  /// Strictly inside with clearance `margin` from every face.
  bool contains_with_margin(const Vec& x, double margin) const;
  double distance_to_boundary(const Vec& x) const;
  Box fattened(double r) const;
  Vec center() const { return 0.5 * (lo + hi); }
  Vec extent() const { return hi - lo; }
  double volume() const;
  bool compactly_contains(const Box& inner) const;
};

/// A coordinate chart: an identifier plus an open box domain in R^n.
struct Chart {
  std::string id;
  Box domain;

  int dim() const { return domain.dim(); }
};

Vec make_vec(std::initializer_list<double> values);
Mat make_diag(std::initializer_list<double> values);

/// Largest-to-smallest eigenvalue ratio of a symmetric matrix (infinity if singular or indefinite).
double condition_number(const Mat& m);

/// Inverse of a metric matrix via LU with partial pivoting; throws SingularMetricError above `max_condition`.
Mat checked_inverse(const Mat& m, double max_condition = 1e12);

}  // namespace geomolt

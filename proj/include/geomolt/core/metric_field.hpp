#pragma once

#include "geomolt/core/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace geomolt {

enum class Regularity { Smooth, C0, LpLoc, Measurable };

std::string to_string(Regularity r);

/// A curve in a 2D chart across which a piecewise field may jump or kink.
///
/// Segments cover straight edges and rays (use long segments for rays); ellipses
/// {y : (y-c)^T Q (y-c) = 1} cover circular creases; points cover isolated singularities.
struct Interface {
  enum class Kind { Segment, Ellipse, Point };
  Kind kind = Kind::Segment;
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();
  Mat2 shape = Mat2::Identity();

  static Interface segment(Vec2 a, Vec2 b);
  static Interface circle(Vec2 center, double radius);
  static Interface ellipse(Vec2 center, Mat2 shape);
  static Interface point(Vec2 p);

  /// Euclidean distance from x to the curve.
  double distance(const Vec2& x) const;
};

/// Value and coordinate derivatives (up to second order) of a matrix-valued field at a point.
struct TensorJet {
  int order = 0;
  Mat value;
  std::array<Mat, kMaxDim> d1;
  std::array<std::array<Mat, kMaxDim>, kMaxDim> d2;

  int dim() const { return static_cast<int>(value.rows()); }
  static TensorJet zero(int dim, int order);
};

/// Anything that can report a metric jet at a point: closed-form fields, smoothed fields.
class JetSource {
 public:
  virtual ~JetSource() = default;
  virtual int dim() const = 0;
  virtual TensorJet jet(const Vec& x, int order) const = 0;
  virtual Mat value(const Vec& x) const { return jet(x, 0).value; }
};

/// A (0,2) tensor field on one chart, possibly degenerate or undefined on a declared null set.
class MetricField : public JetSource {
 public:
  using Eval = std::function<std::optional<Mat>(const Vec&)>;

  MetricField(std::string name, Chart chart, Eval eval, Regularity regularity = Regularity::Smooth,
              double lp_exponent = 1.0);

  const std::string& name() const { return name_; }
  const Chart& chart() const { return chart_; }
  Regularity regularity() const { return regularity_; }
  double lp_exponent() const { return lp_exponent_; }
  int dim() const override { return chart_.dim(); }

  /// nullopt on the undefined set.
  std::optional<Mat> try_eval(const Vec& x) const { return eval_(x); }
  /// Value at x; throws DomainError on the undefined set.
  Mat value(const Vec& x) const override;
  /// Closed-form derivatives by Richardson-extrapolated central differences.
  TensorJet jet(const Vec& x, int order) const override;

  MetricField& with_interfaces(std::vector<Interface> interfaces);
  const std::vector<Interface>& interfaces() const { return interfaces_; }

  /// Undefined set: isolated points and segments (a subset of the interfaces).
  MetricField& with_undefined(std::vector<Interface> undefined_set);
  const std::vector<Interface>& undefined_set() const { return undefined_; }

  MetricField& with_description(std::string text);
  const std::string& description() const { return description_; }

  /// Checks symmetry everywhere defined, and positive definiteness for SMOOTH/C0 fields, at `samples` points.
  void validate(int samples = 200, unsigned seed = 7) const;

 private:
  std::string name_;
  Chart chart_;
  Eval eval_;
  Regularity regularity_;
  double lp_exponent_;
  std::vector<Interface> interfaces_;
  std::vector<Interface> undefined_;
  std::string description_;
};

/// Finite-difference jet of any pointwise evaluator (first-derivative step 1e-5, second 1e-3, both scaled by 1+|x|).
TensorJet difference_jet(const std::function<Mat(const Vec&)>& f, const Vec& x, int order);

/// Wraps a closed-form jet (analytic derivatives supplied by the caller).
class AnalyticJetSource : public JetSource {
 public:
  using Fn = std::function<TensorJet(const Vec&, int)>;
  AnalyticJetSource(int dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}
  int dim() const override { return dim_; }
  TensorJet jet(const Vec& x, int order) const override { return fn_(x, order); }

 private:
  int dim_;
  Fn fn_;
};

/// Field built from a closed form that is never undefined.
MetricField make_field(std::string name, Chart chart, std::function<Mat(const Vec&)> f,
                       Regularity regularity = Regularity::Smooth);

}  // namespace geomolt

#include "geomolt/core/metric_field.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace geomolt {

std::string to_string(Regularity r) {
  switch (r) {
    case Regularity::Smooth: return "SMOOTH";
    case Regularity::C0: return "C0";
    case Regularity::LpLoc: return "LPLOC";
    case Regularity::Measurable: return "MEASURABLE";
  }
  return "?";
}

Interface Interface::segment(Vec2 a, Vec2 b) {
  Interface i;
  i.kind = Kind::Segment;
  i.a = a;
  i.b = b;
  return i;
}

Interface Interface::circle(Vec2 center, double radius) {
  return ellipse(center, Mat2::Identity() / (radius * radius));
}

Interface Interface::ellipse(Vec2 center, Mat2 shape) {
  Interface i;
  i.kind = Kind::Ellipse;
  i.a = center;
  i.shape = shape;
  return i;
}

Interface Interface::point(Vec2 p) {
  Interface i;
  i.kind = Kind::Point;
  i.a = p;
  return i;
}

double Interface::distance(const Vec2& x) const {
  switch (kind) {
    case Kind::Point: return (x - a).norm();
    case Kind::Segment: {
      const Vec2 d = b - a;
      const double t = std::clamp((x - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
      return (x - (a + t * d)).norm();
    }
    case Kind::Ellipse: {
      // Sample-and-refine on the parametrized ellipse.
      Eigen::SelfAdjointEigenSolver<Mat2> es(shape);
      const Mat2 axes = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal();
      auto point_at = [&](double t) { return Vec2(a + axes * Vec2(std::cos(t), std::sin(t))); };
      double best_t = 0.0;
      double best = 1e300;
      const int samples = 256;
      for (int k = 0; k < samples; ++k) {
        const double t = 2.0 * kPi * k / samples;
        const double d = (point_at(t) - x).norm();
        if (d < best) {
          best = d;
          best_t = t;
        }
      }
      double lo = best_t - 2.0 * kPi / samples;
      double hi = best_t + 2.0 * kPi / samples;
      for (int it = 0; it < 80; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if ((point_at(m1) - x).norm() < (point_at(m2) - x).norm()) hi = m2; else lo = m1;
      }
      return std::min(best, (point_at(0.5 * (lo + hi)) - x).norm());
    }
  }
  return 0.0;
}

TensorJet TensorJet::zero(int dim, int order) {
  TensorJet j;
  j.order = order;
  j.value = Mat::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    j.d1[k] = Mat::Zero(dim, dim);
    for (int l = 0; l < dim; ++l) j.d2[k][l] = Mat::Zero(dim, dim);
  }
  return j;
}

MetricField::MetricField(std::string name, Chart chart, Eval eval, Regularity regularity, double lp_exponent)
    : name_(std::move(name)),
      chart_(std::move(chart)),
      eval_(std::move(eval)),
      regularity_(regularity),
      lp_exponent_(lp_exponent) {
  if (!eval_) throw DomainError("metric field '" + name_ + "': missing evaluator");
}

Mat MetricField::value(const Vec& x) const {
  auto v = eval_(x);
  if (!v) {
    std::ostringstream os;
    os << "metric field '" << name_ << "' is undefined at (" << x.transpose() << ")";
    throw DomainError(os.str());
  }
  return *v;
}

TensorJet MetricField::jet(const Vec& x, int order) const {
  return difference_jet([this](const Vec& p) { return value(p); }, x, order);
}

MetricField& MetricField::with_interfaces(std::vector<Interface> interfaces) {
  interfaces_ = std::move(interfaces);
  return *this;
}

MetricField& MetricField::with_undefined(std::vector<Interface> undefined_set) {
  for (const auto& i : undefined_set) {
    if (i.kind == Interface::Kind::Ellipse) {
      throw DomainError("undefined sets are limited to points and segments");
    }
  }
  undefined_ = std::move(undefined_set);
  return *this;
}

MetricField& MetricField::with_description(std::string text) {
  description_ = std::move(text);
  return *this;
}

void MetricField::validate(int samples, unsigned seed) const {
  std::mt19937_64 rng(seed);
  const Box& box = chart_.domain;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Vec x(dim());
    for (int k = 0; k < dim(); ++k) x[k] = box.lo[k] + u(rng) * (box.hi[k] - box.lo[k]);
    auto m = eval_(x);
    if (!m) continue;
    const double scale = std::max(1.0, m->cwiseAbs().maxCoeff());
    if ((*m - m->transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw DomainError("metric field '" + name_ + "' is not symmetric");
    }
    if (regularity_ == Regularity::Smooth || regularity_ == Regularity::C0) {
      Eigen::SelfAdjointEigenSolver<Mat> es(*m, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() <= 0.0) {
        std::ostringstream os;
        os << "metric field '" << name_ << "' is not positive definite at (" << x.transpose() << ")";
        throw DomainError(os.str());
      }
    }
  }
}

TensorJet difference_jet(const std::function<Mat(const Vec&)>& f, const Vec& x, int order) {
  const int n = static_cast<int>(x.size());
  TensorJet jet = TensorJet::zero(n, order);
  jet.value = f(x);
  if (order == 0) return jet;
  const double scale = 1.0 + x.cwiseAbs().maxCoeff();
  const double h1 = 1e-5 * scale;
  auto central1 = [&](int k, double h) {
    Vec p = x, m = x;
    p[k] += h;
    m[k] -= h;
    return Mat((f(p) - f(m)) / (2.0 * h));
  };
  for (int k = 0; k < n; ++k) {
    const Mat coarse = central1(k, h1);
    const Mat fine = central1(k, 0.5 * h1);
    jet.d1[k] = (4.0 * fine - coarse) / 3.0;
  }
  if (order < 2) return jet;
  // Second differences need a larger step: rounding error scales like eps / h^2.
  const double h2 = 1e-3 * scale;
  auto central2 = [&](int k, int l, double h) {
    if (k == l) {
      Vec p = x, m = x;
      p[k] += h;
      m[k] -= h;
      return Mat((f(p) - 2.0 * jet.value + f(m)) / (h * h));
    }
    Vec pp = x, pm = x, mp = x, mm = x;
    pp[k] += h; pp[l] += h;
    pm[k] += h; pm[l] -= h;
    mp[k] -= h; mp[l] += h;
    mm[k] -= h; mm[l] -= h;
    return Mat((f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h));
  };
  for (int k = 0; k < n; ++k) {
    for (int l = k; l < n; ++l) {
      const Mat coarse = central2(k, l, h2);
      const Mat fine = central2(k, l, 0.5 * h2);
      jet.d2[k][l] = (4.0 * fine - coarse) / 3.0;
      jet.d2[l][k] = jet.d2[k][l];
    }
  }
  return jet;
}

MetricField make_field(std::string name, Chart chart, std::function<Mat(const Vec&)> f, Regularity regularity) {
  return MetricField(std::move(name), std::move(chart),
                     [f = std::move(f)](const Vec& x) -> std::optional<Mat> { return f(x); }, regularity);
}

}  // namespace geomolt

#include "geomolt/mollifier/smoothing.hpp"

#include "geomolt/core/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace geomolt {
namespace detail {

class Smoother {
 public:
  virtual ~Smoother() = default;
  virtual int dim() const = 0;
  virtual TensorJet jet(const Vec& x, int order) const = 0;
  virtual Mat value(const Vec& x) const { return jet(x, 0).value; }
  virtual bool analytic() const = 0;
  SmoothedTensor::Mode mode = SmoothedTensor::Mode::Background;
  double epsilon = 0.0;
  std::string name;
};

}  // namespace detail

namespace {

using detail::Smoother;

struct Node {
  Vec z;
  double w;
};

// Product rules on the unit ball for dimensions without interface splitting.
const std::vector<Node>& ball_rule(int dim, const PolarRuleOptions& opt) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::vector<Node>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_tuple(dim, opt.radial_nodes, opt.angular_nodes);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<Node> nodes;
  if (dim == 1) {
    for_each_gauss_node(-1.0, 1.0, 2 * opt.radial_nodes, [&](double z, double w) { nodes.push_back({make_vec({z}), w}); });
  } else if (dim == 2) {
    for (const auto& n : plain_disk_rule(opt)) nodes.push_back({Vec(n.z), n.w});
  } else if (dim == 3) {
    const int m = std::max(8, opt.angular_nodes / 2);
    for_each_gauss_node(0.0, 1.0, opt.radial_nodes, [&](double r, double wr) {
      for_each_gauss_node(-1.0, 1.0, 16, [&](double c, double wc) {
        const double s = std::sqrt(1.0 - c * c);
        for (int j = 0; j < m; ++j) {
          const double phi = 2.0 * kPi * (j + 0.5) / m;
          nodes.push_back({make_vec({r * s * std::cos(phi), r * s * std::sin(phi), r * c}), wr * r * r * wc * 2.0 * kPi / m});
        }
      });
    });
  } else {
    throw DomainError("smoothing is implemented for chart dimensions 1-3");
  }
  return cache.emplace(key, std::move(nodes)).first->second;
}

Vec perturbation_direction(int dim) {
  Vec d(dim);
  for (int k = 0; k < dim; ++k) d[k] = 1.0 / (1.0 + 0.618 * k);
  return d.normalized();
}

// Field evaluation at a quadrature node; nodes on the undefined set are nudged off it.
Mat eval_node(const MetricField& field, Vec y) {
  if (auto v = field.try_eval(y)) return *v;
  y += 1e-12 * perturbation_direction(static_cast<int>(y.size()));
  if (auto v = field.try_eval(y)) return *v;
  std::ostringstream os;
  os << "smoothing: field '" << field.name() << "' undefined near quadrature node (" << y.transpose() << ")";
  throw DomainError(os.str());
}

std::string support_error(const MetricField& field, const Vec& x, double epsilon) {
  std::ostringstream os;
  os << "epsilon = " << epsilon << " too large for '" << field.name() << "': the kernel support around ("
     << x.transpose() << ") leaves the chart (need epsilon < distance to the chart boundary)";
  return os.str();
}

// Smoothing against a constant SPD background B = A^T A in chart coordinates.
class AffineSmoother : public Smoother {
 public:
  AffineSmoother(MetricField field, const Mat& background, double eps, SmoothingOptions options)
      : field_(std::move(field)), options_(options) {
    epsilon = eps;
    name = field_.name();
    const int n = field_.dim();
    Eigen::LLT<Mat> llt(background);
    a_ = llt.matrixU();
    ainv_ = a_.inverse();
    const Mat binv = background.inverse();
    half_ = Vec(n);
    for (int k = 0; k < n; ++k) half_[k] = eps * std::sqrt(binv(k, k));
    if (n != 2 || !options_.interface_aware || field_.interfaces().empty()) fixed_ = &ball_rule(n, options_.rule);
  }

  int dim() const override { return field_.dim(); }
  bool analytic() const override { return true; }

  void check_support(const Vec& x) const {
    const Box& d = field_.chart().domain;
    for (int k = 0; k < dim(); ++k) {
      if (x[k] - half_[k] < d.lo[k] - 1e-12 || x[k] + half_[k] > d.hi[k] + 1e-12) {
        throw DomainError(support_error(field_, x, epsilon));
      }
    }
  }

  const Vec& half_widths() const { return half_; }

  TensorJet jet(const Vec& x, int order) const override {
    check_support(x);
    const int n = dim();
    std::vector<Node> local;
    const std::vector<Node>* nodes = fixed_;
    if (!nodes) {
      const Mat2 a2 = a_;
      const auto disk = disk_rule(interfaces_in_unit_disk(field_.interfaces(), Vec2(x), a2, epsilon), options_.rule);
      local.reserve(disk.size());
      for (const auto& d : disk) local.push_back({Vec(d.z), d.w});
      nodes = &local;
    }
    // Sums in whitened coordinates: S0 = sum w h T, S1_k = sum w (-2h' z_k) T, S2_kl = sum w (2h' d_kl + 4h'' z_k z_l) T.
    Mat s0 = Mat::Zero(n, n);
    std::array<Mat, kMaxDim> s1;
    std::array<std::array<Mat, kMaxDim>, kMaxDim> s2;
    double d0 = 0.0;
    Vec d1 = Vec::Zero(n);
    Mat d2 = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) {
      s1[k] = Mat::Zero(n, n);
      for (int l = 0; l < n; ++l) s2[k][l] = Mat::Zero(n, n);
    }
    const Mat step = epsilon * ainv_;
    for (const Node& node : *nodes) {
      const ProfileJet p = profile_jet(node.z.squaredNorm());
      if (p.h == 0.0) continue;
      const Mat t = eval_node(field_, x + step * node.z);
      const double a = node.w * p.h;
      s0 += a * t;
      d0 += a;
      if (order >= 1) {
        const double c = -2.0 * node.w * p.dh;
        for (int k = 0; k < n; ++k) {
          s1[k] += (c * node.z[k]) * t;
          d1[k] += c * node.z[k];
        }
      }
      if (order >= 2) {
        for (int k = 0; k < n; ++k) {
          for (int l = k; l < n; ++l) {
            const double c = node.w * ((k == l ? 2.0 * p.dh : 0.0) + 4.0 * p.d2h * node.z[k] * node.z[l]);
            s2[k][l] += c * t;
            d2(k, l) += c;
          }
        }
      }
    }
    TensorJet jet = TensorJet::zero(n, order);
    jet.value = s0 / d0;
    if (order == 0) return jet;
    // Back to chart coordinates: d/dx_m = sum_k A_km / eps * d/dz_k.
    std::array<Mat, kMaxDim> dn;
    Vec dd = Vec::Zero(n);
    for (int m = 0; m < n; ++m) {
      dn[m] = Mat::Zero(n, n);
      for (int k = 0; k < n; ++k) {
        dn[m] += (a_(k, m) / epsilon) * s1[k];
        dd[m] += a_(k, m) / epsilon * d1[k];
      }
      jet.d1[m] = (dn[m] - jet.value * dd[m]) / d0;
    }
    if (order == 1) return jet;
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < k; ++l) {
        s2[k][l] = s2[l][k];
        d2(k, l) = d2(l, k);
      }
    }
    for (int m = 0; m < n; ++m) {
      for (int q = m; q < n; ++q) {
        Mat d2n = Mat::Zero(n, n);
        double d2d = 0.0;
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) {
            const double c = a_(k, m) * a_(l, q) / (epsilon * epsilon);
            d2n += c * s2[k][l];
            d2d += c * d2(k, l);
          }
        }
        jet.d2[m][q] = (d2n - jet.d1[m] * dd[q] - jet.d1[q] * dd[m] - jet.value * d2d) / d0;
        jet.d2[q][m] = jet.d2[m][q];
      }
    }
    return jet;
  }

 private:
  MetricField field_;
  SmoothingOptions options_;
  Mat a_;
  Mat ainv_;
  Vec half_;
  const std::vector<Node>* fixed_ = nullptr;
};

Eigen::Vector3d sphere_point(const Vec& x) {
  return {std::sin(x[0]) * std::cos(x[1]), std::sin(x[0]) * std::sin(x[1]), std::cos(x[0])};
}

Eigen::Matrix<double, 3, 2> sphere_basis(const Vec& x) {
  Eigen::Matrix<double, 3, 2> j;
  j.col(0) << std::cos(x[0]) * std::cos(x[1]), std::cos(x[0]) * std::sin(x[1]), -std::sin(x[0]);
  j.col(1) << -std::sin(x[0]) * std::sin(x[1]), std::sin(x[0]) * std::cos(x[1]), 0.0;
  return j;
}

// Smoothing on the unit sphere in (theta, phi): exact exponential map and transport along great circles.
class SphereSmoother : public Smoother {
 public:
  SphereSmoother(MetricField field, double eps, SmoothingOptions options)
      : field_(std::move(field)), options_(options) {
    epsilon = eps;
    name = field_.name();
  }
  int dim() const override { return 2; }
  bool analytic() const override { return false; }

  void check_support(const Vec& x) const {
    const Box& d = field_.chart().domain;
    const double dphi = std::asin(std::min(1.0, std::sin(epsilon) / std::sin(x[0])));
    if (x[0] - epsilon < std::max(d.lo[0], 0.0) - 1e-12 || x[0] + epsilon > std::min(d.hi[0], kPi) + 1e-12 ||
        x[1] - dphi < d.lo[1] - 1e-12 || x[1] + dphi > d.hi[1] + 1e-12) {
      throw DomainError(support_error(field_, x, epsilon));
    }
  }

  Mat value(const Vec& x) const override {
    check_support(x);
    const Eigen::Vector3d p = sphere_point(x);
    const Eigen::Matrix<double, 3, 2> jx = sphere_basis(x);
    const Eigen::Vector3d u1 = jx.col(0);
    const Eigen::Vector3d u2 = jx.col(1).normalized();
    Mat num = Mat::Zero(2, 2);
    double den = 0.0;
    const int m = options_.rule.angular_nodes;
    for (int j = 0; j < m; ++j) {
      const double alpha = 2.0 * kPi * (j + 0.5) / m;
      const Eigen::Vector3d u = std::cos(alpha) * u1 + std::sin(alpha) * u2;
      const Eigen::Vector3d nrm = p.cross(u);
      for_each_gauss_node(0.0, epsilon, options_.rule.radial_nodes, [&](double r, double wr) {
        const double w = wr * (2.0 * kPi / m) * mollifier_profile(r / epsilon) * std::sin(r);
        if (w == 0.0) return;
        const Eigen::Vector3d q = std::cos(r) * p + std::sin(r) * u;
        Vec y(2);
        y[0] = std::acos(std::clamp(q.z(), -1.0, 1.0));
        y[1] = std::atan2(q.y(), q.x());
        y[1] += 2.0 * kPi * std::round((x[1] - y[1]) / (2.0 * kPi));
        const Eigen::Vector3d tangent = -std::sin(r) * p + std::cos(r) * u;
        const Eigen::Matrix<double, 3, 2> jy = sphere_basis(y);
        const Eigen::Matrix2d pinv = (jy.transpose() * jy).inverse();
        Mat c(2, 2);
        for (int i = 0; i < 2; ++i) {
          const Eigen::Vector3d e = jx.col(i);
          const Eigen::Vector3d moved = e.dot(u) * tangent + e.dot(nrm) * nrm;
          c.col(i) = pinv * (jy.transpose() * moved);
        }
        num += w * (c.transpose() * eval_node(field_, y) * c);
        den += w;
      });
    }
    return num / den;
  }

  TensorJet jet(const Vec& x, int order) const override {
    return difference_jet([this](const Vec& p) { return value(p); }, x, order);
  }

 private:
  MetricField field_;
  SmoothingOptions options_;
};

// Smoothing against a closed-form 2D background: geodesic polar coordinates by RK4 shooting.
class NumericSmoother : public Smoother {
 public:
  NumericSmoother(MetricField field, std::function<Mat(const Vec&)> metric, double eps, SmoothingOptions options)
      : field_(std::move(field)), metric_(std::move(metric)), options_(options) {
    epsilon = eps;
    name = field_.name();
  }
  int dim() const override { return 2; }
  bool analytic() const override { return false; }

  struct RayState {
    Vec2 y, v;
    Mat2 frame;  // columns: transported coordinate basis vectors of the start point
  };

  RayState derivative(const RayState& s) const {
    const TensorJet j = difference_jet(metric_, Vec(s.y), 1);
    const Mat ginv = j.value.inverse();
    std::array<Mat2, 2> gamma;
    for (int k = 0; k < 2; ++k) {
      gamma[k].setZero();
      for (int i = 0; i < 2; ++i) {
        for (int jj = 0; jj < 2; ++jj) {
          for (int m = 0; m < 2; ++m) {
            gamma[k](i, jj) += 0.5 * ginv(k, m) * (j.d1[i](jj, m) + j.d1[jj](m, i) - j.d1[m](i, jj));
          }
        }
      }
    }
    RayState d;
    d.y = s.v;
    for (int k = 0; k < 2; ++k) {
      d.v[k] = -s.v.dot(gamma[k] * s.v);
      for (int c = 0; c < 2; ++c) d.frame(k, c) = -s.v.dot(gamma[k] * s.frame.col(c));
    }
    return d;
  }

  static RayState axpy(const RayState& s, double h, const RayState& d) {
    return {s.y + h * d.y, s.v + h * d.v, s.frame + h * d.frame};
  }

  // Positions, velocities, and transported frames at the requested radii along one geodesic ray.
  std::vector<RayState> shoot(const Vec2& x, const Vec2& v0, const std::vector<double>& radii) const {
    std::vector<RayState> out;
    RayState s{x, v0, Mat2::Identity()};
    double r = 0.0;
    const double max_step = epsilon / 64.0;
    for (double target : radii) {
      const int steps = std::max(1, static_cast<int>(std::ceil((target - r) / max_step)));
      const double h = (target - r) / steps;
      for (int i = 0; i < steps; ++i) {
        const RayState k1 = derivative(s);
        const RayState k2 = derivative(axpy(s, 0.5 * h, k1));
        const RayState k3 = derivative(axpy(s, 0.5 * h, k2));
        const RayState k4 = derivative(axpy(s, h, k3));
        s.y += h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
        s.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
        s.frame += h / 6.0 * (k1.frame + 2.0 * k2.frame + 2.0 * k3.frame + k4.frame);
      }
      r = target;
      out.push_back(s);
    }
    return out;
  }

  Mat value(const Vec& x) const override {
    const Box& d = field_.chart().domain;
    if (!d.contains(x) || d.distance_to_boundary(x) <= 0.0) throw DomainError(support_error(field_, x, epsilon));
    const Mat2 g0 = metric_(x);
    Eigen::LLT<Mat2> llt(g0);
    const Mat2 e = llt.matrixU().solve(Mat2::Identity());  // e^T g0 e = I
    std::vector<double> radii, weights;
    for_each_gauss_node(0.0, epsilon, options_.rule.radial_nodes, [&](double r, double w) {
      radii.push_back(r);
      weights.push_back(w);
    });
    const int m = options_.rule.angular_nodes;
    const double da = 1e-4;
    Mat num = Mat::Zero(2, 2);
    double den = 0.0;
    for (int j = 0; j < m; ++j) {
      const double alpha = 2.0 * kPi * (j + 0.5) / m;
      auto dir = [&](double a) { return Vec2(e * Vec2(std::cos(a), std::sin(a))); };
      const auto mid = shoot(Vec2(x), dir(alpha), radii);
      const auto plus = shoot(Vec2(x), dir(alpha + da), radii);
      const auto minus = shoot(Vec2(x), dir(alpha - da), radii);
      for (std::size_t i = 0; i < radii.size(); ++i) {
        const Vec y = mid[i].y;
        if (!d.contains(y)) throw DomainError(support_error(field_, x, epsilon));
        Mat2 jac;
        jac.col(0) = mid[i].v;
        jac.col(1) = (plus[i].y - minus[i].y) / (2.0 * da);
        const double area = std::abs(jac.determinant()) * std::sqrt(metric_(y).determinant());
        const double w = weights[i] * (2.0 * kPi / m) * mollifier_profile(radii[i] / epsilon) * area;
        if (w == 0.0) continue;
        const Mat c = mid[i].frame;
        num += w * (c.transpose() * eval_node(field_, y) * c);
        den += w;
      }
    }
    return num / den;
  }

  TensorJet jet(const Vec& x, int order) const override {
    return difference_jet([this](const Vec& p) { return value(p); }, x, order);
  }

 private:
  MetricField field_;
  std::function<Mat(const Vec&)> metric_;
  SmoothingOptions options_;
};

class CoveringSmoother : public Smoother {
 public:
  CoveringSmoother(const MetricField& field, Covering covering, double eps, SmoothingOptions options)
      : covering_(std::move(covering)) {
    epsilon = eps;
    name = field.name();
    mode = SmoothedTensor::Mode::Covering;
    const auto groups = covering_.background_groups();
    group_of_.assign(covering_.charts().size(), 0);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (int w : groups[g]) group_of_[w] = static_cast<int>(g);
      smoothers_.push_back(
          std::make_unique<AffineSmoother>(field, covering_.charts()[groups[g].front()].background, eps, options));
    }
  }

  int dim() const override { return covering_.dim(); }
  bool analytic() const override { return true; }

  TensorJet jet(const Vec& x, int order) const override {
    const int n = dim();
    const auto psi = covering_.partition(x, order);
    // Sum the partition functions inside each background group.
    std::map<int, ScalarJet> weight;
    for (const auto& [w, jet] : psi) {
      auto [it, fresh] = weight.try_emplace(group_of_[w], jet);
      if (!fresh) {
        it->second.value += jet.value;
        it->second.grad += jet.grad;
        it->second.hess += jet.hess;
      }
    }
    if (weight.size() == 1) return smoothers_[weight.begin()->first]->jet(x, order);
    TensorJet out = TensorJet::zero(n, order);
    for (const auto& [g, s] : weight) {
      const TensorJet t = smoothers_[g]->jet(x, order);
      out.value += s.value * t.value;
      if (order >= 1) {
        for (int k = 0; k < n; ++k) out.d1[k] += s.grad[k] * t.value + s.value * t.d1[k];
      }
      if (order >= 2) {
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) {
            out.d2[k][l] += s.hess(k, l) * t.value + s.grad[k] * t.d1[l] + s.grad[l] * t.d1[k] + s.value * t.d2[k][l];
          }
        }
      }
    }
    return out;
  }

 private:
  Covering covering_;
  std::vector<int> group_of_;
  std::vector<std::unique_ptr<AffineSmoother>> smoothers_;
};

}  // namespace

SmoothedTensor::SmoothedTensor(std::shared_ptr<const detail::Smoother> impl) : impl_(std::move(impl)) {}
int SmoothedTensor::dim() const { return impl_->dim(); }
TensorJet SmoothedTensor::jet(const Vec& x, int order) const {
  if (order < 0 || order > 2) throw DomainError("smoothed jets are available up to order 2");
  return impl_->jet(x, order);
}
Mat SmoothedTensor::value(const Vec& x) const { return impl_->value(x); }
SmoothedTensor::Mode SmoothedTensor::mode() const { return impl_->mode; }
double SmoothedTensor::epsilon() const { return impl_->epsilon; }
const std::string& SmoothedTensor::source_name() const { return impl_->name; }
bool SmoothedTensor::analytic_derivatives() const { return impl_->analytic(); }

SmoothedTensor smooth_wrt_background(const MetricField& field, const Box& region, double epsilon,
                                     const Background& background, const SmoothingOptions& options) {
  if (!(epsilon > 0.0)) throw DomainError("smoothing: epsilon must be positive");
  if (background.dim() != field.dim() || region.dim() != field.dim()) {
    throw DomainError("smoothing: dimension mismatch between field, region and background");
  }
  const Box& d = field.chart().domain;
  switch (background.kind) {
    case Background::Kind::Euclidean: {
      auto s = std::make_shared<AffineSmoother>(field, background.matrix, epsilon, options);
      for (int k = 0; k < field.dim(); ++k) {
        if (region.lo[k] - s->half_widths()[k] < d.lo[k] - 1e-12 || region.hi[k] + s->half_widths()[k] > d.hi[k] + 1e-12) {
          throw DomainError(support_error(field, region.center(), epsilon));
        }
      }
      return SmoothedTensor(s);
    }
    case Background::Kind::RoundSphere: {
      if (field.dim() != 2) throw DomainError("round-sphere background needs a 2D chart");
      if (epsilon >= 0.5 * kPi) throw DomainError("epsilon exceeds the injectivity radius bound on the sphere");
      auto s = std::make_shared<SphereSmoother>(field, epsilon, options);
      for (const Vec& corner : {region.lo, region.hi}) s->check_support(corner);
      return SmoothedTensor(s);
    }
    case Background::Kind::Numeric: {
      if (field.dim() != 2) throw DomainError("numeric backgrounds are implemented for 2D charts");
      return SmoothedTensor(std::make_shared<NumericSmoother>(field, background.metric, epsilon, options));
    }
  }
  throw DomainError("smoothing: unknown background");
}

SmoothedTensor smooth_wrt_P(const MetricField& field, const Covering& covering, double epsilon,
                            const SmoothingOptions& options) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw DomainError("covering smoothing needs 0 < epsilon < 1");
  if (covering.dim() != field.dim()) throw DomainError("covering and field dimensions differ");
  return SmoothedTensor(std::make_shared<CoveringSmoother>(field, covering, epsilon, options));
}

}  // namespace geomolt

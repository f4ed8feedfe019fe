#include "geomolt/core/covering.hpp"

#include "geomolt/core/json_io.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace geomolt {
namespace {

// Fraction of the half-width of U where the bump profile reaches zero; keeps supp(psi) inside the open U.
constexpr double kSupportShrink = 0.999;

struct Profile {
  double v, d1, d2;
};

// exp(1/(s^2-1)) and its first two derivatives in s.
Profile bump_profile(double s) {
  const double q = s * s - 1.0;
  if (q >= 0.0) return {0.0, 0.0, 0.0};
  const double v = std::exp(1.0 / q);
  const double q2 = q * q;
  const double d1 = v * (-2.0 * s / q2);
  const double d2 = v * (4.0 * s * s / (q2 * q2) - 2.0 / q2 + 8.0 * s * s / (q2 * q));
  return {v, d1, d2};
}

}  // namespace

Covering::Covering(Box domain, std::vector<CoveringChart> charts) : domain_(std::move(domain)), charts_(std::move(charts)) {
  if (charts_.empty()) throw DomainError("covering: no charts");
  for (std::size_t w = 0; w < charts_.size(); ++w) {
    const auto& c = charts_[w];
    if (c.inner.dim() != dim() || c.outer.dim() != dim() || c.background.rows() != dim()) {
      throw DomainError("covering: chart dimension mismatch");
    }
    if (!c.outer.compactly_contains(c.inner.fattened(1.0))) {
      std::ostringstream os;
      os << "covering: chart " << w << " violates dist(U, boundary of O) > 1";
      throw DomainError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(c.background, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0) throw DomainError("covering: background metric not positive definite");
  }
}

ScalarJet Covering::bump(int w, const Vec& x, int order) const {
  const Box& u = charts_[w].inner;
  const int n = dim();
  ScalarJet jet;
  jet.grad = Vec::Zero(n);
  jet.hess = Mat::Zero(n, n);
  std::array<Profile, kMaxDim> p;
  std::array<double, kMaxDim> scale;
  for (int k = 0; k < n; ++k) {
    const double half = 0.5 * (u.hi[k] - u.lo[k]) * kSupportShrink;
    scale[k] = 1.0 / half;
    p[k] = bump_profile((x[k] - 0.5 * (u.lo[k] + u.hi[k])) * scale[k]);
    if (p[k].v == 0.0) return jet;
  }
  jet.value = 1.0;
  for (int k = 0; k < n; ++k) jet.value *= p[k].v;
  if (order == 0) return jet;
  // The product is never zero here, so dividing out one factor is safe.
  for (int k = 0; k < n; ++k) jet.grad[k] = jet.value / p[k].v * p[k].d1 * scale[k];
  if (order == 1) return jet;
  for (int k = 0; k < n; ++k) {
    jet.hess(k, k) = jet.value / p[k].v * p[k].d2 * scale[k] * scale[k];
    for (int l = k + 1; l < n; ++l) {
      jet.hess(k, l) = jet.value / (p[k].v * p[l].v) * p[k].d1 * scale[k] * p[l].d1 * scale[l];
      jet.hess(l, k) = jet.hess(k, l);
    }
  }
  return jet;
}

std::vector<int> Covering::active(const Vec& x) const {
  std::vector<int> out;
  for (int w = 0; w < static_cast<int>(charts_.size()); ++w) {
    if (bump(w, x, 0).value > 0.0) out.push_back(w);
  }
  return out;
}

std::vector<std::pair<int, ScalarJet>> Covering::partition(const Vec& x, int order) const {
  std::vector<std::pair<int, ScalarJet>> phis;
  const int n = dim();
  ScalarJet total;
  total.grad = Vec::Zero(n);
  total.hess = Mat::Zero(n, n);
  for (int w = 0; w < static_cast<int>(charts_.size()); ++w) {
    ScalarJet b = bump(w, x, order);
    if (b.value <= 0.0) continue;
    total.value += b.value;
    total.grad += b.grad;
    total.hess += b.hess;
    phis.emplace_back(w, std::move(b));
  }
  if (phis.empty()) {
    std::ostringstream os;
    os << "covering: point (" << x.transpose() << ") is not covered";
    throw DomainError(os.str());
  }
  // psi = phi * (1/Phi); derivatives of 1/Phi first.
  const double inv = 1.0 / total.value;
  const Vec ginv = -total.grad * inv * inv;
  const Mat hinv = -total.hess * inv * inv + 2.0 * total.grad * total.grad.transpose() * inv * inv * inv;
  for (auto& [w, b] : phis) {
    ScalarJet psi;
    psi.value = b.value * inv;
    psi.grad = Vec::Zero(n);
    psi.hess = Mat::Zero(n, n);
    if (order >= 1) psi.grad = b.grad * inv + b.value * ginv;
    if (order >= 2) {
      psi.hess = b.hess * inv + b.grad * ginv.transpose() + ginv * b.grad.transpose() + b.value * hinv;
    }
    b = std::move(psi);
  }
  return phis;
}

double Covering::psi(int w, const Vec& x) const {
  for (const auto& [i, jet] : partition(x, 0)) {
    if (i == w) return jet.value;
  }
  return 0.0;
}

std::vector<std::vector<int>> Covering::background_groups() const {
  std::vector<std::vector<int>> groups;
  for (int w = 0; w < static_cast<int>(charts_.size()); ++w) {
    bool placed = false;
    for (auto& g : groups) {
      if (charts_[g.front()].background == charts_[w].background) {
        g.push_back(w);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({w});
  }
  return groups;
}

json Covering::to_json() const {
  json charts = json::array();
  for (const auto& c : charts_) {
    charts.push_back({{"inner", box_to_json(c.inner)},
                      {"outer", box_to_json(c.outer)},
                      {"background", mat_to_json(c.background)}});
  }
  return {{"domain", box_to_json(domain_)}, {"charts", charts}};
}

Covering Covering::from_json(const json& j) {
  std::vector<CoveringChart> charts;
  for (const auto& c : j.at("charts")) {
    charts.push_back({box_from_json(c.at("inner")), box_from_json(c.at("outer")), mat_from_json(c.at("background"))});
  }
  return Covering(box_from_json(j.at("domain")), std::move(charts));
}

Covering build_covering(const Box& domain, double cell_size, double overlap, const CoveringOptions& options) {
  if (!(cell_size > 0.0)) throw DomainError("build_covering: cell_size must be positive");
  if (!(overlap > 0.0) || !(overlap < cell_size)) throw DomainError("build_covering: need 0 < overlap < cell_size");
  if (!(options.margin > 1.0)) throw DomainError("build_covering: margin must exceed 1");
  const int n = domain.dim();
  std::array<int, kMaxDim> counts{};
  std::size_t total = 1;
  for (int k = 0; k < n; ++k) {
    counts[k] = std::max(1, static_cast<int>(std::ceil((domain.hi[k] - domain.lo[k]) / cell_size - 1e-9)));
    total *= counts[k];
  }
  std::vector<CoveringChart> charts;
  charts.reserve(total);
  std::array<int, kMaxDim> idx{};
  for (std::size_t c = 0; c < total; ++c) {
    Vec lo(n), hi(n);
    for (int k = 0; k < n; ++k) {
      lo[k] = domain.lo[k] + idx[k] * cell_size;
      hi[k] = lo[k] + cell_size;
    }
    Box inner = Box(lo, hi).fattened(overlap);
    Mat background = Mat::Identity(n, n);
    if (options.jitter > 0.0) {
      std::mt19937_64 rng(options.seed * 1000003ULL + c);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      Mat scales = Mat::Zero(n, n);
      for (int k = 0; k < n; ++k) scales(k, k) = std::exp(options.jitter * u(rng));
      Mat rot = Mat::Identity(n, n);
      if (n >= 2) {
        const double a = options.jitter * u(rng);
        rot(0, 0) = std::cos(a);
        rot(0, 1) = -std::sin(a);
        rot(1, 0) = std::sin(a);
        rot(1, 1) = std::cos(a);
      }
      background = rot.transpose() * scales * rot;
      background = 0.5 * (background + background.transpose()).eval();
    }
    charts.push_back({inner, inner.fattened(options.margin), background});
    for (int k = 0; k < n; ++k) {
      if (++idx[k] < counts[k]) break;
      idx[k] = 0;
    }
  }
  return Covering(domain, std::move(charts));
}

}  // namespace geomolt

#include "geomolt/transport/curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace geomolt {

int CurveSpec::dim() const { return static_cast<int>(segments.front().position(start()).size()); }

int CurveSpec::segment_at(double t) const {
  if (t < start() - 1e-12 || t > end() + 1e-12) throw DomainError("curve: parameter outside the curve");
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  int k = static_cast<int>(it - breakpoints.begin()) - 1;
  return std::clamp(k, 0, static_cast<int>(segments.size()) - 1);
}

Vec CurveSpec::position(double t) const { return segments[segment_at(t)].position(t); }
Vec CurveSpec::velocity(double t) const { return segments[segment_at(t)].velocity(t); }

void CurveSpec::validate() const {
  if (segments.empty() || breakpoints.size() != segments.size() + 1) {
    throw DomainError("curve: need one more breakpoint than segments");
  }
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    if (!(breakpoints[k + 1] > breakpoints[k])) throw DomainError("curve: breakpoints must increase");
  }
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const double a = breakpoints[k], b = breakpoints[k + 1];
    for (int s = 0; s <= 100; ++s) {
      const double t = a + (b - a) * s / 100.0;
      if (segments[k].velocity(t).norm() < 1e-12) {
        std::ostringstream os;
        os << "curve: segment " << k << " is not regular at t = " << t;
        throw DomainError(os.str());
      }
    }
    if (k + 1 < segments.size()) {
      const Vec left = segments[k].position(b), right = segments[k + 1].position(b);
      if ((left - right).norm() > 1e-9 * (1.0 + left.norm())) {
        std::ostringstream os;
        os << "curve: discontinuous at breakpoint t = " << b;
        throw DomainError(os.str());
      }
    }
  }
}

CurveSpec CurveSpec::split_at(std::vector<double> params) const {
  CurveSpec out;
  out.transversal = transversal;
  std::vector<double> all = breakpoints;
  for (double p : params) {
    if (p <= start() || p >= end()) throw DomainError("curve: split parameter outside the open interval");
    all.push_back(p);
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }), all.end());
  out.breakpoints = all;
  for (std::size_t k = 0; k + 1 < all.size(); ++k) out.segments.push_back(segments[segment_at(0.5 * (all[k] + all[k + 1]))]);
  return out;
}

CurveSpec CurveSpec::line(const Vec& a, const Vec& b) { return polyline({a, b}); }

CurveSpec CurveSpec::polyline(const std::vector<Vec>& points) {
  if (points.size() < 2) throw DomainError("polyline: need at least two points");
  CurveSpec c;
  for (std::size_t k = 0; k < points.size(); ++k) c.breakpoints.push_back(static_cast<double>(k));
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const Vec a = points[k], d = points[k + 1] - points[k];
    const double t0 = static_cast<double>(k);
    c.segments.push_back({[a, d, t0](double t) { return Vec(a + (t - t0) * d); }, [d](double) { return d; }});
  }
  c.validate();
  return c;
}

CurveSpec CurveSpec::latitude(double theta, double phi0) {
  CurveSpec c;
  c.breakpoints = {0.0, 2.0 * kPi};
  c.segments.push_back({[theta, phi0](double t) { return make_vec({theta, phi0 + t}); },
                        [](double) { return make_vec({0.0, 1.0}); }});
  return c;
}

CurveSpec CurveSpec::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open curve file " + path);
  std::vector<double> ts;
  std::vector<Vec> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() < 3) throw DomainError("curve file: rows need t, coordinates and a kind");
    char* endp = nullptr;
    const double t = std::strtod(cells[0].c_str(), &endp);
    if (endp == cells[0].c_str()) continue;  // header
    const std::string kind = cells.back();
    if (kind.find("line") == std::string::npos) throw DomainError("curve file: unsupported segment kind '" + kind + "'");
    Vec x(static_cast<int>(cells.size()) - 2);
    for (int k = 0; k < x.size(); ++k) x[k] = std::stod(cells[k + 1]);
    ts.push_back(t);
    pts.push_back(x);
  }
  if (pts.size() < 2) throw DomainError("curve file: need at least two rows");
  CurveSpec c;
  c.breakpoints = ts;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const Vec a = pts[k];
    const double t0 = ts[k], span = ts[k + 1] - ts[k];
    const Vec d = (pts[k + 1] - pts[k]) / span;
    c.segments.push_back({[a, d, t0](double t) { return Vec(a + (t - t0) * d); }, [d](double) { return d; }});
  }
  c.validate();
  return c;
}

}  // namespace geomolt
